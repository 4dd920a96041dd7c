"""
Tests for word, chunk and clause alignment
"""

from itertools import combinations, permutations, product

import numpy as np
import pytest

from cogease import alignment as al
from cogease.model import AnnotatedUnit, Chunk, Clause, MatchStage, Token

vocabulary = [f"w{i}" for i in range(10)]


def tokens(*surfaces, lemmas=None) -> tuple[Token, ...]:
    lemmas = lemmas or [None] * len(surfaces)
    return tuple(
        Token(surface=s, lemma=lemma, index=i)
        for i, (s, lemma) in enumerate(zip(surfaces, lemmas))
    )


def crossings_of(links) -> int:
    return sum(
        1 for (a, b), (c, d) in combinations(links, 2) if (a - c) * (b - d) < 0
    )


def brute_force(cand: list[str], ref: list[str]) -> tuple[int, int]:
    """
    Largest matching size, and fewest crossings among
    matchings of that size, by enumeration.
    """
    options_per_word = []
    for word in sorted(set(cand) & set(ref)):
        c_pos = [i for i, w in enumerate(cand) if w == word]
        r_pos = [i for i, w in enumerate(ref) if w == word]
        k = min(len(c_pos), len(r_pos))
        options_per_word.append(
            [
                list(zip(cs, rs))
                for cs in combinations(c_pos, k)
                for rs in permutations(r_pos, k)
            ]
        )
    size = sum(len(options[0]) for options in options_per_word)
    fewest = min(
        (crossings_of([link for part in choice for link in part])
         for choice in product(*options_per_word)),
        default=0,
    )
    return size, fewest


def n_links(cand: list[str], ref: list[str]) -> int:
    return sum(1 for c in cand for r in ref if c == r)


@pytest.mark.parametrize(
    ["a", "b", "stage", "expected"],
    [
        [Token("The"), Token("the"), MatchStage.EXACT, True],
        [Token("cats"), Token("cat"), MatchStage.EXACT, False],
        [Token("sat", lemma="sit"), Token("sits", lemma="sit"), MatchStage.STEM, True],
        [Token("cats"), Token("cat"), MatchStage.STEM, False],
        [Token("big"), Token("large"), MatchStage.SYNONYM, False],
    ],
)
def test_match_tokens_default_resources(a, b, stage, expected):
    assert al.match_tokens(a, b, stage) is expected


def test_match_tokens_with_resources():
    resources = al.AlignmentResources(
        stemmer=al.SuffixStemmer((("s", ""),)),
        synonyms=al.SynonymTable.from_sets([["big", "large"]]),
    )
    assert al.match_tokens(Token("Cats"), Token("cat"), MatchStage.STEM, resources)
    assert al.match_tokens(Token("big"), Token("Large"), MatchStage.SYNONYM, resources)
    assert al.match_any_stage(Token("big"), Token("large"), resources)
    assert not al.match_any_stage(Token("big"), Token("small"), resources)
    assert resources.stages[-1] is MatchStage.SYNONYM
    assert MatchStage.SYNONYM not in al.default_resources.stages


@pytest.mark.parametrize(
    ["links", "expected"],
    [
        [[], 0],
        [[(0, 0), (1, 1)], 0],
        [[(0, 1), (1, 0)], 1],
        [[(0, 2), (1, 1), (2, 0)], 3],
        [[(2, 0), (0, 2), (1, 1)], 3],
    ],
)
def test_count_crossings(links, expected):
    assert al.count_crossings(links) == expected


def test_maximum_matching():
    assert al.maximum_matching({0: [0, 1], 1: [0]}) == {0: 1, 1: 0}
    contended = al.maximum_matching({0: [0], 1: [0]})
    assert len(contended) == 1 and set(contended.values()) == {0}
    assert al.maximum_matching({0: [2, 5], 3: [5]}) == {0: 2, 3: 5}
    assert al.maximum_matching({}) == {}


@pytest.mark.parametrize(
    ["cand", "ref", "expected_links", "expected_crossings"],
    [
        ["the cat sat", "the cat sat", [(0, 0), (1, 1), (2, 2)], 0],
        ["the cat sat", "a cat sat", [(1, 1), (2, 2)], 0],
        ["sat cat", "cat sat", [(0, 1), (1, 0)], 1],
    ],
)
def test_align_words(cand, ref, expected_links, expected_crossings):
    alignment = al.align_words(tokens(*cand.split()), tokens(*ref.split()))
    assert alignment.links == expected_links
    assert alignment.crossings == expected_crossings


def test_later_stages_never_take_exact_matches():
    resources = al.AlignmentResources(stemmer=al.SuffixStemmer((("s", ""),)))
    rng = np.random.default_rng(22)
    words = ["cat", "cats", "dog", "dogs", "sit"]
    for _ in range(300):
        cand = list(rng.choice(words, size=rng.integers(1, 8)))
        ref = list(rng.choice(words, size=rng.integers(1, 8)))
        alignment = al.align_words(tokens(*cand), tokens(*ref), resources)
        exact_only, _ = brute_force(cand, ref)
        assert alignment.stage_counts()[MatchStage.EXACT] == exact_only


def test_align_words_prefers_fewer_crossings():
    alignment = al.align_words(tokens("a", "b", "a"), tokens("a", "a"))
    assert alignment.links == [(0, 0), (2, 1)]
    assert alignment.crossings == 0
    assert alignment.stage_counts() == {MatchStage.EXACT: 2}


def test_align_words_stages():
    resources = al.AlignmentResources(
        stemmer=al.SuffixStemmer((("s", ""),)),
        synonyms=al.SynonymTable.from_sets([["big", "large"]]),
    )
    alignment = al.align_words(
        tokens("the", "big", "cats"), tokens("The", "cat", "large"), resources
    )
    stages = {(p.candidate, p.reference): p.stage for p in alignment.pairs}
    assert stages == {
        (0, 0): MatchStage.EXACT,
        (2, 1): MatchStage.STEM,
        (1, 2): MatchStage.SYNONYM,
    }
    assert alignment.crossings == 1


def test_exact_matches_are_never_displaced():
    # "sits" could stem-match either side, but the exact
    # stage has already claimed the reference token
    resources = al.AlignmentResources(stemmer=al.SuffixStemmer((("s", ""),)))
    alignment = al.align_words(tokens("sit", "sits"), tokens("sit"), resources)
    assert alignment.links == [(0, 0)]
    assert alignment.pairs[0].stage is MatchStage.EXACT


def test_align_words_empty():
    alignment = al.align_words((), tokens("a"))
    assert len(alignment) == 0
    assert alignment.candidate_length == 0
    assert alignment.reference_length == 1


def test_greedy_crossing_reduction(monkeypatch):
    monkeypatch.setattr(al, "exhaustive_link_limit", 0)
    alignment = al.align_words(tokens("a", "a", "a"), tokens("a", "a", "a"))
    assert len(alignment) == 3
    assert alignment.crossings == 0


def test_alignment_matches_brute_force():
    rng = np.random.default_rng(20)
    checked = 0
    for _ in range(500):
        cand = list(rng.choice(vocabulary, size=rng.integers(0, 9)))
        ref = list(rng.choice(vocabulary, size=rng.integers(0, 9)))
        alignment = al.align_words(tokens(*cand), tokens(*ref))
        size, fewest = brute_force(cand, ref)
        assert len(alignment) == size
        if n_links(cand, ref) <= al.exhaustive_link_limit:
            assert alignment.crossings == fewest
            checked += 1
        else:
            assert alignment.crossings >= fewest
    assert checked > 250


def test_alignment_is_injective_and_consistent():
    rng = np.random.default_rng(21)
    small_vocabulary = ["a", "b", "c", "A", "d"]
    for _ in range(10_000):
        cand = list(rng.choice(small_vocabulary, size=rng.integers(0, 10)))
        ref = list(rng.choice(small_vocabulary, size=rng.integers(0, 10)))
        alignment = al.align_words(tokens(*cand), tokens(*ref))
        cand_side = [p.candidate for p in alignment.pairs]
        ref_side = [p.reference for p in alignment.pairs]
        assert len(set(cand_side)) == len(cand_side)
        assert len(set(ref_side)) == len(ref_side)
        for c, r in alignment.links:
            assert cand[c].lower() == ref[r].lower()


def test_align_chunks():
    cand = tokens("a", "b", "c", "d")
    ref = tokens("a", "b", "c", "d")
    word_alignment = al.align_words(cand, ref)
    cand_chunks = (Chunk((0, 2), 1, id=0), Chunk((2, 4), 3, id=1))
    ref_chunks = (Chunk((0, 1), 0, id=0), Chunk((1, 4), 3, id=1))
    alignment = al.align_chunks(cand_chunks, ref_chunks, word_alignment)
    assert alignment.pairs == ((0, 0), (1, 1))
    assert alignment.mapping() == {0: 0, 1: 1}

    assert al.align_chunks(None, ref_chunks, word_alignment) is None
    assert al.align_chunks((), ref_chunks, word_alignment) is None


def test_align_chunks_needs_shared_links():
    word_alignment = al.align_words(tokens("a", "b"), tokens("c", "d"))
    alignment = al.align_chunks(
        (Chunk((0, 2), 0, id=0),), (Chunk((0, 2), 0, id=0),), word_alignment
    )
    assert len(alignment) == 0


def test_align_clauses():
    chunks = (Chunk((0, 1), 0, id=0), Chunk((1, 2), 1, id=1))
    cand = AnnotatedUnit(
        "a b",
        tokens("a", "b"),
        chunks=chunks,
        clauses=(Clause((0,), id=0), Clause((1,), id=1)),
    )
    ref = AnnotatedUnit("a b", tokens("a", "b"), chunks=chunks, clauses=(Clause((0, 1), id=0),))
    chunk_alignment = al.align_chunks(
        cand.chunks, ref.chunks, al.align_words(cand.tokens, ref.tokens)
    )
    clause_alignment = al.align_clauses(cand, ref, chunk_alignment)
    assert clause_alignment.pairs == ((0, 0),)
    assert al.align_clauses(cand, ref, None) is None
    assert al.clause_head(cand.clauses[1], cand.chunk_by_id()) == 1


def test_long_repeated_tokens():
    cand = tokens(*(["the"] * 1200))
    ref = tokens(*(["the"] * 1000 + ["cat"] * 200))
    alignment = al.align_words(cand, ref)
    assert len(alignment) == 1000
    assert alignment.crossings == 0
    assert [r for _, r in alignment.links] == list(range(1000))
