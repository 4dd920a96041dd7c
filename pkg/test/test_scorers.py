"""
Tests for the per-level parameter scorers
"""

from contextlib import nullcontext as does_not_raise
from functools import lru_cache

import numpy as np
import pytest

from cogease import scorers as s
from cogease.alignment import (
    ChunkAlignment,
    ClauseAlignment,
    align_chunks,
    align_clauses,
    align_words,
)
from cogease.defaults import get_default_profile
from cogease.ingest import Lexicon
from cogease.model import (
    AnnotatedUnit,
    Chunk,
    Clause,
    DiscourseAnnotation,
    DiscourseRelation,
    Level,
    ParameterKind,
    Token,
    WordClass,
)

profile = get_default_profile()


def unit(text: str, **layers) -> AnnotatedUnit:
    tokens = tuple(Token(surface=w, index=i) for i, w in enumerate(text.split()))
    return AnnotatedUnit(text, tokens, **layers)


def lexicon(words, ave_sentence_len=20, ave_chunks_per_sentence=4, terms=()):
    return Lexicon(
        frequency={w: 10 for w in words},
        ave_sentence_len=ave_sentence_len,
        ave_chunks_per_sentence=ave_chunks_per_sentence,
        term_set=frozenset(terms),
    )


def word_params(cand, ref, lex=None):
    return s.word_parameters(cand, ref, align_words(cand.tokens, ref.tokens), lex)


def one_token_chunks(n: int) -> tuple[Chunk, ...]:
    return tuple(Chunk((i, i + 1), i, id=i) for i in range(n))


def test_identical_sentences_word_level():
    text = " ".join(f"w{i}" for i in range(10))
    P, Q = word_params(unit(text), unit(text), lexicon(text.split()))
    assert P == {"lex": 1.0}
    assert Q == {"nword": 0.5, "uncom": 0.0, "term": 0.0}


def test_partial_match_word_level():
    P, _ = word_params(unit("the cat sat"), unit("a cat sat"))
    assert P["lex"] == pytest.approx(2 / 3, abs=1e-4)


def test_long_candidate_clamps():
    text = " ".join(["w"] * 30)
    _, Q = word_params(unit(text), unit("w"), lexicon(["w"]))
    assert Q["nword"] == 1.0


def test_uncommon_and_term_tokens():
    lex = lexicon(["the", "showed"], ave_sentence_len=10, terms=["ecg"])
    _, Q = word_params(unit("the ECG showed ischaemia"), unit("the ECG"), lex)
    assert Q["uncom"] == pytest.approx(0.2)
    assert Q["term"] == pytest.approx(0.1)


def test_empty_candidate_scores_zero():
    cand = AnnotatedUnit("", ())
    P, Q = word_params(cand, unit("the cat"), lexicon(["the"]))
    assert P == {"lex": 0.0}
    assert Q == {"nword": 0.0, "uncom": 0.0, "term": 0.0}
    score = s.score_word_level(
        cand, unit("the cat"), align_words((), unit("the cat").tokens), None, profile[Level.WORD]
    )
    assert score.A == 0
    assert score.G == 0


def test_function_word_adequacy():
    def classed(words, classes):
        return AnnotatedUnit(
            " ".join(words),
            tuple(
                Token(w, word_class=WordClass(c), index=i)
                for i, (w, c) in enumerate(zip(words, classes))
            ),
        )

    cand = classed(["the", "cat", "sat", "on"], ["function", "content", "content", "function"])
    ref = classed(["the", "cat", "sat", "in"], ["function", "content", "content", "function"])
    P, _ = word_params(cand, ref)
    assert P["pos"] == pytest.approx(0.5)

    # without classes on one side, pos folds into lex
    P, _ = word_params(cand, unit("the cat sat in"))
    assert "pos" not in P
    score = s.score_word_level(
        cand,
        unit("the cat sat in"),
        align_words(cand.tokens, unit("the cat sat in").tokens),
        None,
        profile[Level.WORD],
    )
    assert score.alpha == {"lex": 1.0}


def test_word_level_ignores_case():
    rng = np.random.default_rng(30)
    words = ["alpha", "beta", "gamma", "delta", "eps"]
    for _ in range(100):
        cand = list(rng.choice(words, size=rng.integers(1, 8)))
        ref = list(rng.choice(words, size=rng.integers(1, 8)))
        shouted = [w.upper() if rng.uniform() < 0.5 else w for w in cand]
        lex = lexicon(words[:3])
        plain = word_params(unit(" ".join(cand)), unit(" ".join(ref)), lex)
        mixed = word_params(unit(" ".join(shouted)), unit(" ".join(ref)), lex)
        assert plain == mixed


def test_identical_chunking():
    chunks = (Chunk((0, 2), 1, frozenset({0}), id=0), Chunk((2, 3), 2, id=1))
    cand = unit("On Monday rain", chunks=chunks)
    ref = unit("on monday rain", chunks=chunks)
    alignment = align_chunks(chunks, chunks, align_words(cand.tokens, ref.tokens))
    P, Q = s.chunk_parameters(cand, ref, alignment)
    assert P == {"head": 1.0, "vibh": 1.0}
    assert Q == {"words_per_chunk": pytest.approx(1.5 / 5)}


def test_head_adequacy_arithmetic():
    cand = unit("a b c", chunks=one_token_chunks(3))
    ref = unit("a b x d", chunks=one_token_chunks(4))
    alignment = ChunkAlignment(((0, 0), (1, 1), (2, 2)))
    P, _ = s.chunk_parameters(cand, ref, alignment)
    assert P["head"] == pytest.approx(0.5128, abs=1e-4)


def test_chunk_disfluency():
    cand = unit(
        "a b c d e f",
        chunks=one_token_chunks(5) + (Chunk((5, 6), 5, is_named_entity=True, id=5),),
    )
    ref = unit("a b c d e f", chunks=one_token_chunks(6))
    alignment = align_chunks(cand.chunks, ref.chunks, align_words(cand.tokens, ref.tokens))
    _, Q = s.chunk_parameters(cand, ref, alignment, lexicon(["a", "b"]))
    assert Q["nchunk"] == 1.0
    assert Q["uncom_ne"] == pytest.approx(1 / 6)
    assert Q["words_per_chunk"] == pytest.approx(0.2)


def test_markers_compare_as_multisets():
    cand = unit("to the house", chunks=(Chunk((0, 3), 2, frozenset({0, 1}), id=0),))
    ref = unit("the to house", chunks=(Chunk((0, 3), 2, frozenset({0, 1}), id=0),))
    P, _ = s.chunk_parameters(cand, ref, ChunkAlignment(((0, 0),)))
    assert P["vibh"] == 1.0
    ref = unit("to a house", chunks=(Chunk((0, 3), 2, frozenset({0, 1}), id=0),))
    P, _ = s.chunk_parameters(cand, ref, ChunkAlignment(((0, 0),)))
    assert P["vibh"] == 0.0


def test_missing_chunks_make_level_inactive():
    cand = unit("a b", chunks=one_token_chunks(2))
    ref = unit("a b")
    assert s.chunk_parameters(cand, ref, None) is None
    score = s.score_chunk_level(cand, ref, None, None, profile[Level.CHUNK])
    assert not score.active
    assert score.G is None


def clause_unit(text, chunks, clauses, **layers):
    return unit(text, chunks=chunks, clauses=clauses, **layers)


def clause_params(cand, ref):
    chunk_alignment = align_chunks(
        cand.chunks, ref.chunks, align_words(cand.tokens, ref.tokens)
    )
    clause_alignment = align_clauses(cand, ref, chunk_alignment)
    return s.clause_parameters(cand, ref, chunk_alignment, clause_alignment)


def test_identical_clause_structure():
    chunks = one_token_chunks(4)
    clauses = (Clause((0, 1), id=0), Clause((2, 3), parent=0, relation_label="rel", id=1))
    u = clause_unit("a b c d", chunks, clauses)
    P, Q = clause_params(u, u)
    assert P == {"intra": 1.0, "inter": 1.0}
    assert Q["fragmentation"] == 0.0
    assert Q["chunks_per_clause"] == pytest.approx(2 / 6)
    assert Q["long_dist"] == pytest.approx(2 / 4)


def test_fragmented_clause():
    chunks = (Chunk((0, 2), 0, id=0), Chunk((2, 6), 2, id=1), Chunk((6, 8), 6, id=2))
    u = clause_unit("a b c d e f g h", chunks, (Clause((0, 2), id=0),))
    _, Q = clause_params(u, u)
    assert Q["fragmentation"] == pytest.approx(0.5)


def test_single_clause_folds_inter_into_intra():
    u = clause_unit("a b", one_token_chunks(2), (Clause((0, 1), id=0),))
    chunk_alignment = align_chunks(u.chunks, u.chunks, align_words(u.tokens, u.tokens))
    score = s.score_clause_level(
        u, u, chunk_alignment, align_clauses(u, u, chunk_alignment), profile[Level.CLAUSE]
    )
    assert "inter" not in score.P
    assert score.alpha == {"intra": 1.0}
    assert "long_dist" not in score.Q


def test_reordered_clause_membership():
    chunks = one_token_chunks(4)
    cand = clause_unit("a b c d", chunks, (Clause((0, 1), id=0), Clause((2, 3), id=1)))
    ref = clause_unit("a b c d", chunks, (Clause((0, 2), id=0), Clause((1, 3), id=1)))
    P, _ = clause_params(cand, ref)
    # clause 0 pairs with clause 0, clause 1 with clause 1:
    # chunks 0 and 3 keep their clause, 1 and 2 do not
    assert P["intra"] == pytest.approx(0.5)


def discourse_unit(topic, focus, relations=(), n_clauses=4):
    return unit(
        " ".join("abcdefgh"[:n_clauses]),
        chunks=one_token_chunks(n_clauses),
        clauses=tuple(Clause((i,), id=i) for i in range(n_clauses)),
        discourse=DiscourseAnnotation(topic, focus, tuple(relations)),
    )


def test_identical_discourse():
    u = discourse_unit("Rain", "Monday", [DiscourseRelation(0, 1, "cause")])
    P, Q = s.discourse_parameters(u, u)
    assert P == {"topic_focus": 1.0, "relations": 1.0}
    assert Q == {"linked_dist": pytest.approx(1 / 4)}


def test_topic_matches_focus_differs():
    cand = discourse_unit("rain", "monday")
    ref = discourse_unit("Rain", "tuesday")
    P, Q = s.discourse_parameters(cand, ref)
    assert P == {"topic_focus": 0.5}
    assert Q == {"linked_dist": 0.0}


def test_long_distance_relation():
    u = discourse_unit(None, None, [DiscourseRelation(0, 3, "contrast")])
    score = s.score_discourse_level(u, u, profile[Level.DISCOURSE])
    assert score.Q["linked_dist"] == pytest.approx(0.75)
    assert score.B == score.Q["linked_dist"]
    assert score.P["topic_focus"] == 1.0


def test_relations_map_through_clause_alignment():
    cand = discourse_unit(None, None, [DiscourseRelation(0, 1, "cause")], n_clauses=2)
    ref = discourse_unit(None, None, [DiscourseRelation(1, 0, "cause")], n_clauses=2)
    P, _ = s.discourse_parameters(cand, ref, ClauseAlignment(((0, 1), (1, 0))))
    assert P["relations"] == 1.0
    P, _ = s.discourse_parameters(cand, ref)
    assert P["relations"] == 0.0


@pytest.mark.parametrize(
    ["n_src", "n_cand", "expected", "context"],
    [
        [5, 5, 1.0, does_not_raise()],
        [10, 9, 0.9, does_not_raise()],
        [10, 8, 0.9, does_not_raise()],
        [10, 7, 0.75, does_not_raise()],
        [10, 13, 0.75, does_not_raise()],
        [10, 6, 0.0, does_not_raise()],
        [3, 0, 0.0, does_not_raise()],
        [0, 2, None, pytest.raises(ValueError, match="non-empty")],
    ],
)
def test_compare_length(n_src, n_cand, expected, context):
    with context:
        assert s.compare_length(["e"] * n_src, ["e"] * n_cand) == expected


@pytest.mark.parametrize(
    ["src", "cand", "expected"],
    [
        ["ABC", "ABC", 1.0],
        ["ABC", "AC", 2 / 3],
        ["AB", "CD", 0.0],
        ["", "", 1.0],
    ],
)
def test_entity_edit_similarity(src, cand, expected):
    assert s.entity_edit_similarity(list(src), list(cand)) == pytest.approx(expected)


@lru_cache(maxsize=None)
def levenshtein(a: tuple, b: tuple) -> int:
    if not a or not b:
        return len(a) + len(b)
    return min(
        levenshtein(a[1:], b) + 1,
        levenshtein(a, b[1:]) + 1,
        levenshtein(a[1:], b[1:]) + (a[0] != b[0]),
    )


def test_edit_distance_matches_recursive_definition():
    rng = np.random.default_rng(31)
    for _ in range(1000):
        a = tuple(rng.choice(list("ABCD"), size=rng.integers(0, 7)))
        b = tuple(rng.choice(list("ABCD"), size=rng.integers(0, 7)))
        assert s.edit_distance(a, b) == levenshtein(a, b)
        similarity = s.entity_edit_similarity(a, b)
        assert similarity == s.entity_edit_similarity(b, a)
        assert (similarity == 1.0) == (a == b)

        renamed = {"A": "w", "B": "x", "C": "y", "D": "z"}
        a2, b2 = [renamed[e] for e in a], [renamed[e] for e in b]
        assert s.entity_edit_similarity(a2, b2) == similarity
        if a:
            assert s.compare_length(a2, b2) == s.compare_length(a, b)


@pytest.mark.parametrize(
    ["src", "cand", "expected"],
    [
        ["ABC", "ABC", 0.0],
        ["ABC", "CBA", 1.0],
        ["ABC", "BAC", 1 / 3],
        ["ABC", "AX", 0.0],
    ],
)
def test_entity_order_discordance(src, cand, expected):
    assert s.entity_order_discordance(list(src), list(cand)) == pytest.approx(expected)


def entity_unit(entities):
    return unit("x", entity_sequence=tuple(entities))


def test_entity_flow_scores():
    weights = profile[Level.ENTITY_FLOW]
    same = s.score_entity_flow(entity_unit("ABC"), entity_unit("ABC"), weights)
    assert same.A == 1.0
    assert same.G == 1.0

    empty = s.score_entity_flow(entity_unit("ABC"), entity_unit(""), weights)
    assert empty.P == {"seq_len": 0.0, "seq_edit": 0.0}
    assert empty.G == 0.0

    swapped = s.score_entity_flow(entity_unit("ABC"), entity_unit("CBA"), weights)
    assert swapped.B == 0
    assert swapped.Q == {}
    fluent = s.score_entity_flow(
        entity_unit("ABC"), entity_unit("CBA"), weights, entity_fluency=True
    )
    assert fluent.Q == {"seq": 1.0}
    assert fluent.G < swapped.G


def test_entity_flow_inactive():
    weights = profile[Level.ENTITY_FLOW]
    assert not s.score_entity_flow(None, entity_unit("A"), weights).active
    assert not s.score_entity_flow(entity_unit(""), entity_unit("A"), weights).active
    assert not s.score_entity_flow(entity_unit("A"), unit("x"), weights).active


def test_apply_extensions():
    extension = s.ParameterExtension(
        Level.WORD, ParameterKind.ADEQUACY, "sentiment", lambda c, r, src: 1.4
    )
    other = s.ParameterExtension(
        Level.CHUNK, ParameterKind.DISFLUENCY, "other", lambda c, r, src: 0.3
    )
    params = ({"lex": 0.5}, {"nword": 0.2})
    P, Q = s.apply_extensions(Level.WORD, params, [extension, other], unit("a"), unit("a"), None)
    assert P == {"lex": 0.5, "sentiment": 1.0}
    assert Q == {"nword": 0.2}
    assert params[0] == {"lex": 0.5}


def random_unit(rng: np.random.Generator) -> AnnotatedUnit:
    n = int(rng.integers(1, 12))
    words = [f"w{int(i)}" for i in rng.integers(0, 6, size=n)]
    tokens = tuple(
        Token(w, word_class=WordClass(str(rng.choice(["content", "function"]))), index=i)
        for i, w in enumerate(words)
    )
    cuts = sorted({0, n, *rng.integers(1, n + 1, size=3).tolist()})
    chunks = tuple(
        Chunk((a, b), int(rng.integers(a, b)), id=i)
        for i, (a, b) in enumerate(zip(cuts, cuts[1:]))
    )
    split = int(rng.integers(1, len(chunks) + 1))
    clauses = [Clause(tuple(range(split)), id=0)]
    if split < len(chunks):
        clauses.append(
            Clause(tuple(range(split, len(chunks))), parent=0, relation_label="sub", id=1)
        )
    relations = (DiscourseRelation(0, len(clauses) - 1, "elab"),)
    return AnnotatedUnit(
        " ".join(words),
        tokens,
        chunks=chunks,
        clauses=tuple(clauses),
        discourse=DiscourseAnnotation(words[0], words[-1], relations),
        entity_sequence=tuple(words[::2]),
    )


def all_parameters(cand, ref, lex):
    word_alignment = align_words(cand.tokens, ref.tokens)
    chunk_alignment = align_chunks(cand.chunks, ref.chunks, word_alignment)
    clause_alignment = align_clauses(cand, ref, chunk_alignment)
    return {
        Level.WORD: s.word_parameters(cand, ref, word_alignment, lex),
        Level.CHUNK: s.chunk_parameters(cand, ref, chunk_alignment, lex),
        Level.CLAUSE: s.clause_parameters(cand, ref, chunk_alignment, clause_alignment),
        Level.DISCOURSE: s.discourse_parameters(cand, ref, clause_alignment),
        Level.ENTITY_FLOW: s.entity_flow_parameters(ref, cand, entity_fluency=True),
    }


def test_perfect_translation_has_full_adequacy():
    rng = np.random.default_rng(32)
    lex = lexicon(["w0", "w1"], ave_sentence_len=8, terms=["w2"])
    for _ in range(100):
        u = random_unit(rng)
        for level, (P, Q) in all_parameters(u, u, lex).items():
            assert all(value == 1.0 for value in P.values()), (level, P)


def test_parameters_stay_in_unit_interval():
    rng = np.random.default_rng(33)
    lex = lexicon(["w0", "w1"], ave_sentence_len=3, ave_chunks_per_sentence=1, terms=["w2"])
    for _ in range(300):
        cand, ref = random_unit(rng), random_unit(rng)
        for level, params in all_parameters(cand, ref, lex).items():
            assert params is not None, level
            for value in (*params[0].values(), *params[1].values()):
                assert 0.0 <= value <= 1.0, (level, params)
