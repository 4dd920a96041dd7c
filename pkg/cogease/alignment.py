"""
Word, chunk, and clause alignment between a candidate
translation and a reference.

Word alignment proceeds in stages (exact, stem, synonym).
Each stage adds a maximum-cardinality injective matching
over the tokens still unmatched, choosing among maximum
matchings one with the fewest crossing links.
"""

import logging
from collections import Counter
from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import maximum_bipartite_matching

from cogease.model import AnnotatedUnit, Chunk, Clause, MatchStage, Token
from cogease.util import fold_case

logger = logging.getLogger(__name__)

# largest number of candidate links in one stage for which all
# maximum matchings are enumerated; beyond it crossings are
# reduced greedily
exhaustive_link_limit = 12


@dataclass(frozen=True)
class SuffixStemmer:
    """
    Rule-based stemmer: the first rule whose suffix matches,
    and whose removal leaves at least ``min_stem_length``
    characters, rewrites the suffix once. With no rules the
    stemmer is the identity.
    """

    rules: tuple[tuple[str, str], ...] = ()
    min_stem_length: int = 1

    def stem(self, word: str) -> str:
        for suffix, replacement in self.rules:
            if suffix and word.endswith(suffix):
                if len(word) - len(suffix) >= self.min_stem_length:
                    return word[: -len(suffix)] + replacement
        return word


@dataclass(frozen=True)
class SynonymTable:
    """
    Synonym sets, indexed from (case-folded) word to the
    ids of the sets containing it.
    """

    synsets: dict[str, frozenset[int]] = field(default_factory=dict)

    @classmethod
    def from_sets(cls, sets: Iterable[Iterable[str]]) -> "SynonymTable":
        index: dict[str, set[int]] = {}
        for set_id, members in enumerate(sets):
            for word in members:
                index.setdefault(fold_case(word), set()).add(set_id)
        return cls({word: frozenset(ids) for word, ids in index.items()})

    def sets_of(self, word: str) -> frozenset[int]:
        return self.synsets.get(fold_case(word), frozenset())

    def are_synonyms(self, a: str, b: str) -> bool:
        return bool(self.sets_of(a) & self.sets_of(b))

    def __len__(self) -> int:
        return len(self.synsets)


@dataclass(frozen=True)
class AlignmentResources:
    """
    Matching resources shared read-only across units.

    The synonym stage runs only when a synonym table is given.
    """

    stemmer: SuffixStemmer = SuffixStemmer()
    synonyms: SynonymTable | None = None

    @property
    def stages(self) -> tuple[MatchStage, ...]:
        if self.synonyms is None:
            return (MatchStage.EXACT, MatchStage.STEM)
        return (MatchStage.EXACT, MatchStage.STEM, MatchStage.SYNONYM)


default_resources = AlignmentResources()


@dataclass(frozen=True)
class AlignedPair:
    candidate: int
    reference: int
    stage: MatchStage


@dataclass(frozen=True)
class WordAlignment:
    """
    Injective token correspondence between candidate and reference.
    """

    pairs: tuple[AlignedPair, ...]
    candidate_length: int
    reference_length: int

    def __len__(self) -> int:
        return len(self.pairs)

    @property
    def links(self) -> list[tuple[int, int]]:
        return [(p.candidate, p.reference) for p in self.pairs]

    @property
    def crossings(self) -> int:
        return count_crossings(self.links)

    def stage_counts(self) -> Counter:
        return Counter(p.stage for p in self.pairs)


@dataclass(frozen=True)
class ChunkAlignment:
    """
    Injective correspondence between candidate and reference
    chunk ids.
    """

    pairs: tuple[tuple[int, int], ...]

    def __len__(self) -> int:
        return len(self.pairs)

    def mapping(self) -> dict[int, int]:
        """
        Candidate id to reference id.

        Returns
        -------
        dict[int, int]
            The aligned pairs as a mapping.
        """
        return dict(self.pairs)


@dataclass(frozen=True)
class ClauseAlignment(ChunkAlignment):
    """
    Injective correspondence between candidate and reference
    clause ids.
    """


def stem_key(token: Token, stemmer: SuffixStemmer) -> str:
    """
    The form compared at the stem stage: the folded lemma
    if the token has one, else the stemmed folded surface.

    Parameters
    ----------
    token
        The token.

    stemmer
        Stemmer applied to surfaces without lemmas.

    Returns
    -------
    str
        The comparison key.
    """
    if token.lemma:
        return fold_case(token.lemma)
    return stemmer.stem(fold_case(token.surface))


def _synonym_sets(token: Token, synonyms: SynonymTable) -> frozenset[int]:
    sets = synonyms.sets_of(token.surface)
    if token.lemma:
        sets = sets | synonyms.sets_of(token.lemma)
    return sets


def match_tokens(
    a: Token,
    b: Token,
    stage: MatchStage,
    resources: AlignmentResources = default_resources,
) -> bool:
    """
    Decide whether two tokens match at a given stage.

    Parameters
    ----------
    a
        First token.

    b
        Second token.

    stage
        ``exact``: case-folded surfaces are equal.
        ``stem``: lemmas (or stemmed surfaces) are equal.
        ``synonym``: the tokens share a synonym set.

    resources
        Stemming rules and synonym table. Default: identity
        stemmer, no synonyms.

    Returns
    -------
    bool
        ``True`` if the tokens match.
    """
    if stage is MatchStage.EXACT:
        return fold_case(a.surface) == fold_case(b.surface)
    if stage is MatchStage.STEM:
        return stem_key(a, resources.stemmer) == stem_key(b, resources.stemmer)
    if resources.synonyms is None:
        return False
    return bool(_synonym_sets(a, resources.synonyms) & _synonym_sets(b, resources.synonyms))


def match_any_stage(
    a: Token, b: Token, resources: AlignmentResources = default_resources
) -> bool:
    """
    Whether two tokens match at any stage the resources enable.

    Parameters
    ----------
    a
        First token.

    b
        Second token.

    resources
        Matching resources.

    Returns
    -------
    bool
        ``True`` on the first matching stage.
    """
    return any(match_tokens(a, b, stage, resources) for stage in resources.stages)


def count_crossings(links: Sequence[tuple[int, int]]) -> int:
    """
    Number of pairs of links that cross.

    Two links ``(a, b)`` and ``(c, d)`` cross when
    ``(a - c) * (b - d) < 0``.

    Parameters
    ----------
    links
        ``(candidate index, reference index)`` pairs.

    Returns
    -------
    int
        The crossing count.
    """
    ordered = sorted(links)
    return sum(
        1
        for i, (_, b) in enumerate(ordered)
        for _, d in ordered[i + 1 :]
        if d < b
    )


def maximum_matching(adjacency: dict[int, list[int]]) -> dict[int, int]:
    """
    Maximum-cardinality bipartite matching (Hopcroft-Karp).

    Parameters
    ----------
    adjacency
        Left vertex to the right vertices it may match.

    Returns
    -------
    dict[int, int]
        Left vertex to matched right vertex. Deterministic
        for a given ``adjacency``.
    """
    if not adjacency:
        return {}
    lefts = sorted(adjacency)
    rights = sorted({right for neighbours in adjacency.values() for right in neighbours})
    column = {right: j for j, right in enumerate(rights)}
    rows, cols = [], []
    for i, left in enumerate(lefts):
        for right in adjacency[left]:
            rows.append(i)
            cols.append(column[right])
    graph = csr_matrix(
        (np.ones(len(rows), dtype=np.int8), (rows, cols)),
        shape=(len(lefts), len(rights)),
    )
    matched = maximum_bipartite_matching(graph, perm_type="column")
    return {lefts[i]: rights[j] for i, j in enumerate(matched.tolist()) if j >= 0}


def _fewest_crossings_exhaustive(
    adjacency: dict[int, list[int]],
    size: int,
    fixed: list[tuple[int, int]],
) -> list[tuple[int, int]]:
    lefts = sorted(adjacency)
    best: list[tuple[int, int]] = []
    best_crossings = None
    chosen: list[tuple[int, int]] = []
    used: set[int] = set()

    def search(i: int) -> None:
        nonlocal best, best_crossings
        if len(chosen) + len(lefts) - i < size:
            return
        if i == len(lefts):
            crossings = count_crossings(fixed + chosen)
            if best_crossings is None or crossings < best_crossings:
                best, best_crossings = list(chosen), crossings
            return
        left = lefts[i]
        for right in adjacency[left]:
            if right not in used:
                used.add(right)
                chosen.append((left, right))
                search(i + 1)
                chosen.pop()
                used.remove(right)
        search(i + 1)

    search(0)
    return best


def _fewest_crossings_greedy(
    adjacency: dict[int, list[int]],
    matching: dict[int, int],
    fixed: list[tuple[int, int]],
) -> list[tuple[int, int]]:
    # lefts with identical neighbour lists can take their
    # partners in any order: pair both sides in sorted order
    blocks: dict[tuple[int, ...], list[int]] = {}
    for left in sorted(matching):
        blocks.setdefault(tuple(adjacency[left]), []).append(left)
    links = sorted(
        pair
        for lefts in blocks.values()
        for pair in zip(lefts, sorted(matching[left] for left in lefts))
    )

    # swapping the partners of two crossing links removes at
    # least one crossing, so this terminates
    edges = {(left, right) for left, rights in adjacency.items() for right in rights}
    swapped = True
    while swapped:
        swapped = False
        for i in range(len(links)):
            for j in range(i + 1, len(links)):
                (l1, r1), (l2, r2) = links[i], links[j]
                if r1 > r2 and (l1, r2) in edges and (l2, r1) in edges:
                    links[i], links[j] = (l1, r2), (l2, r1)
                    swapped = True
    if logger.isEnabledFor(logging.DEBUG):
        logger.debug(
            "Greedy crossing reduction: %d crossings remain.",
            count_crossings(fixed + links),
        )
    return links


def _stage_keys(
    tokens: Sequence[Token], stage: MatchStage, resources: AlignmentResources
) -> list:
    if stage is MatchStage.EXACT:
        return [fold_case(t.surface) for t in tokens]
    if stage is MatchStage.STEM:
        return [stem_key(t, resources.stemmer) for t in tokens]
    return [_synonym_sets(t, resources.synonyms) for t in tokens]


def align_words(
    candidate: Sequence[Token],
    reference: Sequence[Token],
    resources: AlignmentResources = default_resources,
) -> WordAlignment:
    """
    Align candidate tokens with reference tokens.

    Stages are applied in the order exact, stem, synonym.
    Within each stage the still-unmatched tokens receive a
    maximum-cardinality injective matching; among maximum
    matchings the one with the fewest crossings (counted
    over all links so far) is kept, the leftmost-first one
    on ties. Stages with more than :obj:`exhaustive_link_limit`
    candidate links reduce crossings greedily instead.

    Parameters
    ----------
    candidate
        Candidate tokens.

    reference
        Reference tokens.

    resources
        Matching resources. The synonym stage is skipped when
        there is no synonym table.

    Returns
    -------
    WordAlignment
        The alignment; empty if either side is empty.
    """
    pairs: list[AlignedPair] = []
    if not candidate or not reference:
        return WordAlignment((), len(candidate), len(reference))

    free_candidate = set(range(len(candidate)))
    free_reference = set(range(len(reference)))

    for stage in resources.stages:
        cand_keys = _stage_keys(candidate, stage, resources)
        ref_keys = _stage_keys(reference, stage, resources)
        if stage is MatchStage.SYNONYM:

            def linked(c, r):
                return bool(cand_keys[c] & ref_keys[r])
        else:

            def linked(c, r):
                return cand_keys[c] == ref_keys[r]

        adjacency = {}
        for c in sorted(free_candidate):
            rights = [r for r in sorted(free_reference) if linked(c, r)]
            if rights:
                adjacency[c] = rights
        if not adjacency:
            continue

        matching = maximum_matching(adjacency)
        fixed = [(p.candidate, p.reference) for p in pairs]
        n_links = sum(len(rights) for rights in adjacency.values())
        if n_links <= exhaustive_link_limit:
            links = _fewest_crossings_exhaustive(adjacency, len(matching), fixed)
        else:
            links = _fewest_crossings_greedy(adjacency, matching, fixed)

        for c, r in links:
            pairs.append(AlignedPair(c, r, stage))
            free_candidate.discard(c)
            free_reference.discard(r)

    pairs.sort(key=lambda p: (p.candidate, p.reference))
    return WordAlignment(tuple(pairs), len(candidate), len(reference))


def _greedy_overlap_pairs(counts: Counter) -> tuple[tuple[int, int], ...]:
    pairs = []
    used_left, used_right = set(), set()
    for (left, right), n in sorted(counts.items(), key=lambda kv: (-kv[1], kv[0])):
        if n < 1 or left in used_left or right in used_right:
            continue
        pairs.append((left, right))
        used_left.add(left)
        used_right.add(right)
    return tuple(sorted(pairs))


def _chunk_of_token(chunks: Sequence[Chunk]) -> dict[int, int]:
    return {i: chunk.id for chunk in chunks for i in range(chunk.start, chunk.end)}


def align_chunks(
    candidate_chunks: Sequence[Chunk] | None,
    reference_chunks: Sequence[Chunk] | None,
    word_alignment: WordAlignment,
) -> ChunkAlignment | None:
    """
    Pair candidate chunks with reference chunks by shared
    word-alignment links.

    Greedy maximum overlap: the pair sharing the most links
    is taken first, ties going to the smaller candidate id
    and then the smaller reference id. A pair needs at least
    one shared link.

    Parameters
    ----------
    candidate_chunks
        Candidate chunk layer, or ``None`` if absent.

    reference_chunks
        Reference chunk layer, or ``None`` if absent.

    word_alignment
        Word alignment of the two units.

    Returns
    -------
    ChunkAlignment | None
        The alignment, or ``None`` when either chunk layer is
        absent or empty (the chunk level is then inactive).
    """
    if not candidate_chunks or not reference_chunks:
        return None
    cand_owner = _chunk_of_token(candidate_chunks)
    ref_owner = _chunk_of_token(reference_chunks)
    counts = Counter(
        (cand_owner[c], ref_owner[r])
        for c, r in word_alignment.links
        if c in cand_owner and r in ref_owner
    )
    return ChunkAlignment(_greedy_overlap_pairs(counts))


def align_clauses(
    candidate: AnnotatedUnit,
    reference: AnnotatedUnit,
    chunk_alignment: ChunkAlignment | None,
) -> ClauseAlignment | None:
    """
    Pair candidate clauses with reference clauses by the number
    of aligned chunk pairs they share, greedily (as in
    :func:`align_chunks`).

    Parameters
    ----------
    candidate
        Candidate unit.

    reference
        Reference unit.

    chunk_alignment
        Chunk alignment of the two units, or ``None``.

    Returns
    -------
    ClauseAlignment | None
        The alignment, or ``None`` when either clause layer is
        absent or empty, or no chunk alignment is available.
    """
    if not candidate.clauses or not reference.clauses or chunk_alignment is None:
        return None
    cand_clause = candidate.clause_of_chunk()
    ref_clause = reference.clause_of_chunk()
    counts = Counter(
        (cand_clause[c], ref_clause[r])
        for c, r in chunk_alignment.pairs
        if c in cand_clause and r in ref_clause
    )
    return ClauseAlignment(_greedy_overlap_pairs(counts))


def clause_head(clause: Clause, chunks: dict[int, Chunk]) -> int | None:
    """
    Token index standing for a clause: the head of its
    first chunk.

    Parameters
    ----------
    clause
        The clause.

    chunks
        Chunks keyed by id.

    Returns
    -------
    int | None
        The head token index, or ``None`` if the first chunk
        is unknown.
    """
    first = chunks.get(clause.chunk_ids[0]) if clause.chunk_ids else None
    return None if first is None else first.head
