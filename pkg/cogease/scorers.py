"""
Per-level adequacy (P) and disfluency (Q) parameters.

Each ``*_parameters`` function returns the computed
``(P, Q)`` maps for one candidate/reference comparison,
or ``None`` when the level is inactive for lack of
annotations. The ``score_*`` functions combine them into
a :class:`~model.LevelScore` under a level's weights.

Parameters that cannot be computed for a unit are left
out of the maps; their weight mass is redistributed by
:func:`~calculus.score_level`.
"""

import itertools
import logging
from collections import Counter
from collections.abc import Callable, Sequence
from dataclasses import dataclass
from fractions import Fraction
from statistics import fmean

from cogease.alignment import (
    AlignmentResources,
    ChunkAlignment,
    ClauseAlignment,
    WordAlignment,
    clause_head,
    default_resources,
    match_any_stage,
)
from cogease.calculus import f_mean, score_level
from cogease.defaults import (
    ScoringSettings,
    compare_length_steps,
    default_scoring_settings,
)
from cogease.ingest import Lexicon
from cogease.model import (
    AnnotatedUnit,
    Level,
    LevelScore,
    LevelWeights,
    ParameterKind,
    WordClass,
)
from cogease.util import clamp_unit, fold_case

logger = logging.getLogger(__name__)

Parameters = tuple[dict[str, float], dict[str, float]]


def _ratio(numerator: float, denominator: float) -> float:
    return numerator / denominator if denominator else 0.0


def _f_mean_counts(matched: int, n_candidate: int, n_reference: int) -> float:
    return f_mean(_ratio(matched, n_candidate), _ratio(matched, n_reference))


@dataclass(frozen=True)
class ParameterExtension:
    """
    A parameter added to a level beyond the built-in ones,
    e.g. a sentiment adequacy term at the word level.

    ``compute`` receives the candidate, the reference and
    the source (possibly ``None``) and returns a value,
    clamped to [0, 1]. The name must be registered with
    :meth:`~model.ParameterRegistry.extend` for profiles
    weighting it to validate.
    """

    level: Level
    kind: ParameterKind
    name: str
    compute: Callable[[AnnotatedUnit, AnnotatedUnit, AnnotatedUnit | None], float]


def word_parameters(
    candidate: AnnotatedUnit,
    reference: AnnotatedUnit,
    word_alignment: WordAlignment,
    lexicon: Lexicon | None = None,
) -> Parameters:
    """
    Word-level parameters.

    ``lex``: F-mean of matched-token precision and recall.
    ``pos``: the same restricted to function-class tokens,
    computed only when both sides carry word classes and
    at least one side has function tokens.
    ``nword``, ``uncom``, ``term``: candidate length,
    uncommon-token count and term-token count, each divided
    by the language's average sentence length and clamped.
    The Q parameters need a lexicon.

    Parameters
    ----------
    candidate
        Candidate unit.

    reference
        Reference unit.

    word_alignment
        Alignment of candidate to reference tokens.

    lexicon
        Frequencies, terms and averages. If ``None``, no
        Q parameter is computed.

    Returns
    -------
    tuple[dict[str, float], dict[str, float]]
        ``(P, Q)``.
    """
    n_cand, n_ref = len(candidate.tokens), len(reference.tokens)
    if n_cand == 0:
        Q = {} if lexicon is None else {"nword": 0.0, "uncom": 0.0, "term": 0.0}
        return {"lex": 0.0}, Q

    P = {"lex": _f_mean_counts(len(word_alignment), n_cand, n_ref)}

    def has_classes(unit):
        return any(t.word_class is not WordClass.UNKNOWN for t in unit.tokens)

    if has_classes(candidate) and has_classes(reference):
        cand_function = {t.index for t in candidate.tokens if t.word_class is WordClass.FUNCTION}
        ref_function = {t.index for t in reference.tokens if t.word_class is WordClass.FUNCTION}
        if cand_function or ref_function:
            matched = sum(
                1
                for c, r in word_alignment.links
                if c in cand_function and r in ref_function
            )
            P["pos"] = _f_mean_counts(matched, len(cand_function), len(ref_function))

    Q = {}
    if lexicon is not None:
        surfaces = [t.surface for t in candidate.tokens]
        ave = lexicon.ave_sentence_len
        Q["nword"] = clamp_unit(n_cand / ave)
        Q["uncom"] = clamp_unit(sum(not lexicon.is_common(s) for s in surfaces) / ave)
        Q["term"] = clamp_unit(lexicon.term_token_count(surfaces) / ave)
    return P, Q


def _marker_multiset(unit: AnnotatedUnit, markers: frozenset[int]) -> Counter:
    return Counter(fold_case(unit.tokens[i].surface) for i in markers)


def chunk_parameters(
    candidate: AnnotatedUnit,
    reference: AnnotatedUnit,
    chunk_alignment: ChunkAlignment | None,
    lexicon: Lexicon | None = None,
    resources: AlignmentResources = default_resources,
    settings: ScoringSettings = default_scoring_settings,
) -> Parameters | None:
    """
    Chunk-level parameters.

    ``head``: F-mean over aligned chunk pairs whose heads
    match at any alignment stage.
    ``vibh``: F-mean over aligned chunk pairs whose function
    markers are equal as case-folded multisets.
    ``words_per_chunk``: mean chunk length over
    ``settings.max_chunk_len``.
    ``nchunk``: candidate chunk count over the language's
    average chunks per sentence.
    ``uncom_ne``: share of candidate chunks that are named
    entities with an uncommon head.
    ``nchunk`` and ``uncom_ne`` need a lexicon.

    Parameters
    ----------
    candidate
        Candidate unit.

    reference
        Reference unit.

    chunk_alignment
        Chunk alignment, or ``None`` if unavailable.

    lexicon
        Lexicon, or ``None``.

    resources
        Matching resources for head comparison.

    settings
        Normalization constants.

    Returns
    -------
    tuple[dict[str, float], dict[str, float]] | None
        ``(P, Q)``, or ``None`` if either chunk layer is
        absent or empty.
    """
    if not candidate.chunks or not reference.chunks or chunk_alignment is None:
        return None
    cand_chunks, ref_chunks = candidate.chunk_by_id(), reference.chunk_by_id()
    n_cand, n_ref = len(cand_chunks), len(ref_chunks)

    heads = vibh = 0
    for c, r in chunk_alignment.pairs:
        cc, rc = cand_chunks[c], ref_chunks[r]
        if match_any_stage(
            candidate.tokens[cc.head], reference.tokens[rc.head], resources
        ):
            heads += 1
        if _marker_multiset(candidate, cc.function_markers) == _marker_multiset(
            reference, rc.function_markers
        ):
            vibh += 1
    P = {
        "head": _f_mean_counts(heads, n_cand, n_ref),
        "vibh": _f_mean_counts(vibh, n_cand, n_ref),
    }

    Q = {
        "words_per_chunk": clamp_unit(
            fmean(len(c) for c in candidate.chunks) / settings.max_chunk_len
        )
    }
    if lexicon is not None:
        Q["nchunk"] = clamp_unit(n_cand / lexicon.ave_chunks_per_sentence)
        uncommon_ne = sum(
            1
            for c in candidate.chunks
            if c.is_named_entity and not lexicon.is_common(candidate.tokens[c.head].surface)
        )
        Q["uncom_ne"] = clamp_unit(uncommon_ne / n_cand)
    return P, Q


def _clause_triples(unit: AnnotatedUnit) -> list[tuple[int, int, str | None]]:
    return [
        (c.parent, c.id, None if c.relation_label is None else fold_case(c.relation_label))
        for c in unit.clauses
        if c.parent is not None
    ]


def clause_parameters(
    candidate: AnnotatedUnit,
    reference: AnnotatedUnit,
    chunk_alignment: ChunkAlignment | None,
    clause_alignment: ClauseAlignment | None,
    settings: ScoringSettings = default_scoring_settings,
) -> Parameters | None:
    """
    Clause-level parameters.

    ``intra``: F-mean over clause memberships of chunks; an
    aligned chunk pair counts when the clauses containing
    its two chunks are aligned to each other.
    ``inter``: F-mean over ``(parent, child, relation)``
    links carried through the clause alignment; left out
    when neither side has a clause link.
    ``chunks_per_clause``: mean chunks per clause over
    ``settings.max_chunks_per_clause``.
    ``fragmentation``: mean over clauses of
    ``1 - tokens / token span``.
    ``long_dist``: mean over linked clauses of the token
    distance between the clause heads (the head of each
    clause's first chunk) over the unit length; left out
    when the candidate has no clause links.

    Parameters
    ----------
    candidate
        Candidate unit.

    reference
        Reference unit.

    chunk_alignment
        Chunk alignment, or ``None``.

    clause_alignment
        Clause alignment, or ``None``.

    settings
        Normalization constants.

    Returns
    -------
    tuple[dict[str, float], dict[str, float]] | None
        ``(P, Q)``, or ``None`` if either clause layer is
        absent or empty.
    """
    if not candidate.clauses or not reference.clauses:
        return None
    if chunk_alignment is None or clause_alignment is None:
        return None

    cand_clause_of = candidate.clause_of_chunk()
    ref_clause_of = reference.clause_of_chunk()
    clause_map = clause_alignment.mapping()
    preserved = sum(
        1
        for c, r in chunk_alignment.pairs
        if c in cand_clause_of
        and r in ref_clause_of
        and clause_map.get(cand_clause_of[c]) == ref_clause_of[r]
    )
    P = {"intra": _f_mean_counts(preserved, len(cand_clause_of), len(ref_clause_of))}

    cand_links, ref_links = _clause_triples(candidate), _clause_triples(reference)
    if cand_links or ref_links:
        mapped = Counter(
            (clause_map.get(parent), clause_map.get(child), label)
            for parent, child, label in cand_links
        )
        matched = sum((mapped & Counter(ref_links)).values())
        P["inter"] = _f_mean_counts(matched, len(cand_links), len(ref_links))

    chunks = candidate.chunk_by_id()
    fragmentation = []
    for clause in candidate.clauses:
        members = [chunks[cid] for cid in clause.chunk_ids if cid in chunks]
        if not members:
            continue
        span = max(c.end for c in members) - min(c.start for c in members)
        fragmentation.append(1 - sum(len(c) for c in members) / span)
    Q = {
        "chunks_per_clause": clamp_unit(
            fmean(len(c.chunk_ids) for c in candidate.clauses) / settings.max_chunks_per_clause
        ),
        "fragmentation": clamp_unit(fmean(fragmentation)) if fragmentation else 0.0,
    }

    clauses = {c.id: c for c in candidate.clauses}
    distances = []
    for clause in candidate.clauses:
        if clause.parent is None or clause.parent not in clauses:
            continue
        child_head = clause_head(clause, chunks)
        parent_head = clause_head(clauses[clause.parent], chunks)
        if child_head is not None and parent_head is not None:
            distances.append(abs(child_head - parent_head) / len(candidate.tokens))
    if distances:
        Q["long_dist"] = clamp_unit(fmean(distances))
    return P, Q


def _same_slot(a: str | None, b: str | None) -> bool:
    if a is None or b is None:
        return a is None and b is None
    return fold_case(a) == fold_case(b)


def discourse_parameters(
    candidate: AnnotatedUnit,
    reference: AnnotatedUnit,
    clause_alignment: ClauseAlignment | None = None,
) -> Parameters | None:
    """
    Discourse-level parameters.

    ``topic_focus``: 1 if topic and focus both match the
    reference (case-folded; two absent slots match), 0.5
    if one does, else 0.
    ``relations``: F-mean over ``(from, to, label)``
    relations, candidate clause ids mapped through the clause
    alignment when there is one; left out when neither side
    has relations.
    ``linked_dist``: mean clause-id distance of the
    candidate's relations over its clause count; 0 without
    relations, left out without a clause layer.

    Parameters
    ----------
    candidate
        Candidate unit.

    reference
        Reference unit.

    clause_alignment
        Clause alignment, or ``None`` to compare clause
        ids directly.

    Returns
    -------
    tuple[dict[str, float], dict[str, float]] | None
        ``(P, Q)``, or ``None`` if either discourse layer
        is absent.
    """
    cand, ref = candidate.discourse, reference.discourse
    if cand is None or ref is None:
        return None

    P = {
        "topic_focus": (_same_slot(cand.topic, ref.topic) + _same_slot(cand.focus, ref.focus))
        / 2
    }
    if cand.relations or ref.relations:
        if clause_alignment is None:

            def to_ref(clause_id):
                return clause_id
        else:
            clause_map = clause_alignment.mapping()
            to_ref = clause_map.get
        mapped = Counter(
            (to_ref(r.from_clause), to_ref(r.to_clause), fold_case(r.label))
            for r in cand.relations
        )
        reference_relations = Counter(
            (r.from_clause, r.to_clause, fold_case(r.label)) for r in ref.relations
        )
        matched = sum((mapped & reference_relations).values())
        P["relations"] = _f_mean_counts(matched, len(cand.relations), len(ref.relations))

    Q = {}
    if not cand.relations:
        Q["linked_dist"] = 0.0
    elif candidate.clauses:
        Q["linked_dist"] = clamp_unit(
            fmean(abs(r.from_clause - r.to_clause) for r in cand.relations)
            / len(candidate.clauses)
        )
    return P, Q


def compare_length(src_seq: Sequence[str], cand_seq: Sequence[str]) -> float:
    """
    Step-wise score of the relative difference in length
    between the source and candidate entity sequences.

    With ``d = |len(src) - len(cand)| / len(src)``, computed
    exactly: ``d = 0`` gives 1.0, ``d <= 1/5`` gives 0.9,
    ``d <= 3/10`` gives 0.75, anything larger 0.

    Parameters
    ----------
    src_seq
        Source entity sequence, non-empty.

    cand_seq
        Candidate entity sequence.

    Returns
    -------
    float
        The step score.

    Raises
    ------
    ValueError
        If the source sequence is empty.
    """
    if not src_seq:
        raise ValueError("compare_length needs a non-empty source entity sequence.")
    d = Fraction(abs(len(src_seq) - len(cand_seq)), len(src_seq))
    for bound, score in compare_length_steps:
        if d <= Fraction(bound):
            return score
    return 0.0


def edit_distance(a: Sequence[str], b: Sequence[str]) -> int:
    """
    Unit-cost insert/delete/substitute distance between
    two sequences, compared by exact equality.

    Parameters
    ----------
    a
        First sequence.

    b
        Second sequence.

    Returns
    -------
    int
        The Levenshtein distance.
    """
    previous = list(range(len(a) + 1))
    for j, y in enumerate(b, start=1):
        current = [j] + [0] * len(a)
        for i, x in enumerate(a, start=1):
            current[i] = min(
                previous[i] + 1,  # insertion
                current[i - 1] + 1,  # deletion
                previous[i - 1] + (x != y),  # substitution
            )
        previous = current
    return previous[-1]


def entity_edit_similarity(src_seq: Sequence[str], cand_seq: Sequence[str]) -> float:
    """
    ``1 - edit_distance / max(len(src), len(cand))``.

    Parameters
    ----------
    src_seq
        Source entity sequence.

    cand_seq
        Candidate entity sequence.

    Returns
    -------
    float
        Similarity in [0, 1]; 1 exactly when the sequences
        are equal (including both empty).
    """
    longest = max(len(src_seq), len(cand_seq))
    if longest == 0:
        return 1.0
    return 1 - edit_distance(src_seq, cand_seq) / longest


def entity_order_discordance(src_seq: Sequence[str], cand_seq: Sequence[str]) -> float:
    """
    Share of pairs of entities occurring in both sequences
    whose first occurrences are ordered differently.

    Parameters
    ----------
    src_seq
        Source entity sequence.

    cand_seq
        Candidate entity sequence.

    Returns
    -------
    float
        Discordant share in [0, 1]; 0 with fewer than two
        shared entities.
    """
    src_first, cand_first = {}, {}
    for i, e in enumerate(src_seq):
        src_first.setdefault(e, i)
    for i, e in enumerate(cand_seq):
        cand_first.setdefault(e, i)
    shared = [e for e in src_first if e in cand_first]
    pairs = list(itertools.combinations(shared, 2))
    if not pairs:
        return 0.0
    discordant = sum(
        (src_first[x] - src_first[y]) * (cand_first[x] - cand_first[y]) < 0
        for x, y in pairs
    )
    return discordant / len(pairs)


def entity_flow_parameters(
    source: AnnotatedUnit | None,
    candidate: AnnotatedUnit,
    entity_fluency: bool = False,
) -> Parameters | None:
    """
    Entity-flow parameters, comparing the candidate with the
    source rather than with a reference.

    ``seq_len``: :func:`compare_length`.
    ``seq_edit``: :func:`entity_edit_similarity`.
    ``seq``: :func:`entity_order_discordance`, only when
    ``entity_fluency`` is on.

    Parameters
    ----------
    source
        Source unit, or ``None``.

    candidate
        Candidate unit.

    entity_fluency
        Compute the disfluency parameter. Default ``False``.

    Returns
    -------
    tuple[dict[str, float], dict[str, float]] | None
        ``(P, Q)``, or ``None`` when the source has no (or an
        empty) entity sequence, or the candidate has none.
    """
    if source is None or not source.entity_sequence or candidate.entity_sequence is None:
        return None
    src, cand = source.entity_sequence, candidate.entity_sequence
    P = {"seq_len": compare_length(src, cand), "seq_edit": entity_edit_similarity(src, cand)}
    Q = {"seq": entity_order_discordance(src, cand)} if entity_fluency else {}
    return P, Q


def apply_extensions(
    level: Level,
    params: Parameters,
    extensions: Sequence[ParameterExtension],
    candidate: AnnotatedUnit,
    reference: AnnotatedUnit,
    source: AnnotatedUnit | None,
) -> Parameters:
    """
    Add extension parameter values to a level's computed
    parameters.

    Parameters
    ----------
    level
        The level being scored.

    params
        Built-in ``(P, Q)``.

    extensions
        Extensions; those of other levels are ignored.

    candidate
        Candidate unit.

    reference
        Reference unit.

    source
        Source unit, or ``None``.

    Returns
    -------
    tuple[dict[str, float], dict[str, float]]
        New ``(P, Q)`` maps including the extension values.
    """
    P, Q = dict(params[0]), dict(params[1])
    for ext in extensions:
        if ext.level is not level:
            continue
        target = P if ext.kind is ParameterKind.ADEQUACY else Q
        target[ext.name] = clamp_unit(ext.compute(candidate, reference, source))
    return P, Q


def _score(level: Level, params: Parameters | None, weights: LevelWeights, **kwargs):
    if params is None:
        logger.debug("Level %s inactive: annotations missing.", level)
        return LevelScore.inactive(level)
    return score_level(level, params[0], params[1], weights, **kwargs)


def score_word_level(
    candidate: AnnotatedUnit,
    reference: AnnotatedUnit,
    word_alignment: WordAlignment,
    lexicon: Lexicon | None,
    weights: LevelWeights,
) -> LevelScore:
    """
    Score the word level. See :func:`word_parameters`.

    Parameters
    ----------
    candidate
        Candidate unit.

    reference
        Reference unit.

    word_alignment
        Token alignment.

    lexicon
        Lexicon, or ``None``.

    weights
        Word-level weights.

    Returns
    -------
    LevelScore
        Always active.
    """
    return _score(
        Level.WORD, word_parameters(candidate, reference, word_alignment, lexicon), weights
    )


def score_chunk_level(
    candidate: AnnotatedUnit,
    reference: AnnotatedUnit,
    chunk_alignment: ChunkAlignment | None,
    lexicon: Lexicon | None,
    weights: LevelWeights,
    resources: AlignmentResources = default_resources,
    settings: ScoringSettings = default_scoring_settings,
) -> LevelScore:
    """
    Score the chunk level. See :func:`chunk_parameters`.

    Parameters
    ----------
    candidate
        Candidate unit.

    reference
        Reference unit.

    chunk_alignment
        Chunk alignment, or ``None``.

    lexicon
        Lexicon, or ``None``.

    weights
        Chunk-level weights.

    resources
        Matching resources for head comparison.

    settings
        Normalization constants.

    Returns
    -------
    LevelScore
        Inactive when either chunk layer is missing.
    """
    params = chunk_parameters(candidate, reference, chunk_alignment, lexicon, resources, settings)
    return _score(Level.CHUNK, params, weights)


def score_clause_level(
    candidate: AnnotatedUnit,
    reference: AnnotatedUnit,
    chunk_alignment: ChunkAlignment | None,
    clause_alignment: ClauseAlignment | None,
    weights: LevelWeights,
    settings: ScoringSettings = default_scoring_settings,
) -> LevelScore:
    params = clause_parameters(candidate, reference, chunk_alignment, clause_alignment, settings)
    return _score(Level.CLAUSE, params, weights)


def score_discourse_level(
    candidate: AnnotatedUnit,
    reference: AnnotatedUnit,
    weights: LevelWeights,
    clause_alignment: ClauseAlignment | None = None,
) -> LevelScore:
    params = discourse_parameters(candidate, reference, clause_alignment)
    return _score(Level.DISCOURSE, params, weights)


def score_entity_flow(
    source: AnnotatedUnit | None,
    candidate: AnnotatedUnit,
    weights: LevelWeights,
    entity_fluency: bool = False,
) -> LevelScore:
    """
    Score the entity-flow level. B is 0 unless
    ``entity_fluency`` is on.

    Parameters
    ----------
    source
        Source unit, or ``None``.

    candidate
        Candidate unit.

    weights
        Entity-flow weights.

    entity_fluency
        Include the ordering disfluency parameter.
        Default ``False``.

    Returns
    -------
    LevelScore
        Inactive when entity sequences are missing.
    """
    params = entity_flow_parameters(source, candidate, entity_fluency)
    return _score(Level.ENTITY_FLOW, params, weights, disfluency_enabled=entity_fluency)
