"""
Evaluation of unit pairs and corpora under a weight profile.
"""

import json
import logging
import math
from collections.abc import Sequence
from concurrent.futures import ProcessPoolExecutor
from functools import partial

from cogease.alignment import (
    AlignmentResources,
    align_chunks,
    align_clauses,
    align_words,
    default_resources,
)
from cogease.calculus import active_level_weights, aggregate, check_level_score, score_level
from cogease.defaults import ScoringSettings, default_scoring_settings
from cogease.errors import EvaluationError
from cogease.ingest import Lexicon
from cogease.model import (
    AnnotatedUnit,
    EvaluationReport,
    Level,
    LevelScore,
    UnitPair,
    UnitReport,
    WeightProfile,
)
from cogease.scorers import (
    ParameterExtension,
    Parameters,
    apply_extensions,
    chunk_parameters,
    clause_parameters,
    discourse_parameters,
    entity_flow_parameters,
    word_parameters,
)

logger = logging.getLogger(__name__)


def level_parameters(
    pair: UnitPair,
    reference: AnnotatedUnit,
    profile: WeightProfile,
    lexicon: Lexicon | None = None,
    resources: AlignmentResources = default_resources,
    settings: ScoringSettings = default_scoring_settings,
    extensions: Sequence[ParameterExtension] = (),
) -> dict[Level, Parameters | None]:
    """
    Compute the ``(P, Q)`` parameters of every level the
    profile weights, for the candidate against one reference.

    Parameters
    ----------
    pair
        The unit pair (supplies candidate and source).

    reference
        The reference to compare against.

    profile
        Profile naming the levels to compute. Its
        ``entity_fluency`` switch decides whether the
        entity-flow disfluency parameter is computed.

    lexicon
        Lexicon, or ``None`` to skip lexicon-based parameters.

    resources
        Word matching resources.

    settings
        Normalization constants.

    extensions
        Additional parameters to compute.

    Returns
    -------
    dict[Level, tuple[dict[str, float], dict[str, float]] | None]
        Parameters keyed by level, ``None`` for inactive levels.
    """
    candidate = pair.candidate
    words = align_words(candidate.tokens, reference.tokens, resources)
    chunks = align_chunks(candidate.chunks, reference.chunks, words)
    clauses = align_clauses(candidate, reference, chunks)

    computed = {
        Level.WORD: lambda: word_parameters(candidate, reference, words, lexicon),
        Level.CHUNK: lambda: chunk_parameters(
            candidate, reference, chunks, lexicon, resources, settings
        ),
        Level.CLAUSE: lambda: clause_parameters(
            candidate, reference, chunks, clauses, settings
        ),
        Level.DISCOURSE: lambda: discourse_parameters(candidate, reference, clauses),
        Level.ENTITY_FLOW: lambda: entity_flow_parameters(
            pair.source, candidate, profile.entity_fluency
        ),
    }
    params = {}
    for level in Level:
        if level not in profile:
            continue
        p = computed[level]()
        if p is not None and extensions:
            p = apply_extensions(level, p, extensions, candidate, reference, pair.source)
        params[level] = p
    return params


def score_parameters(
    params: dict[Level, Parameters | None], profile: WeightProfile
) -> dict[Level, LevelScore]:
    """
    Turn computed parameters into level scores.

    Parameters
    ----------
    params
        Output of :func:`level_parameters`.

    profile
        Weights to apply.

    Returns
    -------
    dict[Level, LevelScore]
        Scores keyed by level, in aggregation order.
    """
    scores = {}
    for level, p in params.items():
        if p is None:
            scores[level] = LevelScore.inactive(level)
            continue
        disfluency = profile.entity_fluency if level is Level.ENTITY_FLOW else True
        scores[level] = score_level(level, p[0], p[1], profile[level], disfluency)
    return scores


def evaluate_pair(
    pair: UnitPair,
    profile: WeightProfile,
    lexicon: Lexicon | None = None,
    resources: AlignmentResources = default_resources,
    settings: ScoringSettings = default_scoring_settings,
    extensions: Sequence[ParameterExtension] = (),
) -> UnitReport:
    """
    Score a unit pair against each of its references and
    keep the reference giving the highest overall G (the
    first one on ties).

    Parameters
    ----------
    pair
        The unit pair.

    profile
        Weight profile.

    lexicon
        Lexicon, or ``None``.

    resources
        Word matching resources.

    settings
        Normalization constants.

    extensions
        Additional parameters to compute.

    Returns
    -------
    UnitReport
        Per-level scores and overall G for the best reference.

    Raises
    ------
    EvaluationError
        If no reference leaves a level the profile weights active.
        References without one are skipped.
    """
    best, skipped = None, []
    for index, reference in enumerate(pair.references):
        params = level_parameters(
            pair, reference, profile, lexicon, resources, settings, extensions
        )
        scores = score_parameters(params, profile)
        try:
            weights = active_level_weights(scores, profile)
        except EvaluationError as e:
            skipped.append(f"Unit '{pair.id}', reference {index}: {e}")
            logger.debug("%s", skipped[-1])
            continue
        G = aggregate(scores, profile)
        if best is None or G > best.G:
            best = UnitReport(
                unit_id=pair.id,
                levels=scores,
                level_weights=weights,
                G=G,
                reference_index=index,
            )
    if best is None:
        raise EvaluationError("; ".join(skipped))
    return best


def evaluate_corpus(
    pairs: Sequence[UnitPair],
    profile: WeightProfile,
    lexicon: Lexicon | None = None,
    resources: AlignmentResources = default_resources,
    settings: ScoringSettings = default_scoring_settings,
    extensions: Sequence[ParameterExtension] = (),
    jobs: int = 1,
) -> EvaluationReport:
    """
    Score every pair of a corpus.

    Parameters
    ----------
    pairs
        Unit pairs.

    profile
        Weight profile.

    lexicon
        Lexicon, or ``None``.

    resources
        Word matching resources.

    settings
        Normalization constants.

    extensions
        Additional parameters. With ``jobs > 1`` their
        ``compute`` callables must be picklable.

    jobs
        Number of worker processes. Default 1 (in-process).
        Results keep input order regardless.

    Returns
    -------
    EvaluationReport
        Unit reports in input order, with the profile digest.

    Raises
    ------
    EvaluationError
        If any unit has no active level.
    """
    evaluate = partial(
        evaluate_pair,
        profile=profile,
        lexicon=lexicon,
        resources=resources,
        settings=settings,
        extensions=tuple(extensions),
    )
    if jobs > 1 and len(pairs) > 1:
        logger.info("Scoring %d pairs with %d worker processes.", len(pairs), jobs)
        chunksize = max(1, len(pairs) // (jobs * 4))
        with ProcessPoolExecutor(max_workers=jobs) as executor:
            units = list(executor.map(evaluate, pairs, chunksize=chunksize))
    else:
        units = [evaluate(pair) for pair in pairs]
    return EvaluationReport(
        units=tuple(units),
        profile_digest=profile.digest(),
        profile_name=profile.name,
    )


def dump_report(report: EvaluationReport) -> str:
    return json.dumps(report.to_dict(), indent=2) + "\n"


def level_score_from_dict(level: str, data: dict) -> LevelScore:
    """
    Rebuild a :class:`~model.LevelScore` from its report form.

    Parameters
    ----------
    level
        Level id.

    data
        The level's entry in a unit report.

    Returns
    -------
    LevelScore
        The score.
    """
    if not data.get("active"):
        return LevelScore.inactive(Level(level))
    return LevelScore(
        level=Level(level),
        active=True,
        **{k: data[k] for k in ("P", "Q", "alpha", "beta", "gamma", "delta", "A", "B", "G")},
    )


def recompute_report(report: dict, tolerance: float = 1e-9) -> list[str]:
    """
    Re-derive every level's A, B, G and each unit's overall
    G from the parameters and weights stored in a report.

    Parameters
    ----------
    report
        A report as produced by :func:`dump_report`, decoded.

    tolerance
        Absolute tolerance. Default ``1e-9``.

    Returns
    -------
    list[str]
        One message per discrepancy; empty if the report is
        internally consistent.
    """
    problems = []
    G_values = []
    for unit in report.get("units", []):
        uid = unit.get("id")
        scores = {
            level: level_score_from_dict(level, data)
            for level, data in unit.get("levels", {}).items()
        }
        for score in scores.values():
            problems += [f"[{uid}] {p}" for p in check_level_score(score, tolerance)]
        weights = unit.get("level_weights", {})
        if abs(math.fsum(weights.values()) - 1) > tolerance:
            problems.append(f"[{uid}] level weights do not sum to 1")
        overall = math.fsum(weights[lv] * scores[lv].G for lv in weights if lv in scores)
        stored = unit.get("G")
        if stored is None or abs(overall - stored) > tolerance:
            problems.append(f"[{uid}] stored G={stored!r} but levels give {overall!r}")
            continue
        G_values.append(stored)
    mean = report.get("corpus_mean_G")
    if G_values and mean is not None and abs(math.fsum(G_values) / len(G_values) - mean) > tolerance:
        problems.append(f"stored corpus_mean_G={mean!r} is not the mean of unit G values")
    return problems
