"""
The score-combination calculus: F-mean, convex
combinations of parameters, per-level cognitive ease,
and aggregation across levels.

All functions are pure.
"""

import logging
import math
from collections.abc import Mapping

from cogease.errors import ConfigurationError, EvaluationError
from cogease.model import Level, LevelScore, LevelWeights, WeightProfile
from cogease.util import clamp_unit

logger = logging.getLogger(__name__)


def f_mean(prec: float, recall: float) -> float:
    """
    Recall-weighted harmonic combination of precision and recall,
    ``10 * prec * recall / (recall + 9 * prec)``.

    Parameters
    ----------
    prec
        Precision, in [0, 1].

    recall
        Recall, in [0, 1].

    Returns
    -------
    float
        The F-mean, in [0, 1]. Defined as 0 when both
        arguments are 0.
    """
    denominator = recall + 9 * prec
    if denominator == 0:
        return 0.0
    return clamp_unit(10 * prec * recall / denominator)


def weighted_sum(params: Mapping[str, float], weights: Mapping[str, float]) -> float:
    """
    Convex combination of named parameters.

    Serves both A_i (adequacy parameters weighted by alpha)
    and B_i (disfluency parameters weighted by beta).

    Parameters
    ----------
    params
        Parameter values in [0, 1], keyed by name.

    weights
        Weights on the unit simplex, keyed by the same names.

    Returns
    -------
    float
        The weighted sum, in [0, 1].

    Raises
    ------
    ConfigurationError
        If ``params`` and ``weights`` are keyed by different names.
    """
    if set(params) != set(weights):
        raise ConfigurationError(
            "Parameter and weight names differ: "
            f"parameters {sorted(params)}, weights {sorted(weights)}."
        )
    return clamp_unit(math.fsum(weights[name] * params[name] for name in weights))


def level_cognition(A: float, B: float, gamma: float = 0.5, delta: float = 1.0) -> float:
    """
    Cognitive ease at one level, ``A * (1 - gamma * B ** delta)``.

    Parameters
    ----------
    A
        Adequacy, in [0, 1].

    B
        Lack of fluency, in [0, 1].

    gamma
        Penalty scale, in [0, 1]. Default 0.5.

    delta
        Penalty exponent, > 0. Default 1.

    Returns
    -------
    float
        G_i, in [A * (1 - gamma), A].
    """
    return A * (1 - gamma * B**delta)


def renormalize_weights(
    weights: Mapping[str, float], present: set[str] | frozenset[str]
) -> dict[str, float]:
    """
    Restrict simplex weights to the parameters that are present
    and renormalize them to sum to 1.

    The mass of missing parameters is spread proportionally over
    the present ones. If every present parameter carries zero
    weight, they share the mass uniformly.

    Parameters
    ----------
    weights
        Simplex weights keyed by parameter name.

    present
        Names of the parameters with a value for this unit.

    Returns
    -------
    dict[str, float]
        Renormalized weights over ``present & weights``, in the
        order of ``weights``; empty when nothing is present.
    """
    names = [name for name in weights if name in present]
    if not names:
        return {}
    total = math.fsum(weights[name] for name in names)
    if total <= 0:
        return {name: 1.0 / len(names) for name in names}
    return {name: weights[name] / total for name in names}


def score_level(
    level: Level,
    P: Mapping[str, float],
    Q: Mapping[str, float],
    weights: LevelWeights,
    disfluency_enabled: bool = True,
) -> LevelScore:
    """
    Combine computed parameters into a :class:`LevelScore`.

    Parameters the profile does not weight are kept in the
    score for reporting but do not contribute. Weighted
    parameters that could not be computed fold their mass
    into the rest (see :func:`renormalize_weights`).

    Parameters
    ----------
    level
        The level being scored.

    P
        Adequacy parameter values, in [0, 1].

    Q
        Disfluency parameter values, in [0, 1].

    weights
        The level's weights from the profile.

    disfluency_enabled
        If ``False``, B is fixed at 0 regardless of ``Q``.
        Default ``True``.

    Returns
    -------
    LevelScore
        An active score with A, B and G filled in.
    """
    alpha = renormalize_weights(weights.alpha, set(P))
    beta = renormalize_weights(weights.beta, set(Q)) if disfluency_enabled else {}
    for name in set(weights.alpha) - set(P):
        logger.debug("Level %s: adequacy parameter '%s' folded out.", level, name)

    A = weighted_sum({n: P[n] for n in alpha}, alpha) if alpha else 0.0
    B = weighted_sum({n: Q[n] for n in beta}, beta) if beta else 0.0
    G = level_cognition(A, B, weights.gamma, weights.delta)

    return LevelScore(
        level=level,
        active=True,
        P=dict(P),
        Q=dict(Q),
        alpha=alpha,
        beta=beta,
        gamma=weights.gamma,
        delta=weights.delta,
        A=A,
        B=B,
        G=G,
    )


def rescore(
    score: LevelScore, weights: LevelWeights, disfluency_enabled: bool = True
) -> LevelScore:
    """
    Recombine a level's stored parameters under new weights.

    Parameters
    ----------
    score
        A previously computed level score.

    weights
        The weights to apply.

    disfluency_enabled
        Passed to :func:`score_level`. Default ``True``.

    Returns
    -------
    LevelScore
        The rescored level; inactive scores are returned unchanged.
    """
    if not score.active:
        return score
    return score_level(score.level, score.P, score.Q, weights, disfluency_enabled)


def active_level_weights(
    level_scores: Mapping[Level, LevelScore], profile: WeightProfile
) -> dict[Level, float]:
    """
    Level weights renormalized over the active levels (w'_i).

    Parameters
    ----------
    level_scores
        Scores keyed by level.

    profile
        Profile supplying the raw level weights.

    Returns
    -------
    dict[Level, float]
        Renormalized weights of the active levels.

    Raises
    ------
    EvaluationError
        If no level is active, or the active levels carry
        zero total weight.
    """
    active = [
        level
        for level in Level
        if level in level_scores and level_scores[level].active and level in profile
    ]
    if not active:
        raise EvaluationError(
            "Cannot aggregate: no level is active. At least one "
            "annotation layer must be present on both sides."
        )
    total = math.fsum(profile[level].weight for level in active)
    if total <= 0:
        raise EvaluationError(
            "Cannot aggregate: the active levels "
            f"{[str(level) for level in active]} carry zero total weight."
        )
    return {level: profile[level].weight / total for level in active}


def aggregate(level_scores: Mapping[Level, LevelScore], profile: WeightProfile) -> float:
    """
    Overall cognitive ease, ``sum_i w'_i * G_i`` over active levels.

    Parameters
    ----------
    level_scores
        Scores keyed by level.

    profile
        Profile supplying the level weights.

    Returns
    -------
    float
        Overall G, in [0, 1].

    Raises
    ------
    EvaluationError
        See :func:`active_level_weights`.
    """
    w = active_level_weights(level_scores, profile)
    return clamp_unit(math.fsum(w[level] * level_scores[level].G for level in w))


def check_level_score(score: LevelScore, tolerance: float = 1e-12) -> list[str]:
    """
    Verify that a level score's A, B and G follow from its
    stored parameters and weights.

    Parameters
    ----------
    score
        The score to check.

    tolerance
        Absolute tolerance. Default ``1e-12``.

    Returns
    -------
    list[str]
        One message per discrepancy; empty if consistent.
    """
    if not score.active:
        return []
    problems = []
    values = {"P": score.P, "Q": score.Q, "A": score.A, "B": score.B, "G": score.G}
    for name, value in values.items():
        items = value.values() if isinstance(value, dict) else [value]
        if any(not 0 <= v <= 1 for v in items):
            problems.append(f"{score.level}: {name} outside [0, 1]")
    A = weighted_sum({n: score.P[n] for n in score.alpha}, score.alpha) if score.alpha else 0.0
    B = weighted_sum({n: score.Q[n] for n in score.beta}, score.beta) if score.beta else 0.0
    G = level_cognition(A, B, score.gamma, score.delta)
    for name, expected, stored in (("A", A, score.A), ("B", B, score.B), ("G", G, score.G)):
        if abs(expected - stored) > tolerance:
            problems.append(
                f"{score.level}: stored {name}={stored!r} but parameters give {expected!r}"
            )
    return problems
