"""
Fitting weight profiles to human judgments.

:func:`fit_weights` runs a projected coordinate descent
over the profile's simplexes (level weights, each level's
alpha and beta) and optionally the per-level ``gamma``,
minimizing the mean squared error between overall G and
the human scores. Moves are ``+step`` or ``-step`` on one
coordinate followed by re-projection (clip at 0,
renormalize the free coordinates of the simplex); a move
is kept only if it strictly lowers the loss. The step
halves after a pass without improvement.

Coordinates are addressed by paths such as ``"w.word"``,
``"alpha.chunk.head"``, ``"beta.word.term"`` and
``"gamma.clause"``. Freezing a path also freezes every
path below it, so ``"alpha"`` freezes all alpha weights.
"""

import logging
import math
from collections.abc import Sequence
from dataclasses import dataclass, field, replace

import numpy as np
from scipy import stats

from cogease.alignment import AlignmentResources, default_resources
from cogease.defaults import (
    ScoringSettings,
    default_scoring_settings,
    default_tuning_max_iterations,
    default_tuning_min_step,
    default_tuning_seed,
    default_tuning_step,
)
from cogease.errors import EvaluationError, UndefinedCorrelationError
from cogease.evaluate import level_parameters
from cogease.ingest import Lexicon
from cogease.model import Level, UnitPair, WeightProfile
from cogease.scorers import ParameterExtension, Parameters
from cogease.util import ensure_listlike
from cogease.validate import validate_profile

logger = logging.getLogger(__name__)

losses = ("squared_error",)


@dataclass(frozen=True)
class TuningConfig:
    max_iterations: int = default_tuning_max_iterations
    step: float = default_tuning_step
    min_step: float = default_tuning_min_step
    seed: int = default_tuning_seed
    loss: str = "squared_error"
    frozen: frozenset[str] = frozenset()
    optimize_gamma: bool = False

    def __post_init__(self):
        if self.max_iterations <= 0:
            raise ValueError(
                f"max_iterations must be positive. Got {self.max_iterations}."
            )
        if not self.step > 0 or not self.min_step > 0:
            raise ValueError(
                f"step and min_step must be positive. Got {self.step}, {self.min_step}."
            )
        if self.loss not in losses:
            raise ValueError(f"Unknown loss '{self.loss}'. Expected one of {list(losses)}.")
        frozen = self.frozen
        if isinstance(frozen, str):
            frozen = ensure_listlike(frozen)
        object.__setattr__(self, "frozen", frozenset(frozen))


@dataclass(frozen=True)
class TuningResult:
    """
    Outcome of :func:`fit_weights`.

    Correlations are ``None`` when undefined (constant
    predictions or judgments).
    """

    profile: WeightProfile
    initial_loss: float
    final_loss: float
    iterations: int
    pearson: float | None = None
    spearman: float | None = None
    initial_pearson: float | None = None
    initial_spearman: float | None = None
    accepted_moves: int = 0


@dataclass(frozen=True)
class UnitParameters:
    """
    Computed parameters of one unit against each of its
    references, the fixed input of the tuning loss.
    """

    unit_id: str
    references: tuple[dict[Level, Parameters | None], ...]


def correlation(
    metric_scores: Sequence[float], human_scores: Sequence[float]
) -> tuple[float, float]:
    """
    Pearson and Spearman correlation of metric scores with
    human judgments. Spearman uses average ranks for ties.

    Parameters
    ----------
    metric_scores
        Scores assigned by the metric.

    human_scores
        Human judgments for the same units.

    Returns
    -------
    tuple[float, float]
        ``(pearson, spearman)``.

    Raises
    ------
    ValueError
        If the lengths differ or are zero.

    UndefinedCorrelationError
        If either argument has zero variance.
    """
    x = np.asarray(metric_scores, dtype=float)
    y = np.asarray(human_scores, dtype=float)
    if len(x) != len(y) or len(x) == 0:
        raise ValueError(
            "Correlation needs two equally long, non-empty score lists. "
            f"Got lengths {len(x)} and {len(y)}."
        )
    for name, values in (("metric", x), ("human", y)):
        if np.ptp(values) == 0:
            raise UndefinedCorrelationError(
                f"Correlation is undefined: all {name} scores are equal."
            )
    return float(stats.pearsonr(x, y).statistic), float(stats.spearmanr(x, y).statistic)


def _combine(values: np.ndarray, present: np.ndarray, weights: np.ndarray) -> np.ndarray:
    # row-wise weighted_sum with renormalize_weights over present parameters
    w = weights[None, :] * present
    total = w.sum(axis=1, keepdims=True)
    count = present.sum(axis=1, keepdims=True)
    uniform = present / np.maximum(count, 1)
    w = np.where(total > 0, w / np.where(total > 0, total, 1), uniform)
    return np.clip((w * values).sum(axis=1), 0, 1)


@dataclass
class _LevelArrays:
    alpha_names: list[str]
    beta_names: list[str]
    P: np.ndarray
    P_present: np.ndarray
    Q: np.ndarray
    Q_present: np.ndarray
    active: np.ndarray
    disfluency: bool = True


@dataclass
class LossModel:
    """
    Vectorized overall G of every unit as a function of the
    profile's weights, for parameters computed once.

    Each unit contributes one row per reference; a unit's G
    is the maximum over its rows.
    """

    table: Sequence[UnitParameters]
    human: np.ndarray
    template: WeightProfile
    levels: dict[Level, _LevelArrays] = field(init=False)
    starts: np.ndarray = field(init=False)

    def __post_init__(self):
        rows = [params for unit in self.table for params in unit.references]
        counts = [len(unit.references) for unit in self.table]
        self.starts = np.concatenate([[0], np.cumsum(counts)[:-1]]).astype(int)
        self.levels = {}
        for level, lw in self.template.levels.items():
            arrays = _LevelArrays(
                alpha_names=list(lw.alpha),
                beta_names=list(lw.beta),
                P=np.zeros((len(rows), len(lw.alpha))),
                P_present=np.zeros((len(rows), len(lw.alpha))),
                Q=np.zeros((len(rows), len(lw.beta))),
                Q_present=np.zeros((len(rows), len(lw.beta))),
                active=np.zeros(len(rows)),
                disfluency=self.template.entity_fluency
                if level is Level.ENTITY_FLOW
                else True,
            )
            for i, params in enumerate(rows):
                p = params.get(level)
                if p is None:
                    continue
                arrays.active[i] = 1
                for j, name in enumerate(arrays.alpha_names):
                    if name in p[0]:
                        arrays.P[i, j], arrays.P_present[i, j] = p[0][name], 1
                for j, name in enumerate(arrays.beta_names):
                    if name in p[1]:
                        arrays.Q[i, j], arrays.Q_present[i, j] = p[1][name], 1
            self.levels[level] = arrays

    def predict(self, profile: WeightProfile) -> np.ndarray:
        """
        Overall G per unit.

        Parameters
        ----------
        profile
            Profile with the same levels and parameter names
            as the model's template.

        Returns
        -------
        np.ndarray
            One G per unit, the best over its references;
            ``nan`` where no reference has an active level
            with positive weight.
        """
        n_rows = len(next(iter(self.levels.values())).active) if self.levels else 0
        numerator, denominator = np.zeros(n_rows), np.zeros(n_rows)
        for level, arrays in self.levels.items():
            lw = profile[level]
            A = _combine(
                arrays.P, arrays.P_present, np.array([lw.alpha[n] for n in arrays.alpha_names])
            )
            if arrays.disfluency:
                B = _combine(
                    arrays.Q, arrays.Q_present, np.array([lw.beta[n] for n in arrays.beta_names])
                )
            else:
                B = np.zeros(n_rows)
            G = A * (1 - lw.gamma * B**lw.delta)
            w = lw.weight * arrays.active
            numerator += w * G
            denominator += w
        with np.errstate(divide="ignore", invalid="ignore"):
            G_rows = np.where(denominator > 0, numerator / denominator, np.nan)
        return np.fmax.reduceat(G_rows, self.starts)

    def loss(self, profile: WeightProfile) -> float:
        predicted = self.predict(profile)
        if np.isnan(predicted).any():
            return math.inf
        return float(np.mean((predicted - self.human) ** 2))


def _is_frozen(path: str, frozen: frozenset[str]) -> bool:
    return any(path == f or path.startswith(f + ".") for f in frozen)


def _groups(profile: WeightProfile, optimize_gamma: bool) -> list[tuple[str, Level | None]]:
    groups = [("w", None)]
    for level in profile.levels:
        groups += [("alpha", level), ("beta", level)]
        if optimize_gamma:
            groups.append(("gamma", level))
    return groups


def _group_values(profile: WeightProfile, group: tuple[str, Level | None]) -> dict[str, float]:
    kind, level = group
    if kind == "w":
        return {str(lv): lw.weight for lv, lw in profile.levels.items()}
    lw = profile[level]
    if kind == "alpha":
        return dict(lw.alpha)
    if kind == "beta":
        return dict(lw.beta)
    return {"gamma": lw.gamma}


def _replace_group(
    profile: WeightProfile, group: tuple[str, Level | None], values: dict[str, float]
) -> WeightProfile:
    kind, level = group
    if kind == "w":
        return replace(
            profile,
            levels={
                lv: replace(lw, weight=values[str(lv)]) for lv, lw in profile.levels.items()
            },
        )
    lw = profile[level]
    if kind == "alpha":
        return profile.with_level(level, replace(lw, alpha=values))
    if kind == "beta":
        return profile.with_level(level, replace(lw, beta=values))
    return profile.with_level(level, replace(lw, gamma=values["gamma"]))


def _path(group: tuple[str, Level | None], name: str) -> str:
    kind, level = group
    if kind == "w":
        return f"w.{name}"
    if kind == "gamma":
        return f"gamma.{level}"
    return f"{kind}.{level}.{name}"


def _move(
    values: dict[str, float],
    name: str,
    delta: float,
    free: list[str],
    simplex: bool,
) -> dict[str, float] | None:
    if not simplex:
        moved = min(1.0, max(0.0, values[name] + delta))
        return None if moved == values[name] else {name: moved}
    if len(free) < 2:
        return None
    mass = 1 - math.fsum(v for n, v in values.items() if n not in free)
    if mass <= 0:
        return None
    proposal = np.array([values[n] for n in free])
    proposal[free.index(name)] = max(0.0, values[name] + delta)
    total = proposal.sum()
    if total <= 0:
        return None
    proposal = proposal * (mass / total)
    moved = dict(values)
    moved.update(zip(free, proposal.tolist()))
    return moved


def _correlations(predicted: np.ndarray, human: np.ndarray) -> tuple[float | None, float | None]:
    try:
        return correlation(predicted, human)
    except UndefinedCorrelationError as e:
        logger.warning("%s", e)
        return None, None


def fit_parameters(
    table: Sequence[UnitParameters],
    human_scores: Sequence[float],
    initial: WeightProfile,
    config: TuningConfig = TuningConfig(),
) -> TuningResult:
    """
    Fit a profile to human scores for precomputed parameters.

    Parameters
    ----------
    table
        Per-unit parameters, one entry per reference.

    human_scores
        Human judgments in [0, 1], aligned with ``table``.

    initial
        Starting profile; also fixes the levels and
        parameter names being weighted.

    config
        Search settings.

    Returns
    -------
    TuningResult
        The fitted profile and the losses and correlations
        before and after.

    Raises
    ------
    EvaluationError
        If the table is empty, lengths differ, or the
        initial profile leaves some unit without an active
        level.
    """
    if not table:
        raise EvaluationError("Cannot fit weights to an empty dataset.")
    if len(table) != len(human_scores):
        raise EvaluationError(
            f"Got {len(table)} units but {len(human_scores)} human scores."
        )
    human = np.asarray(human_scores, dtype=float)
    model = LossModel(table, human, initial)

    profile = initial
    loss = model.loss(profile)
    if math.isinf(loss):
        raise EvaluationError(
            "The initial profile leaves some unit without an active, "
            "positively weighted level."
        )
    initial_loss = loss
    initial_pearson, initial_spearman = _correlations(model.predict(profile), human)

    coordinates = []
    for group in _groups(profile, config.optimize_gamma):
        for name in _group_values(profile, group):
            if not _is_frozen(_path(group, name), config.frozen):
                coordinates.append((group, name))
    logger.info(
        "Tuning %d free coordinates; initial loss %.6g.", len(coordinates), initial_loss
    )

    rng = np.random.default_rng(config.seed)
    step = config.step
    iterations = accepted = 0
    while iterations < config.max_iterations and step >= config.min_step:
        iterations += 1
        improved = False
        for k in rng.permutation(len(coordinates)):
            group, name = coordinates[k]
            values = _group_values(profile, group)
            free = [n for n in values if not _is_frozen(_path(group, n), config.frozen)]
            for direction in (1, -1):
                moved = _move(values, name, direction * step, free, group[0] != "gamma")
                if moved is None:
                    continue
                candidate = _replace_group(profile, group, moved)
                candidate_loss = model.loss(candidate)
                if candidate_loss < loss:
                    profile, loss = candidate, candidate_loss
                    improved = True
                    accepted += 1
                    break
        if not improved:
            step /= 2
            logger.debug("Pass %d: no improvement, step now %g.", iterations, step)

    problems = validate_profile(profile)
    if problems:
        logger.warning("Fitted profile has diagnostics: %s", [str(d) for d in problems])

    pearson, spearman = _correlations(model.predict(profile), human)
    logger.info(
        "Tuning finished after %d passes: loss %.6g -> %.6g.", iterations, initial_loss, loss
    )
    return TuningResult(
        profile=profile,
        initial_loss=initial_loss,
        final_loss=loss,
        iterations=iterations,
        pearson=pearson,
        spearman=spearman,
        initial_pearson=initial_pearson,
        initial_spearman=initial_spearman,
        accepted_moves=accepted,
    )


def fit_weights(
    dataset: Sequence[UnitPair],
    initial: WeightProfile,
    config: TuningConfig = TuningConfig(),
    lexicon: Lexicon | None = None,
    resources: AlignmentResources = default_resources,
    settings: ScoringSettings = default_scoring_settings,
    extensions: Sequence[ParameterExtension] = (),
) -> TuningResult:
    """
    Fit a profile's weights to the human scores of a dataset.

    Parameters are computed once per unit and reference;
    the search then only recombines them.

    Parameters
    ----------
    dataset
        Unit pairs, every one with a ``human_score``.

    initial
        Starting profile.

    config
        Search settings. Default :class:`TuningConfig`.

    lexicon
        Lexicon, or ``None``.

    resources
        Word matching resources.

    settings
        Normalization constants.

    extensions
        Additional parameters.

    Returns
    -------
    TuningResult
        See :func:`fit_parameters`.

    Raises
    ------
    EvaluationError
        If the dataset is empty or a pair lacks a human score.
    """
    if not dataset:
        raise EvaluationError("Cannot fit weights to an empty dataset.")
    missing = [pair.id for pair in dataset if pair.human_score is None]
    if missing:
        raise EvaluationError(
            f"Every tuning record needs a human_score; missing for {missing[:10]}"
            + (" and more." if len(missing) > 10 else ".")
        )
    table = [
        UnitParameters(
            unit_id=pair.id,
            references=tuple(
                level_parameters(
                    pair, ref, initial, lexicon, resources, settings, extensions
                )
                for ref in pair.references
            ),
        )
        for pair in dataset
    ]
    return fit_parameters(table, [pair.human_score for pair in dataset], initial, config)
