"""
Default settings, weight profiles, and audience presets.
"""

from dataclasses import dataclass

from cogease.model import (
    DEFAULT_REGISTRY,
    Level,
    LevelWeights,
    ParameterRegistry,
    WeightProfile,
)

default_gamma = 0.5
default_delta = 1.0

simplex_tolerance = 1e-9

default_common_rank_cutoff = 5000
default_max_chunk_len = 5
default_max_chunks_per_clause = 6

# CompareLength steps: (largest relative length difference, score)
# beyond the last step the score is 0
compare_length_steps = (
    ("0", 1.0),
    ("1/5", 0.9),
    ("3/10", 0.75),
)

default_tuning_max_iterations = 200
default_tuning_step = 0.05
default_tuning_min_step = 1e-6
default_tuning_seed = 0

# term burden weighted up for readers outside the text's domain
lay_technical_beta_term = 0.6

audiences = ("general", "lay_technical")


@dataclass(frozen=True)
class ScoringSettings:
    """
    Normalization constants of the chunk- and clause-level
    disfluency parameters.
    """

    max_chunk_len: int = default_max_chunk_len
    max_chunks_per_clause: int = default_max_chunks_per_clause


default_scoring_settings = ScoringSettings()


def _uniform(names: tuple[str, ...]) -> dict[str, float]:
    return {name: 1.0 / len(names) for name in names}


def get_default_profile(
    registry: ParameterRegistry = None,
    levels: tuple[Level, ...] = None,
    gamma: float = default_gamma,
    delta: float = default_delta,
    name: str = "default",
) -> WeightProfile:
    """
    Uniform weight profile over the given levels.

    Every simplex (level weights, each level's alpha and
    beta) is uniform, and every level uses the simplified
    penalty ``gamma = 0.5``, ``delta = 1``.

    Parameters
    ----------
    registry
        Parameter registry supplying parameter names.
        If ``None``, use :obj:`~model.DEFAULT_REGISTRY`.

    levels
        Levels to include. If ``None``, all levels of the
        registry, in aggregation order.

    gamma
        Penalty scale for every level. Default 0.5.

    delta
        Penalty exponent for every level. Default 1.

    name
        Profile name. Default ``"default"``.

    Returns
    -------
    WeightProfile
        The profile.
    """
    registry = registry or DEFAULT_REGISTRY
    if levels is None:
        levels = tuple(level for level in Level if level in registry.levels)
    return WeightProfile(
        levels={
            level: LevelWeights(
                weight=1.0 / len(levels),
                alpha=_uniform(registry.levels[level].adequacy),
                beta=_uniform(registry.levels[level].disfluency),
                gamma=gamma,
                delta=delta,
            )
            for level in levels
        },
        name=name,
    )


def audience_profile(audience: str) -> WeightProfile:
    """
    Preset profile tailored to a type of reader.

    ``"general"`` is the uniform default profile.
    ``"lay_technical"`` is for readers unfamiliar with the
    domain of a technical text: the word-level term burden
    ``term`` gets :obj:`lay_technical_beta_term` of the
    word-level disfluency mass, the rest shared equally.

    Parameters
    ----------
    audience
        One of :obj:`audiences`.

    Returns
    -------
    WeightProfile
        The preset profile.

    Raises
    ------
    ValueError
        If the audience is unknown.
    """
    if audience == "general":
        return get_default_profile(name="general")
    if audience == "lay_technical":
        profile = get_default_profile(name="lay_technical")
        word = profile[Level.WORD]
        others = [n for n in word.beta if n != "term"]
        beta = {n: (1 - lay_technical_beta_term) / len(others) for n in others}
        beta["term"] = lay_technical_beta_term
        return profile.with_level(
            Level.WORD,
            LevelWeights(word.weight, dict(word.alpha), beta, word.gamma, word.delta),
        )
    raise ValueError(
        f"Unknown audience '{audience}'. Expected one of {list(audiences)}."
    )
