"""
Domain types for cognitive-ease scoring: annotated
units, weight profiles, the parameter registry, and
per-level and per-corpus scores.
"""

import hashlib
import json
from dataclasses import dataclass, field, replace
from enum import StrEnum
from functools import cached_property
from statistics import fmean

from cogease.errors import ConfigurationError


class Level(StrEnum):
    """
    Scoring levels, in aggregation order.
    """

    WORD = "word"
    CHUNK = "chunk"
    CLAUSE = "clause"
    DISCOURSE = "discourse"
    ENTITY_FLOW = "entity_flow"


class WordClass(StrEnum):
    CONTENT = "content"
    FUNCTION = "function"
    UNKNOWN = "unknown"


class MatchStage(StrEnum):
    """
    Word matching stages, in the order they are applied.
    """

    EXACT = "exact"
    STEM = "stem"
    SYNONYM = "synonym"


class ParameterKind(StrEnum):
    ADEQUACY = "adequacy"
    DISFLUENCY = "disfluency"


@dataclass(frozen=True)
class LevelParameters:
    """
    Names of the adequacy (P) and disfluency (Q)
    parameters defined at one level.
    """

    adequacy: tuple[str, ...]
    disfluency: tuple[str, ...]

    def names(self, kind: ParameterKind) -> tuple[str, ...]:
        """
        Parameter names of one kind.

        Parameters
        ----------
        kind
            Adequacy or disfluency.

        Returns
        -------
        tuple[str, ...]
            The names, in registry order.
        """
        if kind is ParameterKind.ADEQUACY:
            return self.adequacy
        return self.disfluency


@dataclass(frozen=True)
class ParameterRegistry:
    """
    The fixed set of named parameters per level.

    Every parameter name belongs to exactly one level.
    New orthogonal parameters (for instance a sentiment
    adequacy term at the word level) are admitted by
    :meth:`extend`, which returns a new registry.
    """

    levels: dict[Level, LevelParameters]

    def names(self, level: Level, kind: ParameterKind) -> tuple[str, ...]:
        """
        Registered names of one kind at one level.

        Parameters
        ----------
        level
            The level.

        kind
            Adequacy or disfluency.

        Returns
        -------
        tuple[str, ...]
            Registered names; empty if the level is unknown.
        """
        params = self.levels.get(level)
        return () if params is None else params.names(kind)

    def level_of(self, name: str) -> Level | None:
        """
        The level at which a parameter name is registered.

        Parameters
        ----------
        name
            Parameter name.

        Returns
        -------
        Level | None
            The owning level, or ``None`` if unregistered.
        """
        for level, params in self.levels.items():
            if name in params.adequacy or name in params.disfluency:
                return level
        return None

    def extend(
        self,
        level: Level,
        adequacy: tuple[str, ...] = (),
        disfluency: tuple[str, ...] = (),
    ) -> "ParameterRegistry":
        """
        Register additional parameters at a level.

        Parameters
        ----------
        level
            Level receiving the new parameters.

        adequacy
            New adequacy parameter names.

        disfluency
            New disfluency parameter names.

        Returns
        -------
        ParameterRegistry
            A new registry; ``self`` is unchanged.

        Raises
        ------
        ConfigurationError
            If a name is already registered at any level.
        """
        for name in (*adequacy, *disfluency):
            owner = self.level_of(name)
            if owner is not None:
                raise ConfigurationError(
                    f"Parameter name '{name}' is already registered "
                    f"at level '{owner}'. Parameter names must be "
                    "unique across levels."
                )
        current = self.levels.get(level, LevelParameters((), ()))
        levels = dict(self.levels)
        levels[level] = LevelParameters(
            adequacy=current.adequacy + tuple(adequacy),
            disfluency=current.disfluency + tuple(disfluency),
        )
        return ParameterRegistry(levels)


DEFAULT_REGISTRY = ParameterRegistry(
    {
        Level.WORD: LevelParameters(("lex", "pos"), ("nword", "uncom", "term")),
        Level.CHUNK: LevelParameters(
            ("head", "vibh"), ("words_per_chunk", "nchunk", "uncom_ne")
        ),
        Level.CLAUSE: LevelParameters(
            ("intra", "inter"), ("chunks_per_clause", "fragmentation", "long_dist")
        ),
        Level.DISCOURSE: LevelParameters(("topic_focus", "relations"), ("linked_dist",)),
        Level.ENTITY_FLOW: LevelParameters(("seq_len", "seq_edit"), ("seq",)),
    }
)


@dataclass(frozen=True)
class Token:
    surface: str
    lemma: str | None = None
    word_class: WordClass = WordClass.UNKNOWN
    index: int = 0


@dataclass(frozen=True)
class Chunk:
    """
    A non-recursive phrase over a half-open token span.

    ``function_markers`` holds the token indices of the
    chunk's function marking (prepositions, postpositions,
    case endings).
    """

    span: tuple[int, int]
    head: int
    function_markers: frozenset[int] = frozenset()
    is_named_entity: bool = False
    id: int = 0

    @property
    def start(self) -> int:
        return self.span[0]

    @property
    def end(self) -> int:
        return self.span[1]

    def __len__(self) -> int:
        return self.span[1] - self.span[0]

    def __contains__(self, token_index: int) -> bool:
        return self.span[0] <= token_index < self.span[1]


@dataclass(frozen=True)
class Clause:
    chunk_ids: tuple[int, ...]
    parent: int | None = None
    relation_label: str | None = None
    id: int = 0


@dataclass(frozen=True)
class DiscourseRelation:
    from_clause: int
    to_clause: int
    label: str


@dataclass(frozen=True)
class DiscourseAnnotation:
    topic: str | None = None
    focus: str | None = None
    relations: tuple[DiscourseRelation, ...] = ()


@dataclass(frozen=True)
class AnnotatedUnit:
    """
    One sentence or paragraph with its annotation layers.

    Optional layers are ``None`` when absent; a level whose
    layer is absent on either side of a comparison is inactive.
    """

    raw_text: str
    tokens: tuple[Token, ...]
    chunks: tuple[Chunk, ...] | None = None
    clauses: tuple[Clause, ...] | None = None
    discourse: DiscourseAnnotation | None = None
    entity_sequence: tuple[str, ...] | None = None

    def __len__(self) -> int:
        return len(self.tokens)

    def chunk_by_id(self) -> dict[int, Chunk]:
        """
        Index the chunk layer by chunk id.

        Returns
        -------
        dict[int, Chunk]
            Chunks keyed by id; empty when the layer is absent.
        """
        return {c.id: c for c in self.chunks or ()}

    def clause_of_chunk(self) -> dict[int, int]:
        """
        Map each chunk id to the id of the clause containing it.

        Returns
        -------
        dict[int, int]
            Chunk id to clause id; chunks outside every
            clause are absent.
        """
        return {cid: clause.id for clause in self.clauses or () for cid in clause.chunk_ids}


@dataclass(frozen=True)
class UnitPair:
    id: str
    candidate: AnnotatedUnit
    references: tuple[AnnotatedUnit, ...]
    source: AnnotatedUnit | None = None
    human_score: float | None = None


@dataclass(frozen=True)
class Diagnostic:
    """
    A non-fatal validation finding.

    ``line`` is the 1-based input line number, when the
    finding comes from a line-oriented input.
    """

    message: str
    line: int | None = None
    unit_id: str | None = None

    def __str__(self) -> str:
        where = f"line {self.line}: " if self.line is not None else ""
        who = f"[{self.unit_id}] " if self.unit_id is not None else ""
        return f"{where}{who}{self.message}"


@dataclass(frozen=True)
class LevelWeights:
    """
    Free parameters of one level: the level weight ``weight``
    (w_i), the penalty scale ``gamma`` and exponent ``delta``,
    and the simplex weights ``alpha`` over adequacy parameters
    and ``beta`` over disfluency parameters.
    """

    weight: float
    alpha: dict[str, float]
    beta: dict[str, float]
    gamma: float
    delta: float

    def to_dict(self) -> dict:
        return dict(
            weight=self.weight,
            gamma=self.gamma,
            delta=self.delta,
            alpha=dict(self.alpha),
            beta=dict(self.beta),
        )


@dataclass(frozen=True)
class WeightProfile:
    """
    The complete set of free weights of the calculus.

    Levels absent from ``levels`` are never scored.
    ``entity_fluency`` switches the entity-flow disfluency
    parameter on; when off, B at that level is 0.
    """

    levels: dict[Level, LevelWeights]
    name: str = "custom"
    entity_fluency: bool = False

    def __getitem__(self, level: Level) -> LevelWeights:
        return self.levels[level]

    def __contains__(self, level: Level) -> bool:
        return level in self.levels

    def with_level(self, level: Level, weights: LevelWeights) -> "WeightProfile":
        """
        Copy of the profile with one level's weights replaced.

        Parameters
        ----------
        level
            Level to replace or add.

        weights
            New weights for the level.

        Returns
        -------
        WeightProfile
            The new profile.
        """
        levels = dict(self.levels)
        levels[level] = weights
        return replace(self, levels=levels)

    def to_dict(self) -> dict:
        return dict(
            name=self.name,
            entity_fluency=self.entity_fluency,
            levels={
                str(level): self.levels[level].to_dict()
                for level in Level
                if level in self.levels
            },
        )

    def digest(self) -> str:
        """
        SHA-256 digest of the profile's canonical JSON form.

        Returns
        -------
        str
            Hex digest, stable across runs and platforms.
        """
        canonical = json.dumps(self.to_dict(), sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(canonical.encode("utf-8")).hexdigest()


@dataclass(frozen=True)
class LevelScore:
    """
    Parameters and scores at one level for one unit.

    ``alpha`` and ``beta`` hold the weights actually used,
    i.e. renormalized over the parameters that could be
    computed for this unit. Inactive levels carry no scores.
    """

    level: Level
    active: bool
    P: dict[str, float] = field(default_factory=dict)
    Q: dict[str, float] = field(default_factory=dict)
    alpha: dict[str, float] = field(default_factory=dict)
    beta: dict[str, float] = field(default_factory=dict)
    gamma: float | None = None
    delta: float | None = None
    A: float | None = None
    B: float | None = None
    G: float | None = None

    @classmethod
    def inactive(cls, level: Level) -> "LevelScore":
        return cls(level=level, active=False)

    def to_dict(self) -> dict:
        if not self.active:
            return dict(active=False)
        return dict(
            active=True,
            P=dict(self.P),
            Q=dict(self.Q),
            alpha=dict(self.alpha),
            beta=dict(self.beta),
            gamma=self.gamma,
            delta=self.delta,
            A=self.A,
            B=self.B,
            G=self.G,
        )


@dataclass(frozen=True)
class UnitReport:
    """
    Scores of one unit pair against its best reference.

    ``level_weights`` are the level weights renormalized
    over the active levels (w'_i).
    """

    unit_id: str
    levels: dict[Level, LevelScore]
    level_weights: dict[Level, float]
    G: float
    reference_index: int = 0

    @property
    def weakest_level(self) -> Level | None:
        """
        The active level with the lowest G_i; ties go
        to the earlier level.

        Returns
        -------
        Level | None
            The level, or ``None`` when nothing is active.
        """
        active = [s for s in self.levels.values() if s.active]
        if not active:
            return None
        return min(active, key=lambda s: (s.G, list(Level).index(s.level))).level

    def to_dict(self) -> dict:
        weakest = self.weakest_level
        return dict(
            id=self.unit_id,
            G=self.G,
            reference_index=self.reference_index,
            weakest_level=None if weakest is None else str(weakest),
            level_weights={str(k): v for k, v in self.level_weights.items()},
            levels={str(k): v.to_dict() for k, v in self.levels.items()},
        )


@dataclass(frozen=True)
class EvaluationReport:
    units: tuple[UnitReport, ...]
    profile_digest: str
    profile_name: str = "custom"

    @cached_property
    def corpus_mean_G(self) -> float | None:
        """
        Arithmetic mean of the unit G values.

        Returns
        -------
        float | None
            The mean, or ``None`` for an empty report.
        """
        if not self.units:
            return None
        return fmean(u.G for u in self.units)

    @cached_property
    def per_level_mean(self) -> dict[Level, float]:
        """
        Mean G_i per level over the units where that level
        is active.

        Returns
        -------
        dict[Level, float]
            Means keyed by level; levels never active are absent.
        """
        means = {}
        for level in Level:
            values = [
                u.levels[level].G
                for u in self.units
                if level in u.levels and u.levels[level].active
            ]
            if values:
                means[level] = fmean(values)
        return means

    def to_dict(self) -> dict:
        return dict(
            profile_digest=self.profile_digest,
            profile_name=self.profile_name,
            corpus_mean_G=self.corpus_mean_G,
            per_level_mean={str(k): v for k, v in self.per_level_mean.items()},
            units=[u.to_dict() for u in self.units],
        )

