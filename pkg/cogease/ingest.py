"""
Reading and writing corpora, weight profiles, lexicons,
synonym tables, and language profiles.

Corpus files are UTF-8 JSON Lines, one unit pair per line.
Records that violate the schema are skipped with a
line-numbered :class:`~model.Diagnostic`; unreadable
files raise :class:`~errors.IngestError`.
"""

import json
import logging
import math
import re
from collections.abc import Iterable, Sequence
from dataclasses import dataclass
from decimal import Decimal
from functools import cached_property

from cogease.alignment import SuffixStemmer, SynonymTable
from cogease.config import load_config_file
from cogease.defaults import default_common_rank_cutoff, default_delta, default_gamma
from cogease.errors import ConfigurationError, IngestError
from cogease.model import (
    DEFAULT_REGISTRY,
    AnnotatedUnit,
    Chunk,
    Clause,
    Diagnostic,
    DiscourseAnnotation,
    DiscourseRelation,
    Level,
    LevelWeights,
    ParameterRegistry,
    Token,
    UnitPair,
    WeightProfile,
    WordClass,
)
from cogease.util import fold_case
from cogease.validate import validate_annotations, validate_profile

logger = logging.getLogger(__name__)

_token_pattern = re.compile(r"^(.*?)([.,;:!?]*)$")


def tokenize(raw_text: str) -> tuple[Token, ...]:
    """
    Whitespace tokenization with trailing punctuation
    (``.,;:!?``) split into tokens of its own.

    Parameters
    ----------
    raw_text
        Text to tokenize.

    Returns
    -------
    tuple[Token, ...]
        Tokens with contiguous 0-based indices.
    """
    surfaces = []
    for piece in raw_text.split():
        word, punctuation = _token_pattern.match(piece).groups()
        if word:
            surfaces.append(word)
        surfaces.extend(punctuation)
    return tuple(Token(surface=s, index=i) for i, s in enumerate(surfaces))


def _require_int(value: any, what: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise ValueError(f"{what} must be an integer. Got {value!r}.")
    return value


def _require_str(value: any, what: str) -> str:
    if not isinstance(value, str):
        raise ValueError(f"{what} must be a string. Got {value!r}.")
    return value


def _require_list(value: any, what: str) -> list:
    if not isinstance(value, list):
        raise ValueError(f"{what} must be a list. Got {value!r}.")
    return value


def _require_dict(value: any, what: str) -> dict:
    if not isinstance(value, dict):
        raise ValueError(f"{what} must be an object. Got {value!r}.")
    return value


def _optional_str(obj: dict, key: str, what: str) -> str | None:
    value = obj.get(key)
    return None if value is None else _require_str(value, what)


def _parse_token(obj: any, index: int) -> Token:
    obj = _require_dict(obj, f"token {index}")
    word_class = obj.get("cls")
    if word_class is None:
        word_class = WordClass.UNKNOWN
    elif word_class in (WordClass.CONTENT, WordClass.FUNCTION):
        word_class = WordClass(word_class)
    else:
        raise ValueError(
            f"token {index}: 'cls' must be 'content' or 'function'. Got {word_class!r}."
        )
    return Token(
        surface=_require_str(obj.get("t"), f"token {index}: 't'"),
        lemma=_optional_str(obj, "lemma", f"token {index}: 'lemma'"),
        word_class=word_class,
        index=index,
    )


def _parse_chunk(obj: any, chunk_id: int) -> Chunk:
    obj = _require_dict(obj, f"chunk {chunk_id}")
    span = _require_list(obj.get("span"), f"chunk {chunk_id}: 'span'")
    if len(span) != 2:
        raise ValueError(f"chunk {chunk_id}: 'span' must have two entries. Got {span!r}.")
    markers = _require_list(obj.get("func", []), f"chunk {chunk_id}: 'func'")
    ne = obj.get("ne", False)
    if not isinstance(ne, bool):
        raise ValueError(f"chunk {chunk_id}: 'ne' must be a boolean. Got {ne!r}.")
    return Chunk(
        span=tuple(_require_int(x, f"chunk {chunk_id}: span entry") for x in span),
        head=_require_int(obj.get("head"), f"chunk {chunk_id}: 'head'"),
        function_markers=frozenset(
            _require_int(x, f"chunk {chunk_id}: 'func' entry") for x in markers
        ),
        is_named_entity=ne,
        id=chunk_id,
    )


def _parse_clause(obj: any, clause_id: int) -> Clause:
    obj = _require_dict(obj, f"clause {clause_id}")
    chunk_ids = _require_list(obj.get("chunks"), f"clause {clause_id}: 'chunks'")
    parent = obj.get("parent")
    return Clause(
        chunk_ids=tuple(
            _require_int(x, f"clause {clause_id}: chunk id") for x in chunk_ids
        ),
        parent=None if parent is None else _require_int(parent, f"clause {clause_id}: 'parent'"),
        relation_label=_optional_str(obj, "rel", f"clause {clause_id}: 'rel'"),
        id=clause_id,
    )


def _parse_discourse(obj: any) -> DiscourseAnnotation:
    obj = _require_dict(obj, "'discourse'")
    relations = []
    for i, rel in enumerate(_require_list(obj.get("relations", []), "'relations'")):
        rel = _require_dict(rel, f"relation {i}")
        relations.append(
            DiscourseRelation(
                from_clause=_require_int(rel.get("from"), f"relation {i}: 'from'"),
                to_clause=_require_int(rel.get("to"), f"relation {i}: 'to'"),
                label=_require_str(rel.get("label"), f"relation {i}: 'label'"),
            )
        )
    return DiscourseAnnotation(
        topic=_optional_str(obj, "topic", "'topic'"),
        focus=_optional_str(obj, "focus", "'focus'"),
        relations=tuple(relations),
    )


def parse_unit(obj: any) -> AnnotatedUnit:
    """
    Build an :class:`~model.AnnotatedUnit` from its JSON form.

    Structural checks only; layer invariants are checked
    by :func:`~validate.validate_annotations`.

    Parameters
    ----------
    obj
        Decoded JSON object with a ``"text"`` entry and
        optional ``"tokens"``, ``"chunks"``, ``"clauses"``,
        ``"discourse"`` and ``"entities"`` entries.

    Returns
    -------
    AnnotatedUnit
        The unit. Without ``"tokens"``, tokens come from
        :func:`tokenize`.

    Raises
    ------
    ValueError
        If the object does not follow the unit schema.
    """
    obj = _require_dict(obj, "unit")
    text = _require_str(obj.get("text"), "'text'")
    if "tokens" in obj:
        tokens = tuple(
            _parse_token(t, i)
            for i, t in enumerate(_require_list(obj["tokens"], "'tokens'"))
        )
    else:
        tokens = tokenize(text)

    chunks = clauses = discourse = entities = None
    if obj.get("chunks") is not None:
        chunks = tuple(
            _parse_chunk(c, i) for i, c in enumerate(_require_list(obj["chunks"], "'chunks'"))
        )
    if obj.get("clauses") is not None:
        clauses = tuple(
            _parse_clause(c, i)
            for i, c in enumerate(_require_list(obj["clauses"], "'clauses'"))
        )
    if obj.get("discourse") is not None:
        discourse = _parse_discourse(obj["discourse"])
    if obj.get("entities") is not None:
        entities = tuple(_require_list(obj["entities"], "'entities'"))

    return AnnotatedUnit(
        raw_text=text,
        tokens=tokens,
        chunks=chunks,
        clauses=clauses,
        discourse=discourse,
        entity_sequence=entities,
    )


def _parse_score(value: any, score_range: tuple[float, float] | None) -> float | None:
    if value is None:
        return None
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ValueError(f"'human_score' must be a number. Got {value!r}.")
    if score_range is not None:
        lo, hi = score_range
        value = (value - lo) / (hi - lo)
    if not 0 <= value <= 1:
        raise ValueError(f"'human_score' must lie in [0, 1]. Got {value!r}.")
    return float(value)


def parse_record(
    obj: any, score_range: tuple[float, float] | None = None
) -> tuple[UnitPair | None, list[str]]:
    """
    Build a :class:`~model.UnitPair` from one decoded record
    and check its annotation layers.

    Parameters
    ----------
    obj
        Decoded JSON record.

    score_range
        ``(lo, hi)`` of the raw human-score scale, min-max
        mapped onto [0, 1]. If ``None``, scores must already
        lie in [0, 1].

    Returns
    -------
    tuple[UnitPair | None, list[str]]
        The pair, or ``None`` if the record is invalid, and
        the problems found (empty for valid records).
    """
    try:
        obj = _require_dict(obj, "record")
        pair_id = _require_str(obj.get("id"), "'id'")
        units = {"candidate": parse_unit(obj.get("candidate"))}
        if obj.get("source") is not None:
            units["source"] = parse_unit(obj["source"])
        references = _require_list(obj.get("references"), "'references'")
        if not references:
            raise ValueError("'references' must contain at least one unit.")
        for i, ref in enumerate(references):
            units[f"reference {i}"] = parse_unit(ref)
        human_score = _parse_score(obj.get("human_score"), score_range)
    except (ValueError, TypeError) as e:
        return None, [str(e)]

    problems = [
        f"{name}: {d.message}"
        for name, unit in units.items()
        for d in validate_annotations(unit)
    ]
    if problems:
        return None, problems

    return (
        UnitPair(
            id=pair_id,
            candidate=units["candidate"],
            references=tuple(units[f"reference {i}"] for i in range(len(references))),
            source=units.get("source"),
            human_score=human_score,
        ),
        [],
    )


def parse_corpus(
    lines: Iterable[str], score_range: tuple[float, float] | None = None
) -> tuple[list[UnitPair], list[Diagnostic]]:
    """
    Parse a JSON Lines corpus.

    Parameters
    ----------
    lines
        Corpus lines. Blank lines are ignored.

    score_range
        Raw human-score scale, passed to :func:`parse_record`.
        Default ``None``.

    Returns
    -------
    tuple[list[UnitPair], list[Diagnostic]]
        Accepted pairs in input order, and line-numbered
        diagnostics for the rejected records.

    Raises
    ------
    IngestError
        If the stream cannot be decoded, or ``score_range``
        is degenerate.
    """
    if score_range is not None and not score_range[1] > score_range[0]:
        raise IngestError(
            f"Human-score range must satisfy lo < hi. Got {score_range!r}."
        )
    pairs, diagnostics = [], []
    seen_ids = set()
    try:
        for line_number, line in enumerate(lines, start=1):
            if not line.strip():
                continue
            try:
                obj = json.loads(line)
            except json.JSONDecodeError as e:
                diagnostics.append(Diagnostic(f"invalid JSON: {e}", line=line_number))
                continue
            pair, problems = parse_record(obj, score_range)
            if pair is not None and pair.id in seen_ids:
                pair, problems = None, [f"duplicate id '{pair.id}'."]
            if pair is None:
                unit_id = obj.get("id") if isinstance(obj, dict) else None
                diagnostics.extend(
                    Diagnostic(p, line=line_number, unit_id=unit_id) for p in problems
                )
                logger.info("Skipped record on line %d: %s", line_number, problems[0])
                continue
            seen_ids.add(pair.id)
            pairs.append(pair)
    except UnicodeDecodeError as e:
        raise IngestError(f"Corpus stream is not valid UTF-8: {e}") from e
    logger.debug("Parsed %d pairs, %d diagnostics.", len(pairs), len(diagnostics))
    return pairs, diagnostics


def read_corpus(
    path: str, score_range: tuple[float, float] | None = None
) -> tuple[list[UnitPair], list[Diagnostic]]:
    """
    Parse a JSON Lines corpus file.

    Parameters
    ----------
    path
        Path to the corpus.

    score_range
        Passed to :func:`parse_corpus`.

    Returns
    -------
    tuple[list[UnitPair], list[Diagnostic]]
        See :func:`parse_corpus`.

    Raises
    ------
    IngestError
        If the file cannot be read.
    """
    try:
        with open(path, encoding="utf-8") as f:
            return parse_corpus(f, score_range)
    except OSError as e:
        raise IngestError(f"Could not read corpus '{path}': {e}") from e


def serialize_unit(unit: AnnotatedUnit) -> dict:
    obj = {"text": unit.raw_text, "tokens": []}
    for token in unit.tokens:
        t = {"t": token.surface}
        if token.lemma is not None:
            t["lemma"] = token.lemma
        if token.word_class is not WordClass.UNKNOWN:
            t["cls"] = str(token.word_class)
        obj["tokens"].append(t)
    if unit.chunks is not None:
        obj["chunks"] = []
        for chunk in unit.chunks:
            c = {"span": list(chunk.span), "head": chunk.head}
            if chunk.function_markers:
                c["func"] = sorted(chunk.function_markers)
            if chunk.is_named_entity:
                c["ne"] = True
            obj["chunks"].append(c)
    if unit.clauses is not None:
        obj["clauses"] = []
        for clause in unit.clauses:
            c = {"chunks": list(clause.chunk_ids)}
            if clause.parent is not None:
                c["parent"] = clause.parent
            if clause.relation_label is not None:
                c["rel"] = clause.relation_label
            obj["clauses"].append(c)
    if unit.discourse is not None:
        d = {
            "relations": [
                {"from": r.from_clause, "to": r.to_clause, "label": r.label}
                for r in unit.discourse.relations
            ]
        }
        if unit.discourse.topic is not None:
            d["topic"] = unit.discourse.topic
        if unit.discourse.focus is not None:
            d["focus"] = unit.discourse.focus
        obj["discourse"] = d
    if unit.entity_sequence is not None:
        obj["entities"] = list(unit.entity_sequence)
    return obj


def serialize_pair(pair: UnitPair) -> dict:
    """
    JSON form of a unit pair, the inverse of :func:`parse_record`
    for pairs whose chunk and clause ids are their positions.

    Tokens are always written explicitly.

    Parameters
    ----------
    pair
        The pair.

    Returns
    -------
    dict
        JSON-serializable record.
    """
    obj = {"id": pair.id}
    if pair.source is not None:
        obj["source"] = serialize_unit(pair.source)
    obj["candidate"] = serialize_unit(pair.candidate)
    obj["references"] = [serialize_unit(r) for r in pair.references]
    if pair.human_score is not None:
        obj["human_score"] = pair.human_score
    return obj


def write_corpus(pairs: Iterable[UnitPair]) -> str:
    """
    Serialize pairs as JSON Lines.

    Parameters
    ----------
    pairs
        Pairs to write.

    Returns
    -------
    str
        One JSON record per line, newline-terminated.
    """
    return "".join(
        json.dumps(serialize_pair(p), ensure_ascii=False) + "\n" for p in pairs
    )


@dataclass(frozen=True)
class Lexicon:
    """
    Word frequencies, terminology, and language-average
    statistics used by the disfluency parameters.

    Frequency keys and terms are case-folded. A token is
    common when its frequency rank (1 for the most frequent,
    ties in alphabetical order) is at most
    ``common_rank_cutoff``; tokens absent from the frequency
    list are uncommon. Terms may span several
    whitespace-separated tokens.
    """

    frequency: dict[str, int]
    ave_sentence_len: float
    ave_chunks_per_sentence: float
    common_rank_cutoff: int = default_common_rank_cutoff
    term_set: frozenset[str] = frozenset()

    def __post_init__(self):
        averages = (self.ave_sentence_len, self.ave_chunks_per_sentence)
        if not all(value > 0 and math.isfinite(value) for value in averages):
            raise IngestError(
                "Language averages must be positive and finite. Got "
                f"ave_sentence_len={self.ave_sentence_len}, "
                f"ave_chunks_per_sentence={self.ave_chunks_per_sentence}."
            )
        if self.common_rank_cutoff <= 0:
            raise IngestError(
                f"common_rank_cutoff must be positive. Got {self.common_rank_cutoff}."
            )
        bad = {w: c for w, c in self.frequency.items() if c < 1}
        if bad:
            raise IngestError(f"Frequency counts must be at least 1. Got {bad}.")

    @cached_property
    def ranks(self) -> dict[str, int]:
        ordered = sorted(self.frequency.items(), key=lambda kv: (-kv[1], kv[0]))
        return {word: rank for rank, (word, _) in enumerate(ordered, start=1)}

    @cached_property
    def _term_lengths(self) -> list[int]:
        return sorted({len(term.split()) for term in self.term_set}, reverse=True)

    def is_common(self, token: str) -> bool:
        rank = self.ranks.get(fold_case(token))
        return rank is not None and rank <= self.common_rank_cutoff

    def is_term(self, token: str) -> bool:
        return fold_case(token) in self.term_set

    def term_token_count(self, surfaces: Sequence[str]) -> int:
        """
        Number of token positions covered by terms, matching
        the longest term first at each position.

        Parameters
        ----------
        surfaces
            Token surfaces of a unit.

        Returns
        -------
        int
            Covered token positions.
        """
        folded = [fold_case(s) for s in surfaces]
        covered, i = 0, 0
        while i < len(folded):
            for length in self._term_lengths:
                if i + length <= len(folded) and " ".join(folded[i : i + length]) in self.term_set:
                    covered += length
                    i += length
                    break
            else:
                i += 1
        return covered


def _read_lines(path: str, what: str) -> list[str]:
    try:
        with open(path, encoding="utf-8") as f:
            return f.read().splitlines()
    except (OSError, UnicodeDecodeError) as e:
        raise IngestError(f"Could not read {what} '{path}': {e}") from e


def load_frequencies(path: str) -> dict[str, int]:
    """
    Read a ``token<TAB>count`` frequency list.

    Parameters
    ----------
    path
        Path to the TSV file.

    Returns
    -------
    dict[str, int]
        Counts keyed by case-folded token; counts of
        tokens that fold together are summed.

    Raises
    ------
    IngestError
        If the file cannot be read or a line is garbled.
    """
    frequency: dict[str, int] = {}
    for line_number, line in enumerate(_read_lines(path, "frequency list"), start=1):
        if not line.strip():
            continue
        fields = line.split("\t")
        try:
            if len(fields) != 2 or not fields[0]:
                raise ValueError("expected 'token<TAB>count'")
            count = int(fields[1])
            if count < 1:
                raise ValueError(f"count must be at least 1, got {count}")
        except ValueError as e:
            raise IngestError(f"{path}, line {line_number}: {e}.") from e
        key = fold_case(fields[0])
        frequency[key] = frequency.get(key, 0) + count
    return frequency


def load_terms(path: str) -> frozenset[str]:
    return frozenset(
        " ".join(fold_case(line).split())
        for line in _read_lines(path, "term list")
        if line.strip()
    )


def load_stats(path: str) -> dict:
    """
    Read language statistics.

    Parameters
    ----------
    path
        Path to a JSON object with ``ave_sentence_len``,
        ``ave_chunks_per_sentence`` and optionally
        ``common_rank_cutoff``.

    Returns
    -------
    dict
        The statistics, with ``common_rank_cutoff`` filled in
        from defaults when absent.

    Raises
    ------
    IngestError
        If the file cannot be read, is not valid JSON,
        or lacks a required value.
    """
    try:
        stats = json.loads("\n".join(_read_lines(path, "language statistics")))
    except json.JSONDecodeError as e:
        raise IngestError(f"Language statistics '{path}' are not valid JSON: {e}") from e
    if not isinstance(stats, dict):
        raise IngestError(f"Language statistics '{path}' must be a JSON object.")
    result = {}
    for key in ("ave_sentence_len", "ave_chunks_per_sentence"):
        value = stats.get(key)
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            raise IngestError(
                f"Language statistics '{path}' need a numeric '{key}'. Got {value!r}."
            )
        result[key] = float(value)
    cutoff = stats.get("common_rank_cutoff", default_common_rank_cutoff)
    if isinstance(cutoff, bool) or not isinstance(cutoff, int):
        raise IngestError(
            f"'common_rank_cutoff' in '{path}' must be an integer. Got {cutoff!r}."
        )
    result["common_rank_cutoff"] = cutoff
    return result


def load_lexicon(frequency_file: str, term_file: str | None, stats_file: str) -> Lexicon:
    """
    Assemble a :class:`Lexicon` from its three files.

    Parameters
    ----------
    frequency_file
        ``token<TAB>count`` lines.

    term_file
        One term per line, or ``None`` for no terms.

    stats_file
        Language statistics JSON (see :func:`load_stats`).

    Returns
    -------
    Lexicon
        The lexicon.

    Raises
    ------
    IngestError
        If any file is missing or garbled, or the averages
        are not positive and finite.
    """
    stats = load_stats(stats_file)
    lexicon = Lexicon(
        frequency=load_frequencies(frequency_file),
        term_set=frozenset() if term_file is None else load_terms(term_file),
        **stats,
    )
    logger.info(
        "Loaded lexicon: %d words, %d terms.", len(lexicon.frequency), len(lexicon.term_set)
    )
    return lexicon


def _as_float(value: any, what: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, Decimal, float)):
        raise ConfigurationError(f"{what} must be a number. Got {value!r}.")
    result = float(value)
    if not math.isfinite(result):
        raise ConfigurationError(f"{what} must be finite. Got {value!r}.")
    return result


def profile_from_dict(data: dict, registry: ParameterRegistry = None) -> WeightProfile:
    """
    Build and validate a :class:`~model.WeightProfile` from
    its JSON form.

    Parameters
    ----------
    data
        Mapping with ``"levels"`` (level id to an object with
        ``"weight"``, ``"alpha"``, ``"beta"`` and optional
        ``"gamma"``, ``"delta"``), and optional ``"name"`` and
        ``"entity_fluency"``.

    registry
        Parameter registry to validate against. If ``None``,
        use :obj:`~model.DEFAULT_REGISTRY`.

    Returns
    -------
    WeightProfile
        The profile.

    Raises
    ------
    ConfigurationError
        If the structure is wrong or validation reports
        any diagnostic.
    """
    if not isinstance(data, dict) or not isinstance(data.get("levels"), dict):
        raise ConfigurationError("A profile must be an object with a 'levels' object.")
    levels = {}
    for level_id, obj in data["levels"].items():
        try:
            level = Level(level_id)
        except ValueError:
            raise ConfigurationError(
                f"Unknown level '{level_id}'. Expected one of {[str(lv) for lv in Level]}."
            ) from None
        if not isinstance(obj, dict):
            raise ConfigurationError(f"Level '{level_id}' must be an object.")
        alpha, beta = obj.get("alpha", {}), obj.get("beta", {})
        if not isinstance(alpha, dict) or not isinstance(beta, dict):
            raise ConfigurationError(f"Level '{level_id}': alpha and beta must be objects.")
        levels[level] = LevelWeights(
            weight=_as_float(obj.get("weight"), f"level '{level_id}': weight"),
            alpha={k: _as_float(v, f"level '{level_id}': alpha.{k}") for k, v in alpha.items()},
            beta={k: _as_float(v, f"level '{level_id}': beta.{k}") for k, v in beta.items()},
            gamma=_as_float(obj.get("gamma", default_gamma), f"level '{level_id}': gamma"),
            delta=_as_float(obj.get("delta", default_delta), f"level '{level_id}': delta"),
        )
    entity_fluency = data.get("entity_fluency", False)
    if not isinstance(entity_fluency, bool):
        raise ConfigurationError(
            f"'entity_fluency' must be a boolean. Got {entity_fluency!r}."
        )
    profile = WeightProfile(
        levels=levels,
        name=str(data.get("name", "custom")),
        entity_fluency=entity_fluency,
    )
    diagnostics = validate_profile(profile, registry or DEFAULT_REGISTRY)
    if diagnostics:
        raise ConfigurationError(
            "Invalid weight profile:\n" + "\n".join(f"  {d}" for d in diagnostics)
        )
    return profile


def load_profile(path: str, registry: ParameterRegistry = None) -> WeightProfile:
    """
    Read a weight profile JSON file. Numbers are parsed as
    exact decimals before conversion and validation.

    Parameters
    ----------
    path
        Path to the profile.

    registry
        Passed to :func:`profile_from_dict`.

    Returns
    -------
    WeightProfile
        The validated profile.

    Raises
    ------
    IngestError
        If the file cannot be read or is not valid JSON.

    ConfigurationError
        If the profile is invalid.
    """
    text = "\n".join(_read_lines(path, "weight profile"))
    try:
        data = json.loads(text, parse_float=Decimal)
    except json.JSONDecodeError as e:
        raise IngestError(f"Weight profile '{path}' is not valid JSON: {e}") from e
    return profile_from_dict(data, registry)


def dump_profile(profile: WeightProfile) -> str:
    return json.dumps(profile.to_dict(), indent=2) + "\n"


def load_synonyms(path: str) -> SynonymTable:
    """
    Read a synonym table: one set per line, members
    tab-separated.

    Parameters
    ----------
    path
        Path to the table.

    Returns
    -------
    SynonymTable
        The table.

    Raises
    ------
    IngestError
        If the file cannot be read.
    """
    sets = []
    for line in _read_lines(path, "synonym table"):
        members = [m.strip() for m in line.split("\t") if m.strip()]
        if members:
            sets.append(members)
    return SynonymTable.from_sets(sets)


def load_language_profile(path: str) -> SuffixStemmer:
    """
    Read stemming rules from a TOML language profile.

    The ``[stemming]`` table holds ``rules``, a list of
    ``[suffix, replacement]`` pairs tried in order, and
    ``min_stem_length`` (default 1).

    Parameters
    ----------
    path
        Path to the TOML file.

    Returns
    -------
    SuffixStemmer
        The stemmer; the identity if no rules are given.

    Raises
    ------
    IngestError
        If the file cannot be read, or the rules are malformed.
    """
    stemming = load_config_file(path).get("stemming", {})
    rules = stemming.get("rules", [])
    min_stem_length = stemming.get("min_stem_length", 1)
    if not isinstance(rules, list) or not all(
        isinstance(r, list) and len(r) == 2 and all(isinstance(x, str) for x in r)
        for r in rules
    ):
        raise IngestError(
            f"Language profile '{path}': 'rules' must be a list of "
            f"[suffix, replacement] string pairs. Got {rules!r}."
        )
    if isinstance(min_stem_length, bool) or not isinstance(min_stem_length, int) or min_stem_length < 0:
        raise IngestError(
            f"Language profile '{path}': 'min_stem_length' must be a "
            f"non-negative integer. Got {min_stem_length!r}."
        )
    return SuffixStemmer(
        rules=tuple((suffix, repl) for suffix, repl in rules),
        min_stem_length=min_stem_length,
    )
