"""
Validation of weight profiles and annotation layers.

Individual checks return ``(ok, message)`` pairs; the
public validators collect failed checks into lists of
:class:`~model.Diagnostic`.
"""

import math
from collections.abc import Mapping

from cogease.defaults import simplex_tolerance
from cogease.model import (
    DEFAULT_REGISTRY,
    AnnotatedUnit,
    Diagnostic,
    ParameterKind,
    ParameterRegistry,
    WeightProfile,
)


def is_on_simplex(
    weights: Mapping[str, float], label: str, tolerance: float = simplex_tolerance
) -> tuple[bool, str]:
    """
    Check that weights are finite, non-negative and sum to 1.

    Parameters
    ----------
    weights
        Weights keyed by name.

    label
        Description of the weights for the failure message,
        e.g. ``"level 'word': alpha"``.

    tolerance
        Allowed absolute deviation of the sum from 1.
        Default ``1e-9``.

    Returns
    -------
    tuple[bool, str]
        First entry: ``True`` if validation passes, else ``False``.
        Second entry: ``None`` if validation passes, else
        a string indicating what failed validation.
    """
    non_finite = [name for name, w in weights.items() if not math.isfinite(w)]
    if non_finite:
        return (False, f"{label} has non-finite weights for {non_finite}.")
    negative = [name for name, w in weights.items() if w < 0]
    if negative:
        return (False, f"{label} has negative weights for {negative}.")
    total = math.fsum(weights.values())
    if not abs(total - 1) <= tolerance:
        return (False, f"{label} sum {total:.10g} ≠ 1.")
    return (True, None)


def is_valid_gamma(gamma: float, label: str) -> tuple[bool, str]:
    """
    Check that a penalty scale lies in [0, 1].

    Parameters
    ----------
    gamma
        The value to check.

    label
        Description for the failure message.

    Returns
    -------
    tuple[bool, str]
        ``(True, None)`` on success, else ``False`` and a message.
    """
    if not 0 <= gamma <= 1:
        return (False, f"{label}: gamma must lie in [0, 1]. Got {gamma}.")
    return (True, None)


def is_valid_delta(delta: float, label: str) -> tuple[bool, str]:
    """
    Check that a penalty exponent is positive.

    Parameters
    ----------
    delta
        The value to check.

    label
        Description for the failure message.

    Returns
    -------
    tuple[bool, str]
        ``(True, None)`` on success, else ``False`` and a message.
    """
    if not (delta > 0 and math.isfinite(delta)):
        return (False, f"{label}: delta must be positive and finite. Got {delta}.")
    return (True, None)


def validate_profile(
    profile: WeightProfile, registry: ParameterRegistry = None
) -> list[Diagnostic]:
    """
    Check a weight profile against the simplex constraints
    and the parameter registry.

    Parameters
    ----------
    profile
        The profile to check.

    registry
        Registry of admissible parameter names. If ``None``,
        use :obj:`~model.DEFAULT_REGISTRY`.

    Returns
    -------
    list[Diagnostic]
        One diagnostic per violation; empty if the profile is valid.
    """
    registry = registry or DEFAULT_REGISTRY
    checks = []

    if not profile.levels:
        checks.append((False, "profile defines no levels."))
    else:
        checks.append(
            is_on_simplex(
                {str(level): lw.weight for level, lw in profile.levels.items()},
                "level weights",
            )
        )

    for level, lw in profile.levels.items():
        label = f"level '{level}'"
        if level not in registry.levels:
            checks.append((False, f"{label} is not a registered level."))
            continue
        checks.append(is_valid_gamma(lw.gamma, label))
        checks.append(is_valid_delta(lw.delta, label))
        for kind, name, weights in (
            (ParameterKind.ADEQUACY, "alpha", lw.alpha),
            (ParameterKind.DISFLUENCY, "beta", lw.beta),
        ):
            known = registry.names(level, kind)
            for param in weights:
                if param not in known:
                    checks.append(
                        (
                            False,
                            f"{label}: unknown {kind} parameter '{param}' in {name}. "
                            f"Registered names: {list(known)}.",
                        )
                    )
            if weights:
                checks.append(is_on_simplex(weights, f"{label}: {name}"))
            elif kind is ParameterKind.ADEQUACY and known:
                checks.append((False, f"{label}: alpha is empty, so A is always 0."))

    return [Diagnostic(message) for ok, message in checks if not ok]


def _token_checks(unit: AnnotatedUnit) -> list[tuple[bool, str]]:
    checks = []
    for position, token in enumerate(unit.tokens):
        if not token.surface:
            checks.append((False, f"token {position} has an empty surface."))
        if token.index != position:
            checks.append(
                (
                    False,
                    f"token indices must be 0-based and contiguous: "
                    f"token at position {position} has index {token.index}.",
                )
            )
    return checks


def _chunk_checks(unit: AnnotatedUnit) -> list[tuple[bool, str]]:
    checks = []
    n_tokens = len(unit.tokens)
    seen_ids = set()
    in_bounds = []
    for chunk in unit.chunks:
        start, end = chunk.span
        if chunk.id in seen_ids:
            checks.append((False, f"duplicate chunk id {chunk.id}."))
        seen_ids.add(chunk.id)
        if not 0 <= start < end <= n_tokens:
            checks.append(
                (
                    False,
                    f"chunk span out of bounds: chunk {chunk.id} spans "
                    f"[{start}, {end}) in a unit of {n_tokens} tokens.",
                )
            )
            continue
        in_bounds.append(chunk)
        if chunk.head not in chunk:
            checks.append(
                (False, f"chunk {chunk.id}: head {chunk.head} outside span [{start}, {end}).")
            )
        outside = sorted(i for i in chunk.function_markers if i not in chunk)
        if outside:
            checks.append(
                (False, f"chunk {chunk.id}: function markers {outside} outside its span.")
            )
    ordered = sorted(in_bounds, key=lambda c: c.span)
    for left, right in zip(ordered, ordered[1:]):
        if right.start < left.end:
            checks.append((False, f"chunks {left.id} and {right.id} overlap."))
    return checks


def _clause_checks(unit: AnnotatedUnit) -> list[tuple[bool, str]]:
    checks = []
    chunk_ids = {c.id for c in unit.chunks or ()}
    clause_ids = {c.id for c in unit.clauses}
    if len(clause_ids) != len(unit.clauses):
        checks.append((False, "duplicate clause ids."))
    owner = {}
    for clause in unit.clauses:
        if not clause.chunk_ids:
            checks.append((False, f"clause {clause.id} contains no chunks."))
        for cid in clause.chunk_ids:
            if cid not in chunk_ids:
                checks.append(
                    (
                        False,
                        f"clause {clause.id} references chunk id {cid}, but the unit "
                        f"has {len(chunk_ids)} chunks.",
                    )
                )
            elif cid in owner:
                checks.append(
                    (
                        False,
                        f"chunk {cid} belongs to clauses {owner[cid]} and {clause.id}.",
                    )
                )
            else:
                owner[cid] = clause.id
        if clause.parent is not None and clause.parent not in clause_ids:
            checks.append(
                (False, f"clause {clause.id} has unknown parent clause {clause.parent}.")
            )

    parent_of = {c.id: c.parent for c in unit.clauses if c.parent in clause_ids}
    for start in parent_of:
        visited = {start}
        current = parent_of.get(start)
        while current is not None:
            if current in visited:
                checks.append((False, f"clause parent links form a cycle through {start}."))
                break
            visited.add(current)
            current = parent_of.get(current)
    return checks


def _discourse_checks(unit: AnnotatedUnit) -> list[tuple[bool, str]]:
    checks = []
    clause_ids = {c.id for c in unit.clauses or ()}
    for relation in unit.discourse.relations:
        for endpoint in (relation.from_clause, relation.to_clause):
            if endpoint not in clause_ids:
                checks.append(
                    (
                        False,
                        f"discourse relation '{relation.label}' references clause "
                        f"{endpoint}, which does not exist.",
                    )
                )
    return checks


def validate_annotations(unit: AnnotatedUnit) -> list[Diagnostic]:
    """
    Check every present annotation layer of a unit against
    its invariants.

    Parameters
    ----------
    unit
        The unit to check.

    Returns
    -------
    list[Diagnostic]
        One diagnostic per violation; empty if all present
        layers are consistent.
    """
    checks = _token_checks(unit)
    if unit.chunks is not None:
        checks += _chunk_checks(unit)
    if unit.clauses is not None:
        checks += _clause_checks(unit)
    if unit.discourse is not None:
        checks += _discourse_checks(unit)
    if unit.entity_sequence is not None:
        for position, entity in enumerate(unit.entity_sequence):
            if not isinstance(entity, str) or not entity:
                checks.append((False, f"entity {position} is not a non-empty string."))
    return [Diagnostic(message) for ok, message in checks if not ok]
