"""Domain model: element sets, placement policies, secrets, and their canonical encoding.

A secret is the final configuration of elements placed on a grid. Placement
order is never part of the secret, so two entry orders that produce the same
configuration are the same secret. The canonical byte encoding makes that
explicit: it is a pure function of the placement *set*.
"""

from __future__ import annotations

import json
import math
import re
from dataclasses import dataclass, field, replace
from functools import cached_property
from pathlib import Path
from typing import Any, Iterable, Mapping

# Identifiers end up inside the canonical encoding, so the alphabet is locked
# down to keep that format unambiguous (":" and ";" are the separators).
_IDENTIFIER_RE = re.compile(r"^[a-z0-9_-]+$")


class PolicyError(ValueError):
    """A policy document violates its own invariants."""


class SecretEncodingError(ValueError):
    """A secret cannot be canonically encoded (or decoded)."""


def _check_identifier(value: str, what: str) -> None:
    if not isinstance(value, str) or not _IDENTIFIER_RE.match(value):
        raise PolicyError(
            f"{what} {value!r} must be a non-empty string over [a-z0-9_-]"
        )


@dataclass(frozen=True)
class Element:
    """One selectable visual element, owned by exactly one set."""

    element_id: str
    set_id: str
    label: str
    render_hint: str = ""

    def __post_init__(self) -> None:
        _check_identifier(self.element_id, "element_id")
        _check_identifier(self.set_id, "set_id")


@dataclass(frozen=True)
class ElementSet:
    """A disjoint pool of elements (e.g. colors, icons, shapes)."""

    set_id: str
    name: str
    elements: tuple[Element, ...]

    def __post_init__(self) -> None:
        _check_identifier(self.set_id, "set_id")
        if not self.elements:
            raise PolicyError(f"set {self.set_id!r} must contain at least one element")
        seen: set[str] = set()
        for element in self.elements:
            if element.set_id != self.set_id:
                raise PolicyError(
                    f"element {element.element_id!r} claims set {element.set_id!r} "
                    f"but lives in set {self.set_id!r}"
                )
            if element.element_id in seen:
                raise PolicyError(
                    f"duplicate element_id {element.element_id!r} in set {self.set_id!r}"
                )
            seen.add(element.element_id)

    @property
    def size(self) -> int:
        return len(self.elements)

    @property
    def element_ids(self) -> tuple[str, ...]:
        return tuple(element.element_id for element in self.elements)


@dataclass(frozen=True)
class PolicyConfig:
    """Deployment policy: grid shape, element sets, and selection bounds.

    One policy governs a whole service instance; both the UI and server-side
    validation read the same object.
    """

    rows: int
    cols: int
    sets: tuple[ElementSet, ...]
    k_min: int
    k_max: int
    hash_params: Mapping[str, Any] = field(default_factory=dict)
    study_mode: bool = False

    def __post_init__(self) -> None:
        if self.rows < 1 or self.cols < 1:
            raise PolicyError("grid must have at least one row and one column")
        if not self.sets:
            raise PolicyError("policy needs at least one element set")
        set_ids = [s.set_id for s in self.sets]
        if len(set(set_ids)) != len(set_ids):
            raise PolicyError("set_ids must be unique")
        m = len(self.sets)
        if self.k_min < m:
            raise PolicyError(
                f"k_min={self.k_min} cannot be below the number of sets ({m}); "
                "every set must appear at least once"
            )
        if not (self.k_min <= self.k_max <= self.grid_cells):
            raise PolicyError(
                f"need k_min <= k_max <= grid_cells, got "
                f"{self.k_min} <= {self.k_max} <= {self.grid_cells}"
            )
        object.__setattr__(self, "hash_params", dict(self.hash_params))

    @property
    def grid_cells(self) -> int:
        return self.rows * self.cols

    @property
    def total_elements(self) -> int:
        return sum(s.size for s in self.sets)

    @property
    def set_sizes(self) -> tuple[int, ...]:
        return tuple(s.size for s in self.sets)

    @cached_property
    def _element_index(self) -> dict[tuple[str, str], Element]:
        return {
            (s.set_id, e.element_id): e for s in self.sets for e in s.elements
        }

    def find_element(self, set_id: str, element_id: str) -> Element | None:
        return self._element_index.get((set_id, element_id))

    def with_study_mode(self, study_mode: bool) -> "PolicyConfig":
        return replace(self, study_mode=study_mode)


@dataclass(frozen=True, order=True)
class Placement:
    """One element occupying one grid cell (cells indexed row-major from 0)."""

    cell: int
    set_id: str
    element_id: str


@dataclass(frozen=True, init=False)
class SecretConfiguration:
    """A user's secret: an unordered set of placements."""

    placements: frozenset[Placement]

    def __init__(self, placements: Iterable[Placement]):
        object.__setattr__(self, "placements", frozenset(placements))

    @property
    def k(self) -> int:
        return len(self.placements)

    def cells(self) -> frozenset[int]:
        return frozenset(p.cell for p in self.placements)


@dataclass(frozen=True)
class Violation:
    """One broken validation rule, machine-readable."""

    code: str
    message: str


@dataclass(frozen=True)
class ValidationResult:
    violations: tuple[Violation, ...]

    @property
    def ok(self) -> bool:
        return not self.violations

    def codes(self) -> tuple[str, ...]:
        return tuple(v.code for v in self.violations)


DUPLICATE_CELL = "duplicate_cell"
CELL_OUT_OF_RANGE = "cell_out_of_range"
UNKNOWN_ELEMENT = "unknown_element"
K_BELOW_MIN = "k_below_min"
K_ABOVE_MAX = "k_above_max"
MISSING_SET_COVERAGE = "missing_set_coverage"


def validate_secret(secret: SecretConfiguration, policy: PolicyConfig) -> ValidationResult:
    """Check every secret invariant under the policy, reporting all failures.

    Returns every violated rule, not just the first, so a client can surface
    complete feedback in one round trip.
    """
    violations: list[Violation] = []
    k = secret.k

    if k < policy.k_min:
        violations.append(
            Violation(K_BELOW_MIN, f"{k} placements is below the minimum of {policy.k_min}")
        )
    if k > policy.k_max:
        violations.append(
            Violation(K_ABOVE_MAX, f"{k} placements exceeds the maximum of {policy.k_max}")
        )

    cell_counts: dict[int, int] = {}
    for p in secret.placements:
        cell_counts[p.cell] = cell_counts.get(p.cell, 0) + 1
    for cell in sorted(c for c, count in cell_counts.items() if count > 1):
        violations.append(Violation(DUPLICATE_CELL, f"cell {cell} is occupied more than once"))

    for p in sorted(secret.placements):
        if not (0 <= p.cell < policy.grid_cells):
            violations.append(
                Violation(
                    CELL_OUT_OF_RANGE,
                    f"cell {p.cell} is outside the {policy.grid_cells}-cell grid",
                )
            )
        if policy.find_element(p.set_id, p.element_id) is None:
            violations.append(
                Violation(
                    UNKNOWN_ELEMENT,
                    f"element {p.set_id}:{p.element_id} is not in the policy",
                )
            )

    covered = {p.set_id for p in secret.placements}
    for element_set in policy.sets:
        if element_set.set_id not in covered:
            violations.append(
                Violation(
                    MISSING_SET_COVERAGE,
                    f"no element chosen from set {element_set.set_id!r}",
                )
            )

    return ValidationResult(tuple(violations))


def canonicalize(secret: SecretConfiguration) -> bytes:
    """Deterministic byte encoding of a secret.

    Placements sorted by cell, rendered ``<cell>:<set_id>:<element_id>`` and
    joined with ``;``. Two secrets encode identically iff they contain the
    same placement set; input order never matters.

    The caller must have validated the secret against its policy first; only
    the structural requirements (non-empty, distinct cells, clean identifiers)
    are re-checked here.
    """
    if not secret.placements:
        raise SecretEncodingError("cannot encode an empty secret")
    ordered = sorted(secret.placements)
    cells = [p.cell for p in ordered]
    if len(set(cells)) != len(cells):
        raise SecretEncodingError("cannot encode a secret with duplicate cells")
    for p in ordered:
        for ident in (p.set_id, p.element_id):
            if ":" in ident or ";" in ident:
                raise SecretEncodingError(f"identifier {ident!r} contains a separator")
        if p.cell < 0:
            raise SecretEncodingError(f"negative cell index {p.cell}")
    return ";".join(f"{p.cell}:{p.set_id}:{p.element_id}" for p in ordered).encode("utf-8")


def parse_canonical(data: bytes | str) -> SecretConfiguration:
    """Inverse of :func:`canonicalize` (used when replaying study-mode logs)."""
    text = data.decode("utf-8") if isinstance(data, bytes) else data
    if not text:
        raise SecretEncodingError("empty canonical encoding")
    placements = []
    for record in text.split(";"):
        parts = record.split(":")
        if len(parts) != 3:
            raise SecretEncodingError(f"malformed placement record {record!r}")
        cell_text, set_id, element_id = parts
        if not cell_text.isdigit() or (cell_text != "0" and cell_text.startswith("0")):
            raise SecretEncodingError(f"malformed cell index {cell_text!r}")
        placements.append(Placement(int(cell_text), set_id, element_id))
    secret = SecretConfiguration(placements)
    if len(placements) != len(secret.placements) or len({p.cell for p in placements}) != len(placements):
        raise SecretEncodingError("canonical encoding contains duplicate placements")
    return secret


def policy_from_dict(doc: Mapping[str, Any]) -> PolicyConfig:
    """Build a policy from its JSON document form.

    The document carries ``grid_cells`` plus explicit ``rows``/``cols``; a
    square grid may omit the explicit dimensions.
    """
    try:
        sets = tuple(
            ElementSet(
                set_id=s["set_id"],
                name=s.get("name", s["set_id"]),
                elements=tuple(
                    Element(
                        element_id=e["element_id"],
                        set_id=s["set_id"],
                        label=e.get("label", e["element_id"]),
                        render_hint=e.get("render_hint", ""),
                    )
                    for e in s["elements"]
                ),
            )
            for s in doc["sets"]
        )
        grid_cells = doc.get("grid_cells")
        rows = doc.get("rows")
        cols = doc.get("cols")
        if rows is None or cols is None:
            if grid_cells is None:
                raise PolicyError("policy needs grid_cells or explicit rows/cols")
            side = math.isqrt(int(grid_cells))
            if side * side != int(grid_cells):
                raise PolicyError(
                    f"grid_cells={grid_cells} is not square; give rows and cols explicitly"
                )
            rows = cols = side
        if grid_cells is not None and int(rows) * int(cols) != int(grid_cells):
            raise PolicyError(
                f"rows*cols = {int(rows) * int(cols)} contradicts grid_cells = {grid_cells}"
            )
        return PolicyConfig(
            rows=int(rows),
            cols=int(cols),
            sets=sets,
            k_min=int(doc["k_min"]),
            k_max=int(doc["k_max"]),
            hash_params=dict(doc.get("hash_params", {})),
            study_mode=bool(doc.get("study_mode", False)),
        )
    except KeyError as exc:
        raise PolicyError(f"policy document is missing field {exc.args[0]!r}") from exc


def policy_to_dict(policy: PolicyConfig) -> dict[str, Any]:
    return {
        "grid_cells": policy.grid_cells,
        "rows": policy.rows,
        "cols": policy.cols,
        "k_min": policy.k_min,
        "k_max": policy.k_max,
        "study_mode": policy.study_mode,
        "hash_params": dict(policy.hash_params),
        "sets": [
            {
                "set_id": s.set_id,
                "name": s.name,
                "elements": [
                    {
                        "element_id": e.element_id,
                        "label": e.label,
                        "render_hint": e.render_hint,
                    }
                    for e in s.elements
                ],
            }
            for s in policy.sets
        ],
    }


def load_policy(path: str | Path) -> PolicyConfig:
    """Load a policy JSON file."""
    with open(path, "r", encoding="utf-8") as fh:
        return policy_from_dict(json.load(fh))


def save_policy(policy: PolicyConfig, path: str | Path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(policy_to_dict(policy), fh, indent=2, sort_keys=False)
        fh.write("\n")
