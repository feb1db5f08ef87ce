"""Metrics over observed secrets and login attempts.

Everything here is a pure computation over immutable snapshots: secret
diversity (empirical Shannon entropy against its sample-based ceiling),
guessing cost (expected guesswork and alpha-work factors under a
most-common-first strategy), success rates, and element choice statistics.

Ranking for the guessing metrics is deterministic: descending count, ties
broken by ascending canonical bytes, so input order can never change a
result.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from itertools import combinations
from typing import Iterable, Literal, Mapping, Sequence

from .model import SecretConfiguration


class EmptyDistributionError(ValueError):
    """Metrics over zero observed secrets are undefined."""


class Stage(str, Enum):
    """Which scheduled login session an attempt belongs to."""

    LOGIN_1 = "login1"
    LOGIN_10 = "login10"
    LOGIN_28 = "login28"
    OTHER = "other"


@dataclass(frozen=True)
class AttemptRecord:
    username: str
    timestamp: float
    stage: Stage
    success: bool
    duration_seconds: float

    def __post_init__(self) -> None:
        if not math.isfinite(self.duration_seconds) or self.duration_seconds < 0:
            raise ValueError("duration_seconds must be finite and non-negative")


class SecretDistribution:
    """Multiset of observed canonical secrets with their occurrence counts."""

    def __init__(self, counts: Mapping[bytes, int]):
        if not counts:
            raise EmptyDistributionError("distribution needs at least one secret")
        clean: dict[bytes, int] = {}
        for key, count in counts.items():
            if not isinstance(key, bytes):
                raise TypeError("secrets must be canonical byte strings")
            if int(count) < 1:
                raise ValueError("every count must be >= 1")
            clean[key] = int(count)
        self._counts = clean
        self.total = sum(clean.values())

    @classmethod
    def from_observations(cls, canonicals: Iterable[bytes]) -> "SecretDistribution":
        return cls(Counter(canonicals))

    @property
    def counts(self) -> dict[bytes, int]:
        return dict(self._counts)

    @property
    def distinct(self) -> int:
        return len(self._counts)

    def ranked(self) -> list[tuple[bytes, int]]:
        """Secrets in guessing order: count descending, canonical bytes ascending."""
        return sorted(self._counts.items(), key=lambda item: (-item[1], item[0]))


def empirical_entropy(dist: SecretDistribution) -> float:
    """Shannon entropy in bits of the observed secret frequencies."""
    n = dist.total
    return -sum((c / n) * math.log2(c / n) for c in dist._counts.values())


def entropy_upper_bound(dist: SecretDistribution) -> float:
    """Sample-based ceiling on the empirical entropy: log2 of the sample size."""
    return math.log2(dist.total)


def expected_guesswork(dist: SecretDistribution) -> Fraction:
    """Average number of guesses under a most-common-first strategy, exact.

    Rank the distinct secrets, then sum rank * probability. Returned as a
    Fraction so reported values are bit-exact; take float() for display.
    """
    n = dist.total
    return sum(
        (Fraction(rank * count, n) for rank, (_, count) in enumerate(dist.ranked(), start=1)),
        start=Fraction(0),
    )


def work_factor(dist: SecretDistribution, alpha: float) -> int:
    """Fewest top-ranked guesses covering at least an alpha fraction of accounts."""
    alpha_exact = Fraction(alpha)
    if not 0 < alpha_exact <= 1:
        raise ValueError(f"alpha must be in (0, 1], got {alpha!r}")
    threshold = alpha_exact * dist.total
    covered = 0
    for rank, (_, count) in enumerate(dist.ranked(), start=1):
        covered += count
        if covered >= threshold:
            return rank
    # Unreachable: covered reaches total >= threshold by the last rank.
    raise AssertionError("cumulative coverage never reached alpha")


def success_rate(
    attempts: Sequence[AttemptRecord],
    grouping: Literal["user", "stage"],
) -> dict[str, float]:
    """Successful / total attempts per group; groups without attempts are absent."""
    if grouping not in ("user", "stage"):
        raise ValueError(f"grouping must be 'user' or 'stage', got {grouping!r}")
    totals: Counter[str] = Counter()
    successes: Counter[str] = Counter()
    for attempt in attempts:
        key = attempt.username if grouping == "user" else attempt.stage.value
        totals[key] += 1
        if attempt.success:
            successes[key] += 1
    return {key: successes[key] / totals[key] for key in totals}


def element_frequencies(
    secrets: Iterable[SecretConfiguration],
) -> Counter[tuple[str, str]]:
    """Occurrences of each (set_id, element_id) across all placements.

    An element placed on two cells of one secret counts twice.
    """
    counts: Counter[tuple[str, str]] = Counter()
    for secret in secrets:
        for placement in secret.placements:
            counts[(placement.set_id, placement.element_id)] += 1
    return counts


def co_occurrences(
    secrets: Iterable[SecretConfiguration],
    per_user: bool = True,
) -> Counter[tuple[str, str, str]]:
    """Counts of unordered same-set element pairs appearing together in a secret.

    Keys are (set_id, element_a, element_b) with the pair sorted. With
    ``per_user`` each secret contributes at most 1 per pair (the unique-user
    convention); otherwise every placement pair counts, so repetition of an
    element amplifies its pairs.
    """
    counts: Counter[tuple[str, str, str]] = Counter()
    for secret in secrets:
        if per_user:
            by_set: dict[str, set[str]] = {}
            for placement in secret.placements:
                by_set.setdefault(placement.set_id, set()).add(placement.element_id)
            for set_id, element_ids in by_set.items():
                for a, b in combinations(sorted(element_ids), 2):
                    counts[(set_id, a, b)] += 1
        else:
            placements = sorted(secret.placements)
            for first, second in combinations(placements, 2):
                if first.set_id == second.set_id and first.element_id != second.element_id:
                    a, b = sorted((first.element_id, second.element_id))
                    counts[(first.set_id, a, b)] += 1
    return counts
