"""Exact password-space counting for grid placement schemes.

The space of valid secrets factors as: choose which k cells are occupied,
then label each occupied cell with one element from the combined pool
(repetition allowed) such that every element set contributes at least once.
The labeling count is an inclusion-exclusion sum over the sets that could be
missing; everything is computed in exact integer arithmetic because realistic
configurations produce counts near 2**120, far beyond any machine word.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations, product
from typing import Mapping, Sequence

# 2**m subsets are enumerated per labeling count; 20 sets is already far past
# any sane deployment.
MAX_SETS = 20

# brute_force_space enumerates (1 + S)**n pairs in the worst case.
_BRUTE_FORCE_MAX_CELLS = 8
_BRUTE_FORCE_MAX_WORK = 20_000_000


@dataclass(frozen=True)
class SpaceConfig:
    """Counting parameters: grid size, set sizes, and the allowed k range."""

    grid_cells: int
    set_sizes: tuple[int, ...]
    k_min: int
    k_max: int

    def __post_init__(self) -> None:
        object.__setattr__(self, "set_sizes", tuple(int(s) for s in self.set_sizes))
        if not self.set_sizes:
            raise ValueError("need at least one element set")
        if len(self.set_sizes) > MAX_SETS:
            raise ValueError(f"at most {MAX_SETS} sets supported")
        if any(s < 1 for s in self.set_sizes):
            raise ValueError("every set size must be >= 1")
        if self.grid_cells < 1:
            raise ValueError("grid must have at least one cell")
        if self.k_min < len(self.set_sizes):
            raise ValueError(
                f"k_min={self.k_min} is below the set count {len(self.set_sizes)}; "
                "no secret that small can cover every set"
            )
        if not (self.k_min <= self.k_max <= self.grid_cells):
            raise ValueError(
                f"need k_min <= k_max <= grid_cells, got "
                f"{self.k_min} <= {self.k_max} <= {self.grid_cells}"
            )

    @property
    def total_elements(self) -> int:
        return sum(self.set_sizes)

    @classmethod
    def from_policy(cls, policy) -> "SpaceConfig":
        return cls(
            grid_cells=policy.grid_cells,
            set_sizes=policy.set_sizes,
            k_min=policy.k_min,
            k_max=policy.k_max,
        )


@dataclass(frozen=True)
class SpaceResult:
    """Exact per-k and total space, plus the (only lossy) entropy in bits."""

    per_k: Mapping[int, int]
    total: int
    entropy_bits: float


def valid_labelings(k: int, set_sizes: Sequence[int]) -> int:
    """Count ways to fill k occupied cells so every set appears at least once.

    Inclusion-exclusion over which sets are absent: sum over subsets J of
    (-1)**|J| * (S - sum of sizes in J)**k. Exact integers throughout.
    Zero whenever k is below the number of sets (coverage is impossible).
    """
    sizes = tuple(int(s) for s in set_sizes)
    if not sizes:
        raise ValueError("need at least one element set")
    if len(sizes) > MAX_SETS:
        raise ValueError(f"at most {MAX_SETS} sets supported")
    if any(s < 1 for s in sizes):
        raise ValueError("every set size must be >= 1")
    if k < 1:
        raise ValueError("k must be >= 1")
    m = len(sizes)
    if k < m:
        return 0
    pool = sum(sizes)
    total = 0
    for j in range(m + 1):
        sign = -1 if j % 2 else 1
        for missing in combinations(sizes, j):
            total += sign * (pool - sum(missing)) ** k
    return total


def arrangements(n: int, k: int, set_sizes: Sequence[int]) -> int:
    """Count valid (cell subset, labeling) pairs for exactly k placements."""
    if k > n:
        raise ValueError(f"cannot place {k} elements on {n} cells")
    return math.comb(n, k) * valid_labelings(k, set_sizes)


def total_space(config: SpaceConfig) -> SpaceResult:
    """Total password space across the permitted k range, with log2 entropy."""
    per_k = {
        k: arrangements(config.grid_cells, k, config.set_sizes)
        for k in range(config.k_min, config.k_max + 1)
    }
    total = sum(per_k.values())
    return SpaceResult(per_k=per_k, total=total, entropy_bits=int_log2(total))


def brute_force_space(config: SpaceConfig) -> int:
    """Verification oracle: enumerate every (cell subset, labeling) pair.

    Walks every subset of cells of every permitted size and every assignment
    of pool elements to those cells, counting the assignments that cover all
    sets. Deliberately naive; inputs are capped so the enumeration stays
    tractable.
    """
    n = config.grid_cells
    pool = config.total_elements
    work = (pool + 1) ** n
    if n > _BRUTE_FORCE_MAX_CELLS or work > _BRUTE_FORCE_MAX_WORK:
        raise ValueError(
            f"refusing brute-force enumeration for n={n}, pool={pool} "
            f"(~{work} pairs); use total_space for large configurations"
        )
    # Element identity only matters through set membership; tag each pool
    # element with its owning set's bit.
    masks = [
        1 << set_index
        for set_index, size in enumerate(config.set_sizes)
        for _ in range(size)
    ]
    full_coverage = (1 << len(config.set_sizes)) - 1
    count = 0
    for k in range(config.k_min, config.k_max + 1):
        for _cells in combinations(range(n), k):
            for labeling in product(masks, repeat=k):
                seen = 0
                for bit in labeling:
                    seen |= bit
                if seen == full_coverage:
                    count += 1
    return count


def int_log2(value: int) -> float:
    """log2 of a positive integer of any magnitude.

    Floats overflow near 2**1024, so large integers are reduced to their top
    64 bits plus the discarded shift. Relative error of 2**result against the
    exact value stays below 1e-9.
    """
    if value <= 0:
        raise ValueError("log2 requires a positive integer")
    shift = max(value.bit_length() - 64, 0)
    return math.log2(value >> shift) + shift
