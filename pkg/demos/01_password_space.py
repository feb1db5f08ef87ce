"""How big is the space of valid secrets?

A secret occupies k of n grid cells with elements drawn (repetition allowed)
from disjoint sets, every set appearing at least once. This walks the exact
counting machinery from a toy configuration up to the shipped prototype.
"""

from gridpass.counting import (
    SpaceConfig,
    arrangements,
    brute_force_space,
    total_space,
    valid_labelings,
)

print("=== Toy configuration: 4 cells, two singleton sets, k = 2 ===")
print("ways to label 2 chosen cells so both sets appear:", valid_labelings(2, (1, 1)))
print("times C(4,2) cell choices:", arrangements(4, 2, (1, 1)))

toy = SpaceConfig(grid_cells=4, set_sizes=(1, 1), k_min=2, k_max=4)
closed_form = total_space(toy)
enumerated = brute_force_space(toy)
print("closed form total:", closed_form.total)
print("brute-force enumeration agrees:", enumerated == closed_form.total)

print()
print("=== Growing the grid ===")
for cells in (4, 9, 16, 25):
    config = SpaceConfig(cells, (8, 8, 8), 3, min(cells, 8))
    result = total_space(config)
    print(f"  {cells:>2} cells, sets (8,8,8), k up to {config.k_max}: "
          f"{result.entropy_bits:6.2f} bits  (N = {result.total})")

print()
print("=== The shipped prototype: 4x4 grid, sets of 40/90/50, k in [3, 16] ===")
prototype = SpaceConfig(16, (40, 90, 50), 3, 16)
result = total_space(prototype)
for k, count in result.per_k.items():
    print(f"  k={k:>2}: {count}")
print("total password space:", result.total)
print(f"theoretical entropy: {result.entropy_bits:.4f} bits")
print()
print("That ceiling assumes every configuration is equally likely. Real users")
print("cluster heavily; demos/03_study_analytics.py measures that gap.")
