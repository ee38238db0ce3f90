"""
Terminal-only minors and exact stretch evaluation
=================================================

A solution keeps only the terminals, and is scored by the worst ratio
of minor distance to true distance over all terminal pairs. Ratios are
exact fractions, never floats.
"""

from fractions import Fraction

from spr_lab import (
    assemble_instance,
    brute_force_optimal,
    cage,
    derive_params,
    enumerate_partition_solutions,
    stretch,
    validate_solution,
    voronoi_solution,
    WeightedGraph,
)

params = derive_params(10, mode="custom", M=3, S=2, L=Fraction(5), g=5)
inst = assemble_instance(cage("petersen"), params)

# nearest-attachment clustering, ties broken toward the smaller terminal
sol = voronoi_solution(inst)
print("voronoi clusters:", sol.clusters)
print(validate_solution(sol).render())

report = stretch(sol)
print(report.render())
print("worst ratio as a fraction:", report.max_ratio)

# a six-cycle with three terminals is small enough to brute force:
# every connected partition of the core is enumerated and scored
c6 = WeightedGraph(6, [(0, 1, 1), (1, 2, 1), (2, 3, 1), (3, 4, 1), (4, 5, 1), (0, 5, 1)])
small = assemble_instance(
    c6,
    derive_params(3, mode="custom", M=2, S=2, L=Fraction(1), g=3),
    terminal_vertices=(0, 2, 4),
)
count = sum(1 for _ in enumerate_partition_solutions(small))
best, best_sol = brute_force_optimal(small)
print("connected partitions of the six-cycle instance:", count)
print("optimal ratio:", best, "via clusters", best_sol.clusters)
