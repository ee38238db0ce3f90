"""
Covering short core paths with solution-induced path families
=============================================================

Every light edge of a solution pulls back to a canonical shortest path
in the host graph. The cover number of a core path p counts how few
family members suffice to cover p's edges, and it obeys an exact
superadditive decomposition law.
"""

import random

from spr_lab import (
    INF,
    build_cover_family,
    cage,
    check_superadditivity,
    count_length_s_paths,
    cov,
    decompose,
    derive_params,
    build_instance,
    estimate_cov_distribution,
    find_high_cov_path,
    make_path,
    sample_nb_path,
    voronoi_solution,
)
from fractions import Fraction

params = derive_params(14, mode="custom", M=1, S=4, L=Fraction(3), g=6)
inst = build_instance(cage("heawood"), params)
sol = voronoi_solution(inst)

# one family member per light solution edge
family = build_cover_family(sol)
print("family size:", len(family))

# cover number of a short core path, with the witness subfamily
p = make_path(inst.core, (0, 1, 2, 3))
result = cov(p, family)
print("cov =", result.value, "reduction =", result.reduction)
print("witness members:", [family.paths[i].vertices for i in result.witness_subfamily])

# slicing p into pieces of scale s obeys an exact law: the whole cover
# number dominates the piece cover numbers, each discounted by one
longer = make_path(inst.core, (0, 1, 2, 3, 4))
pieces = decompose(longer, 2)
law = check_superadditivity(longer, family, 2)
print("pieces:", [piece.vertices for piece in pieces])
print("cov(whole) >= sum(cov(piece) - 1):", law.lhs, ">=", law.rhs, "->", law.holds)

# non-backtracking sampling draws uniformly from the n * 3 * 2^(s-1)
# oriented length-s paths, which stay simple below the girth
print("oriented length-4 paths on this core:", count_length_s_paths(inst.core, 4))
rng = random.Random(0)
for _ in range(3):
    q = sample_nb_path(inst.core, 4, rng.randrange(2**30))
    print("  sampled:", q.vertices)

# seeded Monte Carlo estimates the chance a random short path needs at
# least two members, next to an exact analytic lower bound
est = estimate_cov_distribution(inst, family, 4, trials=2000, seed=5)
print(est.render())

# the certifier's witness search surfaces a worst-covered path
witness, worst = find_high_cov_path(inst, family, m=1)
print("high-cov witness:", witness.vertices, "cov =", "inf" if worst.value == INF else worst.value)
