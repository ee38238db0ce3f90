"""Built-in catalog of smallest 3-regular graphs of a given girth.

Five classics, shipped as explicit constructions so generation never
depends on a solver: the Petersen graph (10 vertices, girth 5), the
Heawood graph (14, 6), the McGee graph (24, 7), the Tutte-Coxeter graph
(30, 8) and the Balaban 10-cage (70, 10). All are unit-weight.

Apart from Petersen (which has no Hamiltonian cycle) the entries are
stored in LCF form: vertices on a cycle, plus one chord per vertex given
by a cyclic offset table. Building validates 3-regularity, so a corrupt
offset table cannot produce a silently wrong graph.
"""

from __future__ import annotations

from .graphs import WeightedGraph

_PETERSEN_EDGES = [
    (0, 1), (1, 2), (2, 3), (3, 4), (0, 4),   # outer 5-cycle
    (5, 7), (7, 9), (6, 9), (6, 8), (5, 8),   # inner pentagram
    (0, 5), (1, 6), (2, 7), (3, 8), (4, 9),   # spokes
]

_LCF = {
    "heawood": (14, [5, -5], 7),
    "mcgee": (24, [12, 7, -7], 8),
    "tutte_coxeter": (30, [-13, -9, 7, -7, 9, 13], 5),
    "balaban10": (70, [
        -9, -25, -19, 29, 13, 35, -13, -29, 19, 25,
        9, -29, 29, 17, 33, 21, 9, -13, -31, -9,
        25, 17, 9, -31, 27, -9, 17, -19, -29, 27,
        -17, -9, -29, 33, -25, 25, -21, 17, -17, 29,
        35, -29, 17, -17, 21, -25, 25, -33, 29, 9,
        17, -27, 29, 19, -17, 9, -27, 31, -9, -17,
        -25, 9, 31, 13, -9, -21, -33, -17, -29, 29,
    ], 1),
}

# name -> (vertex count, girth)
CATALOG: dict[str, tuple[int, int]] = {
    "petersen": (10, 5),
    "heawood": (14, 6),
    "mcgee": (24, 7),
    "tutte_coxeter": (30, 8),
    "balaban10": (70, 10),
}


def _from_lcf(n: int, offsets: list[int], repeats: int) -> WeightedGraph:
    if len(offsets) * repeats != n:
        raise ValueError("offset table does not tile the cycle")
    pairs = set()
    for i in range(n):
        pairs.add((i, (i + 1) % n) if i + 1 < n else (0, n - 1))
    for i in range(n):
        j = (i + offsets[i % len(offsets)]) % n
        pairs.add((i, j) if i < j else (j, i))
    g = WeightedGraph(n, [(u, v, 1) for u, v in sorted(pairs)])
    bad = [v for v in range(n) if g.degree(v) != 3]
    if bad:
        raise ValueError(f"inconsistent chord table: vertices {bad} not 3-regular")
    return g


def cage(name: str) -> WeightedGraph:
    """Build a catalog entry by name."""
    if name == "petersen":
        return WeightedGraph(10, [(u, v, 1) for u, v in _PETERSEN_EDGES])
    if name in _LCF:
        return _from_lcf(*_LCF[name])
    raise ValueError(f"unknown catalog graph {name!r}; have {sorted(CATALOG)}")


def cage_for(n: int, girth_target: int) -> WeightedGraph:
    """Exact (vertex count, girth) lookup into the catalog."""
    for name, (cn, cg) in CATALOG.items():
        if (cn, cg) == (n, girth_target):
            return cage(name)
    raise ValueError(f"no catalog entry with n={n}, girth={girth_target}")
