"""Terminal sparsifiers: validation, exact stretch, canonical images, solvers.

A solution is a weighted graph ``h`` on the terminal index set of an
instance. Vertex i of h is terminal i. Two hypotheses make a solution
admissible: every h-edge weighs at least the true terminal distance it
shortcuts, and h spends no more edges than the full graph has. Stretch
is measured exactly, as a rational, over all terminal pairs.

Two solvers ship: a contraction heuristic that grows shortest-path
territories around the attachment vertices, and an exhaustive optimum
over all connected partitions for small sub-terminal instances.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path as FilePath

from .graphs import (
    INF,
    DisconnectedError,
    Path,
    WeightedGraph,
    concat,
    distances_from,
    dump_json,
    shortest_path,
)
from .instances import (
    CheckResult,
    Instance,
    ValidationReport,
    instance_from_dict,
    instance_to_dict,
    load_instance,
)


class SizeLimitError(Exception):
    """The exhaustive solver was asked to enumerate more than its budget."""


@dataclass(frozen=True)
class SprSolution:
    """A candidate sparsifier for ``host``, with optional partition provenance.

    ``clusters`` is set when h arose by contracting a connected partition
    of the core: cluster i is the set of core vertices merged into
    terminal i.
    """

    host: Instance
    h: WeightedGraph
    provenance: str = "explicit"  # 'explicit' | 'partition'
    clusters: tuple[tuple[int, ...], ...] | None = None


def validate_solution(sol: SprSolution) -> ValidationReport:
    """Check the two admissibility hypotheses plus partition sanity."""
    inst = sol.host
    checks = []

    def add(name, passed, detail=""):
        checks.append(CheckResult(name, bool(passed), detail))

    add(
        "terminal-vertex-set",
        sol.h.n == inst.k,
        f"h has {sol.h.n} vertices for {inst.k} terminals",
    )
    bad = None
    if sol.h.n == inst.k:
        for i, j, w in sol.h.edges:
            need = inst.pair_distance(i, j)
            if w < need:
                bad = f"edge ({i},{j}) weight {w} below true distance {need}"
                break
    add("edge-weights-dominate", bad is None, bad or "")
    add(
        "edge-budget",
        sol.h.edge_count <= inst.full.edge_count,
        f"{sol.h.edge_count} h-edges vs {inst.full.edge_count} available",
    )
    if sol.provenance == "partition":
        cl = sol.clusters or ()
        flat = [v for c in cl for v in c]
        add(
            "clusters-partition-core",
            sorted(flat) == list(range(inst.n_core)),
            "clusters must partition the core vertex set",
        )
        add(
            "clusters-one-attachment",
            len(cl) == inst.k
            and all(
                sum(1 for v in c if inst.terminal_index_of(v) is not None) == 1 for c in cl
            ),
            "each cluster must hold exactly one attachment vertex",
        )
        add(
            "clusters-connected",
            all(_connected_in(inst.core, set(c)) for c in cl),
            "each cluster must induce a connected core subgraph",
        )
    return ValidationReport(tuple(checks))


def _connected_in(g: WeightedGraph, members: set[int]) -> bool:
    if not members:
        return False
    start = next(iter(members))
    seen = {start}
    stack = [start]
    while stack:
        x = stack.pop()
        for y in g.neighbors(x):
            if y in members and y not in seen:
                seen.add(y)
                stack.append(y)
    return seen == members


# -- stretch ------------------------------------------------------------------


@dataclass(frozen=True)
class PairStretch:
    pair: tuple[int, int]
    dist_g: int
    dist_h: int | float
    ratio: Fraction | float


@dataclass(frozen=True)
class StretchReport:
    """Exact per-pair distortion table plus the worst pair.

    Ratios are exact rationals (or INF for disconnected h); rendering
    shows 6-digit decimals. ``witness`` is the lexicographically first
    pair attaining ``max_ratio``.
    """

    per_pair: tuple[PairStretch, ...]
    max_ratio: Fraction | float
    witness: tuple[int, int]

    def render(self, limit: int | None = 10) -> str:
        rows = self.per_pair if limit is None else self.per_pair[:limit]
        lines = [f"worst pair {self.witness}: ratio {format_ratio(self.max_ratio)}"]
        for r in rows:
            lines.append(
                f"  ({r.pair[0]:>3},{r.pair[1]:>3})  distG={r.dist_g:<6} "
                f"distH={r.dist_h!s:<8} ratio={format_ratio(r.ratio)}"
            )
        if limit is not None and len(self.per_pair) > limit:
            lines.append(f"  ... {len(self.per_pair) - limit} more pairs")
        return "\n".join(lines)


def format_ratio(r) -> str:
    if r == INF:
        return "inf"
    return f"{float(r):.6f}"


def stretch(sol: SprSolution, threads: int = 1) -> StretchReport:
    """Exact all-pairs stretch of a solution.

    Parallelizes the per-source distance sweeps over a thread pool when
    ``threads`` > 1; results are identical regardless of worker count.
    """
    inst = sol.host
    k = inst.k
    if sol.h.n != k:
        raise ValueError("h does not match the instance's terminal count")

    def h_row(i: int) -> list[int | float]:
        return distances_from(sol.h, i)

    if threads > 1:
        from concurrent.futures import ThreadPoolExecutor

        with ThreadPoolExecutor(max_workers=threads) as pool:
            h_rows = list(pool.map(h_row, range(k)))
    else:
        h_rows = [h_row(i) for i in range(k)]

    table = []
    best: Fraction | float = Fraction(0)
    witness = (0, 1)
    for i in range(k):
        for j in range(i + 1, k):
            dg = inst.pair_distance(i, j)
            dh = h_rows[i][j]
            ratio: Fraction | float
            if dh == INF:
                ratio = INF
            else:
                ratio = Fraction(int(dh), int(dg))
            table.append(PairStretch((i, j), int(dg), dh if dh == INF else int(dh), ratio))
            if ratio > best:
                best = ratio
                witness = (i, j)
    return StretchReport(tuple(table), best, witness)


# -- canonical images ----------------------------------------------------------


def image_path(sol: SprSolution, hpath: Path) -> Path:
    """Replace every edge of an h-path by the canonical shortest path in G.

    The result is a walk in the full graph between the end terminals; it
    may revisit vertices, in which case ``is_simple`` is False.
    """
    if hpath.graph is not sol.h:
        raise ValueError("hpath must live in the solution graph h")
    inst = sol.host
    pieces = []
    for i, j in zip(hpath.vertices, hpath.vertices[1:]):
        if not sol.h.has_edge(i, j):
            raise ValueError(f"({i},{j}) is not an edge of h")
        pieces.append(
            shortest_path(inst.full, inst.terminal_vertex(i), inst.terminal_vertex(j))
        )
    return concat(pieces)


def core_trace(inst: Instance, walk: Path) -> Path:
    """Project a full-graph walk between terminals onto the core.

    Terminal visits appear in an image walk as pendant round-trips
    ``..., a, t, a, ...``; dropping terminal vertices and collapsing the
    duplicated attachment turns the walk into a core walk between the
    end attachments.
    """
    core_vertices = [v for v in walk.vertices if v < inst.n_core]
    collapsed = [core_vertices[0]]
    for v in core_vertices[1:]:
        if v != collapsed[-1]:
            collapsed.append(v)
    length = 0
    for a, b in zip(collapsed, collapsed[1:]):
        length += inst.core.weight(a, b)
    return Path(inst.core, tuple(collapsed), length)


# -- solvers --------------------------------------------------------------------


def _partition_solution(inst: Instance, label: list[int]) -> SprSolution | None:
    """Contract a labeled partition into a candidate solution.

    ``label[v]`` is the terminal index owning core vertex v. Returns None
    when some cluster is disconnected (not a valid contraction).
    """
    clusters: list[list[int]] = [[] for _ in range(inst.k)]
    for v, c in enumerate(label):
        clusters[c].append(v)
    for i, c in enumerate(clusters):
        if inst.attachment(i) not in c:
            return None
        if not _connected_in(inst.core, set(c)):
            return None
    h_edges = {}
    for u, v, _ in inst.core.edges:
        cu, cv = label[u], label[v]
        if cu == cv:
            continue
        key = (cu, cv) if cu < cv else (cv, cu)
        if key not in h_edges:
            h_edges[key] = int(inst.pair_distance(*key))
    h = WeightedGraph(inst.k, [(i, j, w) for (i, j), w in h_edges.items()])
    return SprSolution(
        host=inst,
        h=h,
        provenance="partition",
        clusters=tuple(tuple(c) for c in clusters),
    )


def voronoi_solution(inst: Instance) -> SprSolution:
    """Contract shortest-path territories grown around the attachments.

    Every core vertex joins its nearest attachment (ties to the smallest
    terminal index), clusters become the terminals, and each surviving
    adjacency turns into an h-edge weighted by the true terminal
    distance. Cells grown this way are always connected.
    """
    dist_rows = [distances_from(inst.core, inst.attachment(i)) for i in range(inst.k)]
    label = []
    for v in range(inst.n_core):
        best = min(range(inst.k), key=lambda i: (dist_rows[i][v], i))
        if dist_rows[best][v] == INF:
            raise DisconnectedError(f"core vertex {v} reaches no attachment")
        label.append(best)
    sol = _partition_solution(inst, label)
    if sol is None:  # cannot happen for consistent tie-breaking
        raise AssertionError("territory assignment produced a disconnected cluster")
    return sol


def enumerate_partition_solutions(inst: Instance, budget: int = 2_000_000):
    """Yield every connected k-cluster partition solution, in a fixed order.

    Free (non-attachment) core vertices are assigned to clusters in
    ascending vertex order via mixed-radix counting, so the enumeration
    order is deterministic. Raises :class:`SizeLimitError` upfront when
    more than 12 free vertices (or more than ``budget`` assignments)
    would have to be scanned.
    """
    free = [v for v in range(inst.n_core) if inst.terminal_index_of(v) is None]
    if len(free) > 12:
        raise SizeLimitError(f"{len(free)} free core vertices exceed the enumeration bound of 12")
    total = inst.k ** len(free)
    if total > budget:
        raise SizeLimitError(f"{total} assignments exceed the budget of {budget}")
    base = [0] * inst.n_core
    for i in range(inst.k):
        base[inst.attachment(i)] = i
    for combo in itertools.product(range(inst.k), repeat=len(free)):
        label = base[:]
        for v, c in zip(free, combo):
            label[v] = c
        sol = _partition_solution(inst, label)
        if sol is not None:
            yield sol


def brute_force_optimal(
    inst: Instance, budget: int = 2_000_000
) -> tuple[Fraction | float, SprSolution]:
    """Minimum worst-pair stretch over all connected partitions.

    Deterministic: the first partition (in enumeration order) attaining
    the minimum is returned.
    """
    best_ratio: Fraction | float | None = None
    best_sol: SprSolution | None = None
    for sol in enumerate_partition_solutions(inst, budget):
        r = stretch(sol).max_ratio
        if best_ratio is None or r < best_ratio:
            best_ratio = r
            best_sol = sol
    if best_sol is None:
        raise ValueError("no connected partition exists for this instance")
    return best_ratio, best_sol


# -- serialization ----------------------------------------------------------------


def solution_to_dict(sol: SprSolution, instance_ref: str | None = None) -> dict:
    d: dict = {
        "instance": instance_ref if instance_ref is not None else instance_to_dict(sol.host),
        "edges": [[i, j, w] for i, j, w in sol.h.edges],
    }
    if sol.provenance != "explicit":
        d["provenance"] = sol.provenance
    if sol.clusters is not None:
        d["clusters"] = [list(c) for c in sol.clusters]
    return d


def solution_from_dict(d: dict, base_dir=None, instance: Instance | None = None) -> SprSolution:
    if instance is None:
        ref = d["instance"]
        if isinstance(ref, str):
            p = FilePath(ref)
            if base_dir is not None and not p.is_absolute():
                p = FilePath(base_dir) / p
            instance = load_instance(p)
        else:
            instance = instance_from_dict(ref)
    h = WeightedGraph(instance.k, [tuple(e) for e in d["edges"]])
    clusters = d.get("clusters")
    return SprSolution(
        host=instance,
        h=h,
        provenance=d.get("provenance", "explicit"),
        clusters=tuple(tuple(c) for c in clusters) if clusters is not None else None,
    )


def save_solution(sol: SprSolution, path, instance_ref: str | None = None) -> None:
    FilePath(path).write_text(dump_json(solution_to_dict(sol, instance_ref)))


def load_solution(path, instance: Instance | None = None) -> SprSolution:
    p = FilePath(path)
    return solution_from_dict(json.loads(p.read_text()), base_dir=p.parent, instance=instance)
