"""Hard-instance assembly: pendant terminals hung off a high-girth cubic core.

An instance is a unit-weight core graph G' plus one pendant terminal per
chosen core vertex, attached by an edge of weight M. Terminals occupy the
last k vertex ids of the full graph G, in attachment order, so terminal i
sits at full-graph vertex ``n_core + i``. The faithful layout puts a
terminal on every core vertex; a sub-terminal layout (a strict subset of
core vertices) is supported so exhaustive solvers have nontrivial
partitions to search.

Parameters come in two modes. 'paper' applies the asymptotic recipe
M = floor(sqrt(log2 k * log2 log2 k)), S = floor(10 log2 log2 k),
L = log2(k)/100, g = ceil(log2(k)/10); it exists for parameter
arithmetic and precondition reporting. 'custom' takes (M, S, L, g)
verbatim and is the workhorse at desk scale, where the asymptotic recipe
collapses (k = 2**16 already gives L = 0.16, an empty threshold family).
Precondition flags are recorded, never enforced.
"""

from __future__ import annotations

import json
import math
import random
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path as FilePath

from . import cages
from .graphs import (
    WeightedGraph,
    distances_from,
    dump_json,
    girth,
    graph_from_dict,
    graph_to_dict,
    shortest_cycle,
)


class GenerationError(Exception):
    """Random repair failed to reach the requested girth within budget."""


def _cmp_pow2(t: int, k: int) -> int:
    """Sign of (2**t - k) without materializing huge powers."""
    if t >= k.bit_length():
        return 1
    x = 1 << t  # t < bit_length(k), so this stays small
    return -1 if x < k else (0 if x == k else 1)


@dataclass(frozen=True)
class InstanceParams:
    """The five knobs of one experiment plus the mode they came from.

    L is an exact rational; threshold comparisons against integer
    distances never go through floats. In paper mode, where L would be
    log2(k)/100, comparisons run in the exponent domain
    (d <= log2(k)/100 iff 2**(100 d) <= k), which is exact for every k.
    """

    k: int
    M: int
    S: int
    L: Fraction
    g: int
    mode: str  # 'paper' | 'custom'

    def dist_within_threshold(self, dist: int) -> bool:
        """Exact membership test ``dist <= L``."""
        if self.mode == "paper":
            return _cmp_pow2(100 * dist, self.k) <= 0
        return Fraction(dist) <= self.L

    def weight_reaches_threshold(self, w: int) -> bool:
        """Exact test ``w >= L``."""
        if self.mode == "paper":
            return _cmp_pow2(100 * w, self.k) >= 0
        return Fraction(w) >= self.L

    def flags(self) -> dict[str, bool]:
        """Recorded preconditions of the asymptotic regime, all exact.

        Desk-scale parameter sets are expected to break some of these,
        which is why they are reported rather than enforced.
        """
        k, m, s, g = self.k, self.M, self.S, self.g
        if self.mode == "paper":
            # M + L < g  <=>  log2(k) < 100 (g - M)  <=>  k < 2**(100 (g - M))
            ml_lt_g = (g - m) > 0 and _cmp_pow2(100 * (g - m), k) > 0
        else:
            ml_lt_g = Fraction(m) + self.L < g
        # 2**(S-1) > log2(k)  <=>  2**(S-1) >= bit_length(k)
        b = k.bit_length()
        tail = True if s - 1 >= b.bit_length() else 2 ** (s - 1) >= b
        return {
            "3M < g/2": 6 * m < g,
            "S < g": s < g,
            "M + L < g": bool(ml_lt_g),
            "2^(S-1) > log2(k)": tail,
        }

    def to_dict(self) -> dict:
        return {
            "k": self.k,
            "M": self.M,
            "S": self.S,
            "L": str(self.L),
            "g": self.g,
            "mode": self.mode,
        }

    @staticmethod
    def from_dict(d: dict) -> "InstanceParams":
        return InstanceParams(
            int(d["k"]), int(d["M"]), int(d["S"]), Fraction(d["L"]), int(d["g"]), d["mode"]
        )


def derive_params(
    k: int,
    mode: str = "paper",
    M: int | None = None,
    S: int | None = None,
    L=None,
    g: int | None = None,
) -> InstanceParams:
    """Compute or accept the parameter block for a k-terminal instance.

    paper mode ignores the overrides and applies the asymptotic recipe;
    custom mode requires all four of (M, S, L, g) and checks their
    domains. L accepts int, string or Fraction and is stored exactly.
    """
    if mode == "paper":
        if k < 4:
            raise ValueError("paper mode needs k >= 4")
        lg = math.log2(k)
        llg = math.log2(lg)
        m = math.floor(math.sqrt(lg * llg))
        s = math.floor(10 * llg)
        if m < 1 or s < 1:
            raise ValueError(f"degenerate paper parameters for k={k}: M={m}, S={s}")
        # Fraction(lg) is exact when k is a power of two; for other k the
        # stored L is a display value and all comparisons use _cmp_pow2.
        return InstanceParams(k, m, s, Fraction(lg) / 100, math.ceil(lg / 10), "paper")
    if mode == "custom":
        if M is None or S is None or L is None or g is None:
            raise ValueError("custom mode requires all of M, S, L, g")
        if k < 1:
            raise ValueError("k must be positive")
        if M < 1 or S < 1:
            raise ValueError("M and S must be at least 1")
        lfrac = Fraction(L)
        if lfrac < 0:
            raise ValueError("L must be nonnegative")
        if g < 3:
            raise ValueError("custom girth target must be at least 3")
        return InstanceParams(k, M, S, lfrac, g, "custom")
    raise ValueError(f"unknown mode {mode!r}")


# -- cubic generation -----------------------------------------------------


def _pairing_cubic(n: int, rng: random.Random) -> set[tuple[int, int]]:
    # pairing model: 3 stubs per vertex, random perfect matching,
    # resampled until it is loop-free and multi-edge-free
    for _ in range(500):
        stubs = [v for v in range(n) for _ in range(3)]
        rng.shuffle(stubs)
        pairs: set[tuple[int, int]] = set()
        ok = True
        for i in range(0, len(stubs), 2):
            a, b = stubs[i], stubs[i + 1]
            if a == b:
                ok = False
                break
            key = (a, b) if a < b else (b, a)
            if key in pairs:
                ok = False
                break
            pairs.add(key)
        if ok:
            return pairs
    raise GenerationError(f"pairing model kept colliding for n={n}")


def _component_labels(n: int, pairs: set[tuple[int, int]]) -> list[int]:
    adj: list[list[int]] = [[] for _ in range(n)]
    for u, v in pairs:
        adj[u].append(v)
        adj[v].append(u)
    label = [-1] * n
    comp = 0
    for start in range(n):
        if label[start] != -1:
            continue
        stack = [start]
        label[start] = comp
        while stack:
            x = stack.pop()
            for y in adj[x]:
                if label[y] == -1:
                    label[y] = comp
                    stack.append(y)
        comp += 1
    return label


def _swap_edges(pairs: set, e1: tuple[int, int], e2: tuple[int, int], rng: random.Random) -> bool:
    """2-swap e1 against e2 in place if a degree-preserving rewire is legal."""
    a, b = e1
    c, d = e2
    if len({a, b, c, d}) < 4:
        return False
    options = [((a, c), (b, d)), ((a, d), (b, c))]
    rng.shuffle(options)
    for x, y in options:
        f1 = (min(x), max(x))
        f2 = (min(y), max(y))
        if f1 != f2 and f1 not in pairs and f2 not in pairs:
            pairs.discard(e1)
            pairs.discard(e2)
            pairs.add(f1)
            pairs.add(f2)
            return True
    return False


def generate_cubic_high_girth(
    n: int,
    girth_target: int,
    seed: int = 0,
    strategy: str = "cage",
    max_swaps: int = 20000,
) -> WeightedGraph:
    """A connected unit-weight 3-regular graph on n vertices with girth >= girth_target.

    strategy 'cage' is an exact (n, girth) catalog lookup. strategy
    'random-repair' draws a pairing-model cubic graph and repairs short
    cycles (and disconnection) by seeded 2-swaps until the target holds,
    raising :class:`GenerationError` when the swap budget runs out.
    Deterministic for a fixed (n, girth_target, seed).
    """
    if n < 4:
        raise ValueError("need at least 4 vertices")
    if n % 2 != 0:
        raise ValueError(f"no cubic graph on an odd vertex count (n={n})")
    if girth_target < 3:
        raise ValueError("girth target must be at least 3")

    if strategy == "cage":
        g = cages.cage_for(n, girth_target)
        actual = girth(g)
        if actual < girth_target:  # catalog is self-checked; belt and suspenders
            raise GenerationError(f"catalog graph has girth {actual} < {girth_target}")
        return g

    if strategy != "random-repair":
        raise ValueError(f"unknown strategy {strategy!r}")

    rng = random.Random(seed)
    pairs = _pairing_cubic(n, rng)

    for _ in range(max_swaps):
        labels = _component_labels(n, pairs)
        edges_sorted = sorted(pairs)
        if max(labels) > 0:
            # a swap across two components always merges them
            comp0 = [e for e in edges_sorted if labels[e[0]] == 0]
            rest = [e for e in edges_sorted if labels[e[0]] != 0]
            _swap_edges(pairs, rng.choice(comp0), rng.choice(rest), rng)
            continue
        graph = WeightedGraph(n, [(u, v, 1) for u, v in edges_sorted])
        if girth(graph) >= girth_target:
            return graph
        cyc_edges = sorted(set(shortest_cycle(graph).steps()))
        other = [e for e in edges_sorted if e not in set(cyc_edges)]
        if not other:
            raise GenerationError("graph is a single short cycle; cannot repair")
        _swap_edges(pairs, rng.choice(cyc_edges), rng.choice(other), rng)

    raise GenerationError(
        f"could not reach girth {girth_target} on n={n} within {max_swaps} swaps (seed {seed})"
    )


# -- instances -------------------------------------------------------------


class Instance:
    """Core graph, attachment list and assembled full graph, with caches.

    Construct via :func:`build_instance` (strict faithful layout) or
    :func:`assemble_instance` (permissive, for sub-terminal and other
    hand-built experiments). ``full`` may be passed explicitly only to
    study deliberately corrupted assemblies; :func:`validate_instance`
    re-derives every expectation from (core, params, terminals) and
    reports mismatches.
    """

    def __init__(
        self,
        core: WeightedGraph,
        params: InstanceParams,
        terminal_vertices=None,
        full: WeightedGraph | None = None,
    ) -> None:
        self.core = core
        self.params = params
        if terminal_vertices is None:
            terminal_vertices = range(core.n)
        self.terminal_vertices: tuple[int, ...] = tuple(sorted(terminal_vertices))
        self.k = len(self.terminal_vertices)
        self.n_core = core.n
        if full is None:
            edges = list(core.edges)
            for i, a in enumerate(self.terminal_vertices):
                edges.append((a, core.n + i, params.M))
            full = WeightedGraph(core.n + self.k, edges)
        self.full = full
        self._attachment_index = {a: i for i, a in enumerate(self.terminal_vertices)}
        self._term_dist: list[list[int | float]] | None = None

    # terminal i <-> full-graph vertex n_core + i <-> core attachment a_i

    @property
    def terminals(self) -> tuple[int, ...]:
        return tuple(self.n_core + i for i in range(self.k))

    @property
    def is_full_terminal(self) -> bool:
        return self.k == self.n_core

    def terminal_vertex(self, i: int) -> int:
        return self.n_core + i

    def attachment(self, i: int) -> int:
        return self.terminal_vertices[i]

    def terminal_index_of(self, core_vertex: int) -> int | None:
        return self._attachment_index.get(core_vertex)

    def terminal_distances(self) -> list[list[int | float]]:
        """k x k matrix of exact distances between terminals in the full graph."""
        if self._term_dist is None:
            mat = []
            for i in range(self.k):
                row = distances_from(self.full, self.terminal_vertex(i))
                mat.append([row[self.terminal_vertex(j)] for j in range(self.k)])
            self._term_dist = mat
        return self._term_dist

    def pair_distance(self, i: int, j: int) -> int | float:
        return self.terminal_distances()[i][j]

    def min_terminal_distance(self) -> int | float:
        mat = self.terminal_distances()
        return min(mat[i][j] for i in range(self.k) for j in range(i + 1, self.k))

    def __repr__(self) -> str:
        return (
            f"Instance(k={self.k}, n_core={self.n_core}, M={self.params.M}, "
            f"mode={self.params.mode!r})"
        )


def assemble_instance(
    core: WeightedGraph, params: InstanceParams, terminal_vertices=None
) -> Instance:
    """Permissive assembly used for sub-terminal and hand-built experiments.

    Checks only structural sanity (terminal list valid and matching
    params.k); regularity and girth are the caller's business.
    """
    tv = tuple(sorted(terminal_vertices)) if terminal_vertices is not None else tuple(range(core.n))
    if len(set(tv)) != len(tv):
        raise ValueError("terminal attachment vertices must be distinct")
    if tv and not (0 <= tv[0] and tv[-1] < core.n):
        raise ValueError("terminal attachment vertex out of range")
    if not tv:
        raise ValueError("need at least one terminal")
    if params.k != len(tv):
        raise ValueError(f"params.k={params.k} but {len(tv)} terminal vertices given")
    return Instance(core, params, tv)


def build_instance(
    core: WeightedGraph, params: InstanceParams, terminal_vertices=None
) -> Instance:
    """Strict assembly: unit-weight 3-regular core with girth >= params.g."""
    problems = []
    if any(w != 1 for _, _, w in core.edges):
        problems.append("core must be unit-weight")
    if any(core.degree(v) != 3 for v in range(core.n)):
        problems.append("core must be 3-regular")
    actual = girth(core)
    if actual < params.g:
        problems.append(f"core girth {actual} below target {params.g}")
    if problems:
        raise ValueError("; ".join(problems))
    return assemble_instance(core, params, terminal_vertices)


# -- validation ------------------------------------------------------------


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str = ""


@dataclass(frozen=True)
class ValidationReport:
    checks: tuple[CheckResult, ...]

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def failures(self) -> list[CheckResult]:
        return [c for c in self.checks if not c.passed]

    def render(self) -> str:
        lines = []
        for c in self.checks:
            mark = "ok  " if c.passed else "FAIL"
            lines.append(f"[{mark}] {c.name}" + (f" -- {c.detail}" if c.detail else ""))
        return "\n".join(lines)


def validate_instance(inst: Instance) -> ValidationReport:
    """Re-derive every structural expectation and report each as a named check.

    A faithful instance passes everything. Sub-terminal or non-cubic
    experiments will fail exactly the regularity/layout checks, which the
    report states rather than hides.
    """
    core, full, params = inst.core, inst.full, inst.params
    k, nc, M = inst.k, inst.n_core, params.M
    checks = []

    def add(name: str, passed: bool, detail: str = "") -> None:
        checks.append(CheckResult(name, bool(passed), detail))

    add("params-terminal-count", params.k == k, f"params.k={params.k}, terminals={k}")
    add(
        "core-unit-weights",
        all(w == 1 for _, _, w in core.edges),
        "core edges must all have weight 1",
    )
    degs = sorted({core.degree(v) for v in range(nc)})
    add("core-3-regular", degs == [3], f"core degrees {degs}")
    actual_girth = girth(core)
    add("core-girth", actual_girth >= params.g, f"girth {actual_girth}, target {params.g}")
    add("full-vertex-count", full.n == nc + k, f"{full.n} vs {nc}+{k}")
    add(
        "full-edge-count",
        full.edge_count == core.edge_count + k,
        f"{full.edge_count} vs {core.edge_count}+{k}",
    )
    core_embedded = all(full.has_edge(u, v) and full.weight(u, v) == w for u, v, w in core.edges)
    add("core-edges-embedded", core_embedded)
    pendant_ok = True
    detail = ""
    for i, a in enumerate(inst.terminal_vertices):
        t = inst.terminal_vertex(i)
        if t >= full.n or full.degree(t) != 1 or not full.has_edge(a, t):
            pendant_ok = False
            detail = f"terminal {i} is not a pendant on vertex {a}"
            break
        if full.weight(a, t) != M:
            pendant_ok = False
            detail = f"pendant edge ({a},{t}) has weight {full.weight(a, t)}, expected M={M}"
            break
    add("pendant-edges", pendant_ok, detail)
    add(
        "core-degrees-in-full",
        all(
            full.degree(v) == core.degree(v) + (1 if v in inst._attachment_index else 0)
            for v in range(nc)
        ),
    )
    if inst.is_full_terminal and all(core.degree(v) == 3 for v in range(nc)):
        degs = sorted(full.degree(v) for v in range(full.n))
        add(
            "full-degree-sequence",
            degs == [1] * k + [4] * nc,
            "full-terminal cubic-core instances have degrees (4^k, 1^k)",
        )
    return ValidationReport(tuple(checks))


# -- serialization -----------------------------------------------------------


def instance_to_dict(inst: Instance) -> dict:
    d = {
        "params": inst.params.to_dict(),
        "core": graph_to_dict(inst.core),
        "pendant_weight": inst.params.M,
    }
    if not inst.is_full_terminal:
        d["terminal_vertices"] = list(inst.terminal_vertices)
    return d


def instance_from_dict(d: dict) -> Instance:
    params = InstanceParams.from_dict(d["params"])
    core = graph_from_dict(d["core"])
    if d.get("pendant_weight", params.M) != params.M:
        raise ValueError(
            f"pendant_weight {d['pendant_weight']} disagrees with params.M={params.M}"
        )
    tv = d.get("terminal_vertices")
    return assemble_instance(core, params, tv)


def save_instance(inst: Instance, path) -> None:
    FilePath(path).write_text(dump_json(instance_to_dict(inst)))


def load_instance(path) -> Instance:
    return instance_from_dict(json.loads(FilePath(path).read_text()))
