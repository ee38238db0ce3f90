"""Path covering calculus: families, cov, decomposition, sampling, bounds.

The central quantity is cov(p): the minimum number of family members
whose edges jointly cover every edge of the path p, or infinity when no
subfamily manages it. On high-girth hosts every member meets p in a
contiguous run of edges and cov reduces to minimum interval covering,
which a greedy sweep solves exactly; the general case falls back to
brute-force set cover over the members that touch p.

Monte Carlo machinery estimates how often a random non-backtracking
path has cov >= 2, against an exact window-counting lower bound.
"""

from __future__ import annotations

import hashlib
import itertools
import random
from dataclasses import dataclass
from fractions import Fraction

from .graphs import INF, Path, WeightedGraph, dump_json, girth, make_path, shortest_path
from .instances import Instance
from .solutions import SprSolution


class CapacityError(Exception):
    """cov needed brute-force set cover on a family too large to enumerate."""


class SuperadditivityError(Exception):
    """The decomposition inequality failed; carries the serialized witness."""


@dataclass(frozen=True)
class CoverFamily:
    """An indexed family of candidate covering paths.

    ``source_edges[i]`` names the h-edge whose image ``paths[i]`` is, when
    the family came from a solution; synthetic families leave it None.
    """

    paths: tuple[Path, ...]
    source_edges: tuple[tuple[int, int], ...] | None = None

    def __len__(self) -> int:
        return len(self.paths)


@dataclass(frozen=True)
class CovResult:
    value: int | float
    witness_subfamily: tuple[int, ...]
    reduction: str  # 'interval' | 'set-cover'


def build_cover_family(sol: SprSolution) -> CoverFamily:
    """Image paths of the h-edges whose endpoint terminals are within L.

    Membership is decided on the true distance between the endpoint
    terminals, not on the h-edge weight; order follows the normalized
    h-edge order, so the family is deterministic.
    """
    inst = sol.host
    members = []
    sources = []
    for i, j, _ in sol.h.edges:
        if inst.params.dist_within_threshold(inst.pair_distance(i, j)):
            members.append(
                shortest_path(inst.full, inst.terminal_vertex(i), inst.terminal_vertex(j))
            )
            sources.append((i, j))
    return CoverFamily(tuple(members), tuple(sources))


# -- cov ----------------------------------------------------------------------


def _member_edge_positions(p: Path, member: Path) -> list[int]:
    medges = member.edge_set
    return [idx for idx, e in enumerate(p.steps()) if e in medges]


def cov(p: Path, family: CoverFamily) -> CovResult:
    """Minimum number of family members covering every edge of p.

    p must be simple. Members meeting p in a contiguous edge run let the
    problem collapse to interval covering (greedy, optimal); any
    non-contiguous intersection forces exact set cover over the members
    that touch p, capped at 20 of them.
    """
    if not p.is_simple:
        raise ValueError("cov is defined for simple paths only")
    m = p.edge_count
    if m == 0:
        return CovResult(0, (), "interval")

    positions = []
    contiguous = True
    for member in family.paths:
        pos = _member_edge_positions(p, member)
        positions.append(pos)
        if pos and pos[-1] - pos[0] + 1 != len(pos):
            contiguous = False

    if contiguous:
        intervals = [
            (pos[0], pos[-1], idx) for idx, pos in enumerate(positions) if pos
        ]
        return _interval_cover(m, intervals)
    return _set_cover(m, positions)


def _interval_cover(m: int, intervals: list[tuple[int, int, int]]) -> CovResult:
    # classic sweep: repeatedly take the interval reaching farthest past
    # the first uncovered edge position; ties to the smallest member index
    chosen: list[int] = []
    next_uncovered = 0
    while next_uncovered < m:
        best_hi = -1
        best_idx = -1
        for lo, hi, idx in intervals:
            if lo <= next_uncovered <= hi and hi > best_hi:
                best_hi = hi
                best_idx = idx
        if best_idx < 0:
            return CovResult(INF, (), "interval")
        chosen.append(best_idx)
        next_uncovered = best_hi + 1
    return CovResult(len(chosen), tuple(chosen), "interval")


def _set_cover(m: int, positions: list[list[int]]) -> CovResult:
    touching = [(idx, frozenset(pos)) for idx, pos in enumerate(positions) if pos]
    everything = frozenset(range(m))
    union_all = frozenset().union(*(s for _, s in touching)) if touching else frozenset()
    if union_all != everything:
        return CovResult(INF, (), "set-cover")
    for idx, covered in touching:
        if covered == everything:
            return CovResult(1, (idx,), "set-cover")
    # a dominated member (intersection inside another's) never helps a
    # minimum cover, so only maximal intersections enter the search
    touching.sort(key=lambda t: (-len(t[1]), t[0]))
    maximal: list[tuple[int, frozenset]] = []
    for idx, covered in touching:
        if not any(covered <= kept for _, kept in maximal):
            maximal.append((idx, covered))
    if len(maximal) > 20:
        raise CapacityError(
            f"{len(maximal)} maximal members intersect the path; "
            "set-cover fallback is capped at 20"
        )
    maximal.sort(key=lambda t: t[0])
    for size in range(2, len(maximal) + 1):
        for combo in itertools.combinations(maximal, size):
            union = frozenset().union(*(s for _, s in combo))
            if union == everything:
                return CovResult(size, tuple(idx for idx, _ in combo), "set-cover")
    return CovResult(INF, (), "set-cover")


# -- decomposition ---------------------------------------------------------------


def decompose(p: Path, s: int) -> list[Path]:
    """Cut p into floor(|p|/s) subpaths of length >= s.

    The first t-1 pieces take s edges each; the last absorbs the
    remainder, so a 10-edge path at s=3 splits into lengths 3, 3, 4.
    Consecutive pieces share exactly one vertex.
    """
    m = p.edge_count
    if s < 1:
        raise ValueError("s must be at least 1")
    if m < s:
        raise ValueError(f"path has {m} edges, fewer than s={s}")
    t = m // s
    out = []
    for j in range(t):
        lo = j * s
        hi = (j + 1) * s if j < t - 1 else m
        out.append(make_path(p.graph, p.vertices[lo : hi + 1]))
    return out


@dataclass(frozen=True)
class SuperadditivityResult:
    lhs: int | float
    rhs: int | float
    holds: bool
    pieces: tuple[int | float, ...]


def check_superadditivity(p: Path, family: CoverFamily, s: int) -> SuperadditivityResult:
    """cov(p) against the summed piece covers: cov(p) >= sum(cov(P_j) - 1).

    Infinity is handled by the natural order: an uncoverable piece makes
    the right side infinite, but then p itself is uncoverable too and
    infinity >= infinity holds.
    """
    lhs = cov(p, family).value
    piece_values = tuple(cov(piece, family).value for piece in decompose(p, s))
    if any(v == INF for v in piece_values):
        rhs: int | float = INF
    else:
        rhs = sum(v - 1 for v in piece_values)
    holds = lhs == INF or (rhs != INF and lhs >= rhs)
    return SuperadditivityResult(lhs, rhs, holds, piece_values)


def verify_superadditivity(
    p: Path, family: CoverFamily, s: int, dump_path=None
) -> SuperadditivityResult:
    """check_superadditivity, but a violation aborts with a serialized witness."""
    res = check_superadditivity(p, family, s)
    if not res.holds:
        witness = {
            "path": list(p.vertices),
            "s": s,
            "lhs": repr(res.lhs),
            "rhs": repr(res.rhs),
            "piece_covs": [repr(v) for v in res.pieces],
            "family": [list(q.vertices) for q in family.paths],
        }
        text = dump_json(witness)
        if dump_path is not None:
            from pathlib import Path as FilePath

            FilePath(dump_path).write_text(text)
        raise SuperadditivityError(text)
    return res


# -- sampling and counting ---------------------------------------------------------


def _spawn_seed(master: int, index: int) -> int:
    digest = hashlib.sha256(f"{master}:{index}".encode()).digest()
    return int.from_bytes(digest[:8], "big")


def sample_nb_path(g: WeightedGraph, length: int, seed: int) -> Path:
    """One uniformly random oriented non-backtracking path of `length` edges.

    Start vertex uniform, first step uniform over the 3 neighbors, every
    later step uniform over the 2 non-backtracking continuations; with
    length < girth the walk cannot self-intersect, so the result is a
    uniform draw from all n*3*2^(length-1) oriented simple paths.
    """
    if length < 1:
        raise ValueError("length must be at least 1")
    if any(g.degree(v) != 3 for v in range(g.n)):
        raise ValueError("non-backtracking sampling requires a 3-regular host")
    if length >= girth(g):
        raise ValueError(f"length {length} >= girth {girth(g)}; sampled walk could self-intersect")
    rng = random.Random(seed)
    u = rng.randrange(g.n)
    v = g.neighbors(u)[rng.randrange(3)]
    seq = [u, v]
    for _ in range(length - 1):
        options = [y for y in g.neighbors(seq[-1]) if y != seq[-2]]
        seq.append(options[rng.randrange(2)])
    return make_path(g, tuple(seq))


def iter_length_s_paths(g: WeightedGraph, s: int):
    """All oriented simple s-edge paths, ascending by vertex sequence."""
    if s < 1:
        raise ValueError("s must be at least 1")

    def extend(seq: list[int]):
        if len(seq) == s + 1:
            yield tuple(seq)
            return
        seen = set(seq)
        for y in g.neighbors(seq[-1]):
            if y not in seen:
                seq.append(y)
                yield from extend(seq)
                seq.pop()

    for start in range(g.n):
        yield from extend([start])


def count_length_s_paths(g: WeightedGraph, s: int) -> int:
    """Exact count of oriented simple s-edge paths by enumeration.

    Equals n*3*2^(s-1) whenever g is cubic and s < girth(g); beyond the
    girth, simplicity failures make the count strictly smaller.
    """
    return sum(1 for _ in iter_length_s_paths(g, s))


def coverable_window_count(qpath: Path, s: int) -> int:
    """Number of contiguous s-edge windows inside a member: max(0, r-s+1)."""
    return max(0, qpath.edge_count - s + 1)


def family_window_sum(family: CoverFamily, s: int) -> int:
    return sum(coverable_window_count(q, s) for q in family.paths)


# -- Monte Carlo estimation ----------------------------------------------------------


@dataclass(frozen=True)
class CovEstimate:
    """Empirical cov distribution for random length-s paths, plus exact bounds.

    ``analytic_bound`` is the window-counting lower bound on
    Pr[cov >= 2]: 1 - 2*sum(r_i - s + 1) / (n*3*2^(s-1)). The factor 2
    converts unoriented member windows to the oriented sample space: one
    member window absorbs both orientations of a sampled path.
    ``coarse_bound`` replaces the exact window sum by the generic
    4nL/(n*3*2^(s-1)) estimate; it can be vacuous where the exact bound
    is tight.
    """

    trials: int
    fraction_cov_ge2: Fraction
    mean_finite_cov: Fraction | None
    uncovered_fraction: Fraction
    analytic_bound: Fraction
    coarse_bound: Fraction
    window_sum: int
    total_paths: int

    def render(self) -> str:
        mean = "n/a" if self.mean_finite_cov is None else f"{float(self.mean_finite_cov):.6f}"
        return "\n".join(
            [
                f"trials                {self.trials}",
                f"Pr[cov >= 2]          {float(self.fraction_cov_ge2):.6f}",
                f"mean finite cov       {mean}",
                f"uncovered fraction    {float(self.uncovered_fraction):.6f}",
                f"analytic lower bound  {float(self.analytic_bound):.6f}",
                f"coarse lower bound    {float(self.coarse_bound):.6f}",
                f"window sum            {self.window_sum}",
                f"oriented path count   {self.total_paths}",
            ]
        )


def estimate_cov_distribution(
    inst: Instance, family: CoverFamily, s: int, trials: int, seed: int = 0
) -> CovEstimate:
    """Sample cov over random non-backtracking core paths of length s.

    Uncoverable paths count toward Pr[cov >= 2] (needing two members and
    having no cover both defeat a single-member cover). Deterministic:
    trial i uses a hash-derived child seed of (seed, i), so the estimate
    is a pure function of its arguments.
    """
    core = inst.core
    if trials < 1:
        raise ValueError("need at least one trial")
    ge2 = 0
    uncovered = 0
    finite_sum = 0
    finite_cnt = 0
    for i in range(trials):
        p = sample_nb_path(core, s, _spawn_seed(seed, i))
        value = cov(p, family).value
        if value == INF:
            uncovered += 1
            ge2 += 1
        else:
            finite_sum += value
            finite_cnt += 1
            if value >= 2:
                ge2 += 1
    total = core.n * 3 * 2 ** (s - 1)
    wsum = family_window_sum(family, s)
    analytic = 1 - Fraction(2 * wsum, total)
    coarse = 1 - Fraction(4 * core.n, total) * inst.params.L
    return CovEstimate(
        trials=trials,
        fraction_cov_ge2=Fraction(ge2, trials),
        mean_finite_cov=Fraction(finite_sum, finite_cnt) if finite_cnt else None,
        uncovered_fraction=Fraction(uncovered, trials),
        analytic_bound=analytic,
        coarse_bound=coarse,
        window_sum=wsum,
        total_paths=total,
    )


# -- search -------------------------------------------------------------------------


def _cov_key(p: Path, value: int | float) -> tuple:
    # infinity outranks every finite value; ties prefer the lexicographically
    # smaller vertex sequence
    rank = (1,) if value == INF else (0, value)
    return (rank, tuple(-x for x in p.vertices))


def find_high_cov_path(
    inst: Instance,
    family: CoverFamily,
    m: int,
    budget: int = 200_000,
    seed: int = 0,
    mode: str = "auto",
) -> tuple[Path, CovResult]:
    """The length-m core path maximizing cov, exhaustively or by sampling.

    mode 'auto' enumerates every oriented length-m path when their count
    fits the budget and otherwise evaluates `budget` random samples.
    Infinite cov beats any finite value; among equal values the
    lexicographically smallest vertex sequence wins, so the search is
    reproducible.
    """
    core = inst.core
    if mode not in ("auto", "exhaustive", "sampled"):
        raise ValueError(f"unknown mode {mode!r}")
    g_core = girth(core)
    cubic = all(core.degree(v) == 3 for v in range(core.n))
    if mode == "auto":
        if cubic and m < g_core:
            total = core.n * 3 * 2 ** (m - 1)
        else:
            total = count_length_s_paths(core, m)
        mode = "exhaustive" if total <= budget else "sampled"

    best: tuple[Path, CovResult] | None = None

    def consider(p: Path):
        nonlocal best
        r = cov(p, family)
        if best is None or _cov_key(p, r.value) > _cov_key(best[0], best[1].value):
            best = (p, r)

    if mode == "exhaustive":
        for seq in iter_length_s_paths(core, m):
            consider(make_path(core, seq))
    else:
        for i in range(budget):
            consider(sample_nb_path(core, m, _spawn_seed(seed, i)))
    if best is None:
        raise ValueError("no length-m path exists in the core")
    return best
