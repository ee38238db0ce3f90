"""Command line front end: gen, validate, solve, eval, cover, certify, sweep.

Every invocation is a pure function of (argv, input files): randomized
work derives child seeds from --seed, parallel work is ordered, and no
output embeds timing or environment data, so reruns are byte-identical.

Exit codes: 0 success, 1 invalid input or failed validation,
2 certificate preconditions unmet, 64 usage error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction
from pathlib import Path as FilePath

try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib

from . import cages
from .certify import (
    InvalidSolutionError,
    certificate_to_dict,
    certify,
    render_csv,
    sweep_entries,
)
from .covering import (
    build_cover_family,
    count_length_s_paths,
    estimate_cov_distribution,
    find_high_cov_path,
)
from .graphs import INF, dump_json, girth
from .instances import (
    Instance,
    assemble_instance,
    build_instance,
    derive_params,
    generate_cubic_high_girth,
    load_instance,
    save_instance,
    validate_instance,
)
from .solutions import (
    brute_force_optimal,
    load_solution,
    save_solution,
    solution_to_dict,
    stretch,
    validate_solution,
    voronoi_solution,
)

USAGE_ERROR = 64


class _Parser(argparse.ArgumentParser):
    # argparse exits 2 on bad flags; the documented usage-error code is 64
    def error(self, message):
        self.print_usage(sys.stderr)
        sys.stderr.write(f"{self.prog}: error: {message}\n")
        raise SystemExit(USAGE_ERROR)


def _default_threads() -> int:
    env = os.environ.get("SPR_LAB_THREADS", "")
    try:
        return max(1, int(env))
    except ValueError:
        return 1


def _add_threads_flag(p: argparse.ArgumentParser) -> None:
    p.add_argument(
        "--threads",
        type=int,
        default=None,
        help="worker threads (default: SPR_LAB_THREADS or 1; results identical either way)",
    )


def _threads(args) -> int:
    return args.threads if args.threads is not None else _default_threads()


def build_parser() -> _Parser:
    parser = _Parser(prog="spr-lab", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("gen", help="generate an instance file")
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--cage", help="catalog core by name (petersen, heawood, mcgee, ...)")
    src.add_argument("--random", type=int, metavar="N", help="random-repair core on N vertices")
    p.add_argument("--girth", type=int, help="girth target (required with --random)")
    p.add_argument("--M", type=int, help="pendant edge weight; any of --M/--S/--L selects custom parameters")
    p.add_argument("--S", type=int, help="decomposition scale (custom default: 2)")
    p.add_argument("--L", help="length threshold, exact fraction like 3 or 4/25 (custom default: 2M+1)")
    p.add_argument("--g", type=int, help="recorded girth requirement (custom default: known/target girth)")
    p.add_argument("--terminals", help="comma-separated core vertices for a sub-terminal instance")
    p.add_argument("--seed", type=int, default=0, help="generation seed (default 0)")
    p.add_argument("--out", required=True, help="instance JSON path")

    p = sub.add_parser("validate", help="check an instance file against all invariants")
    p.add_argument("--instance", required=True)

    p = sub.add_parser("solve", help="produce a solution for an instance")
    p.add_argument("--instance", required=True)
    p.add_argument("--method", choices=("voronoi", "brute"), default="voronoi")
    p.add_argument("--budget", type=int, default=2_000_000, help="brute enumeration cap")
    p.add_argument("--inline", action="store_true", help="embed the instance in the solution file")
    p.add_argument("--out", required=True, help="solution JSON path")

    p = sub.add_parser("eval", help="exact stretch table for a solution")
    p.add_argument("--solution", required=True)
    p.add_argument("--instance", help="override the instance reference in the solution file")
    p.add_argument("--limit", type=int, default=10, help="pairs to print (-1 for all)")
    _add_threads_flag(p)

    p = sub.add_parser("cover", help="cover-number experiment on a solution's family")
    p.add_argument("--instance", required=True)
    p.add_argument("--solution", required=True)
    p.add_argument("--s", type=int, required=True, help="sampled path length")
    p.add_argument("--trials", type=int, default=1000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--m", type=int, help="witness search length (default: instance M)")
    p.add_argument("--budget", type=int, default=200_000, help="witness search budget")
    p.add_argument("--out", help="report JSON path")

    p = sub.add_parser("certify", help="emit a lower-bound certificate for a solution")
    p.add_argument("--instance", required=True)
    p.add_argument("--solution", required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--budget", type=int, default=200_000)
    p.add_argument(
        "--ignore-edge-budget",
        action="store_true",
        help="admit solutions that overspend edges (metric-completion controls)",
    )
    p.add_argument("--out", help="certificate JSON path")

    p = sub.add_parser("sweep", help="certify a TOML-configured batch, emit CSV")
    p.add_argument("--config", required=True, help="TOML file of [[run]] tables")
    p.add_argument("--out", required=True, help="CSV path")
    p.add_argument("--gnuplot", help="also write a gnuplot script plotting the CSV")
    _add_threads_flag(p)

    p = sub.add_parser("count-paths", help="count oriented simple s-edge core paths")
    p.add_argument("--instance", required=True)
    p.add_argument("--s", type=int, required=True)

    return parser


# -- gen --------------------------------------------------------------------


def _parse_terminals(text: str | None):
    if text is None:
        return None
    try:
        return tuple(sorted(int(x) for x in text.split(",")))
    except ValueError:
        raise ValueError(f"bad --terminals value {text!r}; expected e.g. 0,2,4")


def _cmd_gen(args) -> int:
    if args.cage is not None:
        core = cages.cage(args.cage)
        known_girth = cages.CATALOG[args.cage][1]
    else:
        if args.girth is None:
            raise ValueError("--random requires --girth")
        core = generate_cubic_high_girth(
            args.random, args.girth, seed=args.seed, strategy="random-repair"
        )
        known_girth = args.girth

    terminals = _parse_terminals(args.terminals)
    k = len(terminals) if terminals is not None else core.n

    custom = any(x is not None for x in (args.M, args.S, args.L, args.g))
    if custom:
        M = args.M if args.M is not None else 1
        S = args.S if args.S is not None else 2
        L = Fraction(args.L) if args.L is not None else Fraction(2 * M + 1)
        g = args.g if args.g is not None else known_girth
        params = derive_params(k, mode="custom", M=M, S=S, L=L, g=g)
    else:
        params = derive_params(k)

    if terminals is None and girth(core) >= params.g:
        inst = build_instance(core, params)
    else:
        inst = assemble_instance(core, params, terminal_vertices=terminals)

    report = validate_instance(inst)
    save_instance(inst, args.out)
    print(f"instance: {core.n} core vertices, k={k}, M={params.M}, girth {girth(core)}")
    print(report.render())
    if not report.passed:
        return 1
    print(f"wrote {args.out}")
    return 0


# -- validate / solve / eval ---------------------------------------------------


def _cmd_validate(args) -> int:
    inst = load_instance(args.instance)
    report = validate_instance(inst)
    print(report.render())
    return 0 if report.passed else 1


def _cmd_solve(args) -> int:
    inst = load_instance(args.instance)
    if args.method == "voronoi":
        sol = voronoi_solution(inst)
    else:
        ratio, sol = brute_force_optimal(inst, budget=args.budget)
        print(f"optimal stretch {float(ratio):.6f}" if ratio != INF else "optimal stretch inf")
    ref = None if args.inline else args.instance
    save_solution(sol, args.out, instance_ref=ref)
    print(f"{args.method}: {sol.h.edge_count} edges over {inst.k} terminals -> {args.out}")
    return 0


def _cmd_eval(args) -> int:
    instance = load_instance(args.instance) if args.instance else None
    sol = load_solution(args.solution, instance=instance)
    report = validate_solution(sol)
    if not report.passed:
        print(report.render())
        return 1
    rep = stretch(sol, threads=_threads(args))
    print(rep.render(limit=None if args.limit < 0 else args.limit))
    return 0


# -- cover -----------------------------------------------------------------------


def _ser_frac(x):
    if x is None:
        return None
    if x == INF:
        return "inf"
    return str(x)


def _cmd_cover(args) -> int:
    inst = load_instance(args.instance)
    sol = load_solution(args.solution, instance=inst)
    report = validate_solution(sol)
    if not report.passed:
        print(report.render())
        return 1
    family = build_cover_family(sol)
    est = estimate_cov_distribution(inst, family, args.s, args.trials, seed=args.seed)
    m = args.m if args.m is not None else inst.params.M
    witness, witness_cov = find_high_cov_path(inst, family, m, budget=args.budget, seed=args.seed)
    print(f"family size {len(family)}")
    print(est.render())
    cov_text = "inf" if witness_cov.value == INF else str(witness_cov.value)
    print(f"witness path    {witness.vertices} cov={cov_text}")
    if args.out:
        payload = {
            "s": args.s,
            "trials": args.trials,
            "seed": args.seed,
            "family_size": len(family),
            "fraction_cov_ge2": _ser_frac(est.fraction_cov_ge2),
            "mean_finite_cov": _ser_frac(est.mean_finite_cov),
            "uncovered_fraction": _ser_frac(est.uncovered_fraction),
            "analytic_bound": _ser_frac(est.analytic_bound),
            "coarse_bound": _ser_frac(est.coarse_bound),
            "window_sum": est.window_sum,
            "total_paths": est.total_paths,
            "witness_path": list(witness.vertices),
            "witness_cov": "inf" if witness_cov.value == INF else witness_cov.value,
        }
        FilePath(args.out).write_text(dump_json(payload))
        print(f"wrote {args.out}")
    return 0


# -- certify -----------------------------------------------------------------------


def _cmd_certify(args) -> int:
    inst = load_instance(args.instance)
    sol = load_solution(args.solution, instance=inst)
    try:
        cert = certify(
            inst,
            sol,
            budget=args.budget,
            seed=args.seed,
            ignore_edge_budget=args.ignore_edge_budget,
        )
    except InvalidSolutionError as err:
        print(err.report.render())
        return 1
    print(cert.render())
    if args.out:
        FilePath(args.out).write_text(dump_json(certificate_to_dict(cert)))
        print(f"wrote {args.out}")
    return 0 if cert.preconditions_met else 2


# -- sweep -------------------------------------------------------------------------


def _instance_from_run(run: dict, default_seed: int) -> Instance:
    known = {
        "cage", "n", "girth", "strategy", "seed", "mode",
        "M", "S", "L", "g", "terminals", "solvers",
    }
    unknown = set(run) - known
    if unknown:
        raise ValueError(f"unknown sweep run keys: {sorted(unknown)}")
    if ("cage" in run) == ("n" in run):
        raise ValueError("each [[run]] needs exactly one of 'cage' or 'n'")
    if "cage" in run:
        core = cages.cage(run["cage"])
        known_girth = cages.CATALOG[run["cage"]][1]
    else:
        if "girth" not in run:
            raise ValueError("random runs need 'girth'")
        core = generate_cubic_high_girth(
            run["n"],
            run["girth"],
            seed=run.get("seed", default_seed),
            strategy=run.get("strategy", "random-repair"),
        )
        known_girth = run["girth"]

    terminals = tuple(sorted(run["terminals"])) if "terminals" in run else None
    k = len(terminals) if terminals is not None else core.n
    if run.get("mode", "custom") == "paper":
        params = derive_params(k)
    else:
        M = run.get("M", 1)
        params = derive_params(
            k,
            mode="custom",
            M=M,
            S=run.get("S", 2),
            L=Fraction(str(run.get("L", 2 * M + 1))),
            g=run.get("g", known_girth),
        )
    if terminals is None and girth(core) >= params.g:
        return build_instance(core, params)
    return assemble_instance(core, params, terminal_vertices=terminals)


_GNUPLOT_TEMPLATE = """\
# gnuplot script generated alongside {csv}
set datafile separator ','
set key autotitle columnhead outside
set xlabel 'k (terminals)'
set ylabel 'worst-pair stretch'
set grid
plot '{csv}' using 1:7 with points pt 7 title 'stretch', \\
     '{csv}' using 1:9 with points pt 5 title 'certified bound'
"""


def _cmd_sweep(args) -> int:
    config = tomllib.loads(FilePath(args.config).read_text())
    runs = config.get("run", [])
    if not isinstance(runs, list):
        raise ValueError("'run' must be an array of tables")
    seed = config.get("seed", 0)
    budget = config.get("budget", 200_000)
    default_solvers = config.get("solvers", ["voronoi"])
    entries = []
    for run in runs:
        inst = _instance_from_run(run, seed)
        for solver in run.get("solvers", default_solvers):
            entries.append((inst, solver))
    threads = args.threads if args.threads is not None else config.get("threads", _default_threads())
    rows = sweep_entries(entries, threads=threads, budget=budget, seed=seed)
    text = render_csv(rows)
    FilePath(args.out).write_text(text)
    print(f"{len(rows)} rows -> {args.out}")
    errors = [r for r in rows if r.case == "error"]
    for r in errors:
        print(f"  error [{r.solver} k={r.k}]: {r.error}")
    if args.gnuplot:
        FilePath(args.gnuplot).write_text(_GNUPLOT_TEMPLATE.format(csv=args.out))
        print(f"wrote {args.gnuplot}")
    return 0


def _cmd_count_paths(args) -> int:
    inst = load_instance(args.instance)
    print(count_length_s_paths(inst.core, args.s))
    return 0


_COMMANDS = {
    "gen": _cmd_gen,
    "validate": _cmd_validate,
    "solve": _cmd_solve,
    "eval": _cmd_eval,
    "cover": _cmd_cover,
    "certify": _cmd_certify,
    "sweep": _cmd_sweep,
    "count-paths": _cmd_count_paths,
}


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if exc.code is not None else 0
    try:
        return _COMMANDS[args.command](args)
    except (ValueError, OSError, json.JSONDecodeError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except Exception as exc:  # library-specific errors share exit 1
        from .covering import CapacityError
        from .graphs import DisconnectedError
        from .instances import GenerationError
        from .solutions import SizeLimitError

        if isinstance(exc, (CapacityError, DisconnectedError, GenerationError, SizeLimitError)):
            print(f"error: {exc}", file=sys.stderr)
            return 1
        raise


def main() -> int:
    return run()


if __name__ == "__main__":
    sys.exit(run())
