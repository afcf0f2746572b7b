"""Command-line front end (``arbx``)."""
from __future__ import annotations

import argparse
import logging
import os
import random
import sys
from pathlib import Path

from . import __version__
from .bench import (
    BenchConfig,
    find_benchmark_file,
    read_manifest,
    rows_to_csv,
    run_benchmark,
    solve_problem,
)
from .evaluation import (
    Arborescence,
    WaitInfeasibleError,
    check_precedences,
    entry_times,
    relative_gap,
    validate_arborescence,
)
from .instance import Instance, InstanceError, load_instance, normalize, precedence_density, write_native
from .models import build_model, export_lp, solve_lr_with_cuts
from .reductions import from_3sat, from_rsa, read_dimacs, read_points
from .solver import SizeLimitError, SolverLimits, brute_force_pcmca, brute_force_pcmcawt

EXIT_OK, EXIT_INFEASIBLE, EXIT_USAGE, EXIT_LIMIT = 0, 1, 2, 3
MODEL_TAGS = {"set": "set-based", "mcf": "mcf", "da": "da", "aac": "aac"}
DEFAULT_DIRS = [Path("tests/data/sop")]

log = logging.getLogger("arbx")


def _setup_logging() -> None:
    level = os.environ.get("ARBX_LOG", "error").upper()
    logging.basicConfig(
        level=getattr(logging, level, logging.ERROR),
        stream=sys.stderr,
        format="%(levelname)s %(name)s: %(message)s",
    )


def _load(name: str) -> Instance:
    return load_instance(find_benchmark_file(name, DEFAULT_DIRS))


def _limits(args) -> SolverLimits:
    return SolverLimits(
        time_limit=args.time_limit,
        node_limit=args.node_limit,
        lp_bound=getattr(args, "lp_bound", "auto"),
    )


def _status_exit(status: str) -> int:
    return {"optimal": EXIT_OK, "infeasible": EXIT_INFEASIBLE}.get(status, EXIT_LIMIT)


def _fmt(v) -> str:
    return str(int(v)) if float(v).is_integer() else f"{float(v):.3f}"


def cmd_solve(args) -> int:
    inst = _load(args.instance)
    value, st = solve_problem(inst, args.problem, _limits(args))
    if st.status == "optimal":
        print(f"optimal {_fmt(value)}")
    elif st.status == "infeasible":
        print("infeasible")
    else:
        print(f"{st.status} [{_fmt(st.lower_bound)}, {_fmt(st.upper_bound) if value is not None else 'inf'}]")
    print(f"nodes {st.nodes} cuts {st.cuts} time {st.wall_time:.3f}")
    if args.csv:
        cfg = BenchConfig(problem=args.problem, limits=_limits(args))
        Path(args.csv).write_text(rows_to_csv(run_benchmark([inst], cfg)), newline="")
    return _status_exit(st.status)


def cmd_relax(args) -> int:
    inst = _load(args.instance)
    tag = MODEL_TAGS[args.model]
    problem = args.problem or ("pcmca" if tag == "set-based" else "pcmca-wt")
    lr = solve_lr_with_cuts(inst, tag, with_valid_ineqs=not args.no_valid_ineqs, lp_solver=args.lp_solver)
    if args.lp_out and lr.model is not None:
        Path(args.lp_out).write_text(export_lp(lr.model))
    if lr.status != "optimal":
        print(f"LR {lr.status}")
        return EXIT_INFEASIBLE if lr.status == "infeasible" else EXIT_LIMIT
    ref = args.reference
    if ref is None:
        value, st = solve_problem(inst, problem, _limits(args))
        ref = value if st.status == "optimal" else None
    gap = f" gap {relative_gap(ref, lr.value):.3f}" if ref is not None and ref > 0 else ""
    print(f"LR {lr.value:.2f}{gap}")
    print(f"cuts {lr.cuts} rounds {lr.rounds}")
    return EXIT_OK


def cmd_export(args) -> int:
    inst = _load(args.instance)
    m = build_model(inst, MODEL_TAGS[args.model], with_valid_ineqs=not args.no_valid_ineqs)
    text = export_lp(m)
    if args.lp_out:
        Path(args.lp_out).write_text(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def _random_instance(n: int, seed: int, density: float, max_cost: int) -> Instance:
    rng = random.Random(seed)
    order = list(range(1, n))
    rng.shuffle(order)
    pos = {v: k for k, v in enumerate(order)}
    arcs = [(i, j, rng.randint(0, max_cost)) for i in range(n) for j in range(1, n) if i != j]
    pairs = [(a, b) for a in range(1, n) for b in range(1, n) if pos[a] < pos[b]]
    R = rng.sample(pairs, int(round(density * len(pairs))))
    return normalize(n, 0, arcs, R, f"random-{n}-{seed}")


def cmd_generate(args) -> int:
    if args.kind == "3sat":
        if not args.cnf:
            raise _Usage("generate 3sat needs --cnf")
        inst = from_3sat(read_dimacs(Path(args.cnf).read_text()), symmetric=args.symmetric, name=Path(args.cnf).stem)
    elif args.kind == "rsa":
        if not args.points:
            raise _Usage("generate rsa needs --points")
        inst = from_rsa(read_points(Path(args.points).read_text()), name=Path(args.points).stem)
    else:
        inst = _random_instance(args.n, args.seed, args.density, args.max_cost)
    text = write_native(inst)
    if args.output:
        Path(args.output).write_text(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def _read_tree(path: str) -> dict[int, int]:
    parent = {}
    for lineno, raw in enumerate(Path(path).read_text().splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) != 2:
            raise _Usage(f"{path}:{lineno}: expected 'parent child'")
        i, j = int(parts[0]), int(parts[1])
        if j in parent:
            raise _Usage(f"{path}:{lineno}: vertex {j} has two parents")
        parent[j] = i
    return parent


def cmd_validate(args) -> int:
    inst = _load(args.instance)
    dens = f"{precedence_density(inst):.3f}" if inst.n >= 2 else "-"
    print(f"instance {inst.name} n {inst.n} arcs {len(inst.arcs)} precedences {len(inst.precedences)} density {dens}")
    if not args.tree:
        return EXIT_OK
    parent = _read_tree(args.tree)
    problems = validate_arborescence(inst, parent)
    for v in problems:
        print(f"invalid {v.kind}: {v.message}")
    if problems:
        return EXIT_INFEASIBLE
    arbo = Arborescence.from_parent(inst, parent)
    bad = check_precedences(inst, arbo)
    for s, t in bad:
        print(f"precedence ({s}, {t}) violated: {t} lies on the path to {s}")
    if bad:
        return EXIT_INFEASIBLE
    print(f"cost {arbo.cost}")
    try:
        ts = entry_times(inst, arbo)
    except WaitInfeasibleError as exc:
        print(f"waiting-time infeasible: {exc}")
        return EXIT_INFEASIBLE
    print(f"objective-wt {ts.objective}")
    return EXIT_OK


def cmd_bench(args) -> int:
    items: list = []
    for item in args.instances:
        p = Path(item)
        if p.suffix in (".txt", ".lst") and p.is_file():
            items += read_manifest(p)
        else:
            try:
                items.append(find_benchmark_file(item, DEFAULT_DIRS))
            except FileNotFoundError:
                items.append(item)  # becomes an error row
    forms = tuple(MODEL_TAGS[m] for m in args.model) if args.model else ()
    cfg = BenchConfig(args.problem, forms, _limits(args), not args.no_valid_ineqs, args.lp_solver)
    rows = run_benchmark(items, cfg)
    text = rows_to_csv(rows)
    if args.csv:
        Path(args.csv).write_text(text, newline="")
    for r in rows:
        print(
            f"{r.Name:<16} {r.Size!s:>4} {r.DensityOfP:>6} {r.zStar:>12} {r.GapPercent:>8} "
            f"{r.Status:<10} {r.Formulation}"
        )
    return EXIT_OK


def cmd_oracle(args) -> int:
    inst = _load(args.instance)
    limits = SolverLimits(brute_force_cap=args.cap)
    try:
        if args.problem == "pcmca-wt":
            ts = brute_force_pcmcawt(inst, limits)
            value = None if ts is None else ts.objective
        else:
            tree = brute_force_pcmca(inst, limits)
            value = None if tree is None else tree.cost
    except SizeLimitError as exc:
        print(str(exc), file=sys.stderr)
        return EXIT_USAGE
    print("infeasible" if value is None else f"optimal {_fmt(value)}")
    return EXIT_OK if value is not None else EXIT_INFEASIBLE


class _Usage(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise _Usage(message)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="arbx", description="Precedence-constrained arborescence toolkit.")
    p.add_argument("--version", action="version", version=f"arbx {__version__}")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(sp, problem_default="pcmca"):
        sp.add_argument("--problem", choices=["mca", "pcmca", "pcmca-wt"], default=problem_default)
        sp.add_argument("--time-limit", type=float, default=3600.0)
        sp.add_argument("--node-limit", type=int, default=None)
        sp.add_argument("--lp-bound", choices=["mca", "da", "auto"], default="auto",
                        help="node bound of the waiting-time solver")

    sp = sub.add_parser("solve", help="solve an instance exactly")
    sp.add_argument("instance")
    common(sp)
    sp.add_argument("--csv")
    sp.set_defaults(func=cmd_solve)

    sp = sub.add_parser("relax", help="linear relaxation with cutting planes")
    sp.add_argument("instance")
    common(sp, None)
    sp.add_argument("--model", choices=list(MODEL_TAGS), default="da")
    sp.add_argument("--reference", type=float, help="optimal value for the gap (default: solve exactly)")
    sp.add_argument("--no-valid-ineqs", action="store_true")
    sp.add_argument("--lp-solver", choices=["simplex", "highs"], default="simplex")
    sp.add_argument("--lp-out")
    sp.set_defaults(func=cmd_relax)

    sp = sub.add_parser("export", help="write a formulation as an LP file")
    sp.add_argument("instance")
    sp.add_argument("--model", choices=list(MODEL_TAGS), default="da")
    sp.add_argument("--no-valid-ineqs", action="store_true")
    sp.add_argument("--lp-out")
    sp.set_defaults(func=cmd_export)

    sp = sub.add_parser("generate", help="write a generated instance in the native format")
    sp.add_argument("kind", choices=["3sat", "rsa", "random"])
    sp.add_argument("--cnf")
    sp.add_argument("--points")
    sp.add_argument("--symmetric", action="store_true")
    sp.add_argument("--n", type=int, default=8)
    sp.add_argument("--density", type=float, default=0.3)
    sp.add_argument("--max-cost", type=int, default=100)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("-o", "--output")
    sp.set_defaults(func=cmd_generate)

    sp = sub.add_parser("validate", help="check an instance and optionally a tree")
    sp.add_argument("instance")
    sp.add_argument("--tree", help="file of 'parent child' lines")
    sp.set_defaults(func=cmd_validate)

    sp = sub.add_parser("bench", help="run instances and write a report")
    sp.add_argument("instances", nargs="*", help="instance files, benchmark names or manifest .txt files")
    common(sp)
    sp.add_argument("--model", action="append", choices=list(MODEL_TAGS))
    sp.add_argument("--no-valid-ineqs", action="store_true")
    sp.add_argument("--lp-solver", choices=["simplex", "highs"], default="simplex")
    sp.add_argument("--csv")
    sp.add_argument("--seed", type=int, default=0, help="accepted for reproducibility; the solvers are deterministic")
    sp.set_defaults(func=cmd_bench)

    sp = sub.add_parser("oracle", help="brute-force optimum of a tiny instance")
    sp.add_argument("instance")
    sp.add_argument("--problem", choices=["pcmca", "pcmca-wt"], default="pcmca")
    sp.add_argument("--cap", type=int, default=8)
    sp.set_defaults(func=cmd_oracle)
    return p


def main(argv: list[str] | None = None) -> int:
    _setup_logging()
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except SystemExit as exc:  # --help and --version
        return exc.code if isinstance(exc.code, int) else EXIT_OK
    except _Usage as exc:
        print(f"arbx: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except FileNotFoundError as exc:
        print(f"arbx: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except InstanceError as exc:
        print(f"arbx: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
