"""Benchmark harness: one report row per (instance, formulation)."""
from __future__ import annotations

import csv
import io
import math
import os
import time
from dataclasses import dataclass, fields
from pathlib import Path
from typing import Iterable, Sequence

from .evaluation import relative_gap
from .instance import Instance, load_instance, precedence_density
from .models.cutting import solve_lr_with_cuts
from .solver import SolverLimits, solve_mca, solve_pcmca, solve_pcmcawt

__all__ = [
    "ReportRow",
    "BenchConfig",
    "SOP_DIR_ENV",
    "find_benchmark_file",
    "read_manifest",
    "solve_problem",
    "run_benchmark",
    "average_row",
    "rows_to_csv",
    "rows_from_csv",
]

SOP_DIR_ENV = "ARBX_SOP_DIR"
PROBLEMS = ("mca", "pcmca", "pcmca-wt")


@dataclass
class ReportRow:
    Name: str
    Size: int | str
    DensityOfP: str
    zStar: str
    Cuts: int | str
    Nodes: int | str
    TimeSeconds: str
    GapPercent: str
    Status: str
    Formulation: str
    Problem: str
    Solved: str

    def as_list(self) -> list[str]:
        return [str(getattr(self, f.name)) for f in fields(self)]


@dataclass(frozen=True)
class BenchConfig:
    problem: str = "pcmca"
    # formulations whose relaxation is reported; empty means exact solve only
    formulations: tuple[str, ...] = ()
    limits: SolverLimits = SolverLimits()
    with_valid_ineqs: bool = True
    lp_solver: str = "simplex"

    def __post_init__(self):
        if self.problem not in PROBLEMS:
            raise ValueError(f"unknown problem {self.problem!r}")


def find_benchmark_file(name: str, extra_dirs: Sequence[str | os.PathLike] = ()) -> Path:
    """Resolve a path or a bare benchmark name (``ESC07``, ``br17.10``).

    Bare names are looked up in ``$ARBX_SOP_DIR`` and the given
    directories, trying the name as given, lower-cased and with ``.sop``.
    """
    p = Path(name)
    if p.is_file():
        return p
    dirs = [Path(d) for d in extra_dirs]
    if os.environ.get(SOP_DIR_ENV):
        dirs.insert(0, Path(os.environ[SOP_DIR_ENV]))
    for d in dirs:
        for cand in (name, name.lower(), name + ".sop", name.lower() + ".sop"):
            if (d / cand).is_file():
                return d / cand
    where = ", ".join(str(d) for d in dirs) or f"(set ${SOP_DIR_ENV})"
    raise FileNotFoundError(f"benchmark instance {name!r} not found in {where}")


def read_manifest(path: str | os.PathLike) -> list[Path]:
    """One instance path or benchmark name per line; ``#`` starts a comment."""
    base = Path(path).parent
    out = []
    for raw in Path(path).read_text().splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        cand = base / line
        out.append(cand if cand.is_file() else find_benchmark_file(line, [base]))
    return out


def solve_problem(inst: Instance, problem: str, limits: SolverLimits = SolverLimits()):
    """``(value or None, stats)`` for the exact solver of ``problem``."""
    if problem == "mca":
        tree, st = solve_mca(inst)
        return (None if tree is None else tree.cost), st
    if problem == "pcmca":
        tree, st = solve_pcmca(inst, limits)
        return (None if tree is None else tree.cost), st
    if problem == "pcmca-wt":
        ts, st = solve_pcmcawt(inst, limits)
        return (None if ts is None else ts.objective), st
    raise ValueError(f"unknown problem {problem!r}")


def _fmt(v, digits=3) -> str:
    if v is None or (isinstance(v, float) and math.isnan(v)):
        return ""
    if isinstance(v, float) and not v.is_integer():
        return f"{v:.{digits}f}"
    return str(int(v)) if isinstance(v, float) else str(v)


def _row_for(inst: Instance, cfg: BenchConfig, formulation: str, exact) -> ReportRow:
    value, st, seconds = exact
    density = f"{precedence_density(inst):.3f}" if inst.n >= 2 else ""
    if st.status == "optimal":
        zstar = _fmt(value)
    elif st.status == "infeasible":
        zstar = ""
    else:
        zstar = f"[{_fmt(st.lower_bound)},{_fmt(st.upper_bound)}]"
    cuts, nodes, gap, status = st.cuts, st.nodes, "", st.status
    if formulation == "exact":
        if st.status in ("optimal", "feasible") and st.upper_bound > 0:
            gap = f"{relative_gap(st.upper_bound, st.lower_bound):.3f}"
    else:
        start = time.perf_counter()
        lr = solve_lr_with_cuts(inst, formulation, with_valid_ineqs=cfg.with_valid_ineqs, lp_solver=cfg.lp_solver)
        seconds = time.perf_counter() - start
        cuts, nodes = lr.cuts, lr.rounds
        if lr.status != "optimal":
            status = f"lr-{lr.status}"
        elif st.status == "optimal" and value and value > 0:
            gap = f"{relative_gap(value, lr.value):.3f}"
    return ReportRow(
        Name=inst.name,
        Size=inst.n,
        DensityOfP=density,
        zStar=zstar,
        Cuts=cuts,
        Nodes=nodes,
        TimeSeconds=f"{seconds:.3f}",
        GapPercent=gap,
        Status=status,
        Formulation=formulation,
        Problem=cfg.problem,
        Solved="1" if status == "optimal" else "0",
    )


def average_row(rows: Sequence[ReportRow], cfg: BenchConfig) -> ReportRow:
    """Means over the optimal rows; ``Solved`` reads ``k/total``."""
    ok = [r for r in rows if r.Status == "optimal"]

    def mean(attr):
        vals = []
        for r in ok:
            try:
                vals.append(float(getattr(r, attr)))
            except (TypeError, ValueError):
                pass
        return f"{sum(vals) / len(vals):.3f}" if vals else ""

    return ReportRow(
        Name="Average",
        Size=mean("Size"),
        DensityOfP=mean("DensityOfP"),
        zStar=mean("zStar"),
        Cuts=mean("Cuts"),
        Nodes=mean("Nodes"),
        TimeSeconds=mean("TimeSeconds"),
        GapPercent=mean("GapPercent"),
        Status="",
        Formulation=",".join(cfg.formulations) or "exact",
        Problem=cfg.problem,
        Solved=f"{len(ok)}/{len(rows)}",
    )


def run_benchmark(manifest: Iterable[Instance | str | os.PathLike], config: BenchConfig = BenchConfig()) -> list[ReportRow]:
    """Rows in manifest order, then formulation order; an ``Average`` row
    closes a non-empty report. A failing instance yields an ``error`` row."""
    rows: list[ReportRow] = []
    forms = config.formulations or ("exact",)
    for item in manifest:
        try:
            inst = item if isinstance(item, Instance) else load_instance(item)
        except (OSError, ValueError) as exc:
            name = Path(item).stem if not isinstance(item, Instance) else item.name
            for f in forms:
                rows.append(ReportRow(name, "", "", "", "", "", "", "", f"error: {exc}", f, config.problem, "0"))
            continue
        start = time.perf_counter()
        value, st = solve_problem(inst, config.problem, config.limits)
        exact = (value, st, time.perf_counter() - start)
        for f in forms:
            rows.append(_row_for(inst, config, f, exact))
    if rows:
        rows.append(average_row(rows, config))
    return rows


HEADER = [f.name for f in fields(ReportRow)]


def rows_to_csv(rows: Sequence[ReportRow]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\r\n")
    w.writerow(HEADER)
    for r in rows:
        w.writerow(r.as_list())
    return buf.getvalue()


def rows_from_csv(text: str) -> list[ReportRow]:
    rd = csv.reader(io.StringIO(text, newline=""))
    header = next(rd)
    if header != HEADER:
        raise ValueError(f"unexpected CSV header {header}")
    out = []
    for rec in rd:
        d = dict(zip(HEADER, rec))
        out.append(ReportRow(**d))
    return out
