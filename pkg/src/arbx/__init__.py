"""Precedence-constrained minimum-cost arborescences, with and without waiting times."""
from .evaluation import (
    Arborescence,
    TimedSolution,
    WaitInfeasibleError,
    check_precedences,
    entry_times,
    objective_pcmca,
    objective_pcmcawt,
    relative_gap,
    validate_arborescence,
)
from .graph import allowed_predecessors, edmonds_mca, min_cut
from .instance import (
    InfeasibleInstanceError,
    Instance,
    InstanceError,
    ParseError,
    load_instance,
    normalize,
    parse_native,
    parse_sop,
    precedence_density,
    write_native,
    write_sop,
)
from .separation import CutInequality, FractionalSolution, find_violated_inequality, separate_all
from .solver import (
    SizeLimitError,
    SolverLimits,
    SolveStats,
    brute_force_pcmca,
    brute_force_pcmcawt,
    solve_mca,
    solve_pcmca,
    solve_pcmcawt,
)

__version__ = "0.1.0"

__all__ = [
    "Arborescence",
    "CutInequality",
    "FractionalSolution",
    "InfeasibleInstanceError",
    "Instance",
    "InstanceError",
    "ParseError",
    "SizeLimitError",
    "SolveStats",
    "SolverLimits",
    "TimedSolution",
    "WaitInfeasibleError",
    "allowed_predecessors",
    "brute_force_pcmca",
    "brute_force_pcmcawt",
    "check_precedences",
    "edmonds_mca",
    "entry_times",
    "find_violated_inequality",
    "load_instance",
    "min_cut",
    "normalize",
    "objective_pcmca",
    "objective_pcmcawt",
    "parse_native",
    "parse_sop",
    "precedence_density",
    "relative_gap",
    "separate_all",
    "solve_mca",
    "solve_pcmca",
    "solve_pcmcawt",
    "validate_arborescence",
    "write_native",
    "write_sop",
]
