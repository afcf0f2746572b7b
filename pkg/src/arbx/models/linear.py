"""Formulation-agnostic MILP container."""
from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Iterable, Mapping

SENSES = ("<=", "=", ">=")


@dataclass(frozen=True)
class Variable:
    name: str
    kind: str = "continuous"  # or "binary"
    lb: float = 0.0
    ub: float = math.inf

    def __post_init__(self):
        if self.kind not in ("binary", "continuous"):
            raise ValueError(f"unknown variable kind {self.kind!r}")
        if self.kind == "binary" and not (0 <= self.lb <= self.ub <= 1):
            raise ValueError(f"binary {self.name} must be bounded within [0, 1]")
        if self.lb > self.ub:
            raise ValueError(f"empty bounds on {self.name}")


@dataclass(frozen=True)
class Constraint:
    name: str
    terms: tuple[tuple[str, float], ...]
    sense: str
    rhs: float

    def __post_init__(self):
        if self.sense not in SENSES:
            raise ValueError(f"unknown sense {self.sense!r}")

    def lhs(self, values: Mapping[str, float]) -> float:
        return sum(c * values.get(v, 0.0) for v, c in self.terms)

    def slack(self, values: Mapping[str, float]) -> float:
        """Amount by which the row is satisfied; negative when violated."""
        lhs = self.lhs(values)
        if self.sense == "<=":
            return self.rhs - lhs
        if self.sense == ">=":
            return lhs - self.rhs
        return -abs(lhs - self.rhs)


@dataclass
class LinearModel:
    """Minimization model: variables, rows, objective and free-form metadata."""

    variables: list[Variable] = field(default_factory=list)
    constraints: list[Constraint] = field(default_factory=list)
    objective: dict[str, float] = field(default_factory=dict)
    metadata: dict[str, object] = field(default_factory=dict)
    _var_index: dict[str, int] = field(default_factory=dict, repr=False, compare=False)
    _row_names: set[str] = field(default_factory=set, repr=False, compare=False)

    def __post_init__(self):
        variables, constraints = self.variables, self.constraints
        self.variables, self.constraints = [], []
        self._var_index, self._row_names = {}, set()
        for v in variables:
            self.add_variable(v)
        for c in constraints:
            self.add_constraint(c)
        for name in self.objective:
            if name not in self._var_index:
                raise ValueError(f"objective uses undeclared variable {name}")

    def add_variable(self, var: Variable) -> Variable:
        if var.name in self._var_index:
            raise ValueError(f"duplicate variable {var.name}")
        self._var_index[var.name] = len(self.variables)
        self.variables.append(var)
        return var

    def add_constraint(self, con: Constraint) -> Constraint:
        if con.name in self._row_names:
            raise ValueError(f"duplicate constraint {con.name}")
        for v, _ in con.terms:
            if v not in self._var_index:
                raise ValueError(f"constraint {con.name} uses undeclared variable {v}")
        self._row_names.add(con.name)
        self.constraints.append(con)
        return con

    def add_row(self, name: str, terms: Iterable[tuple[str, float]], sense: str, rhs: float) -> Constraint:
        merged: dict[str, float] = {}
        for v, c in terms:
            merged[v] = merged.get(v, 0.0) + c
        return self.add_constraint(
            Constraint(name, tuple((v, c) for v, c in merged.items() if c != 0), sense, rhs)
        )

    def set_objective(self, coeffs: Mapping[str, float]) -> None:
        for name in coeffs:
            if name not in self._var_index:
                raise ValueError(f"objective uses undeclared variable {name}")
        self.objective = {v: c for v, c in coeffs.items() if c != 0}

    def variable(self, name: str) -> Variable:
        return self.variables[self._var_index[name]]

    def index(self, name: str) -> int:
        return self._var_index[name]

    def has_variable(self, name: str) -> bool:
        return name in self._var_index

    def has_constraint(self, name: str) -> bool:
        return name in self._row_names

    @property
    def formulation(self) -> str:
        return str(self.metadata.get("formulation", ""))

    def copy(self) -> "LinearModel":
        return LinearModel(list(self.variables), list(self.constraints), dict(self.objective), dict(self.metadata))

    def with_bounds(self, bounds: Mapping[str, tuple[float, float]]) -> "LinearModel":
        """Copy with some variable bounds replaced, e.g. to fix ``x`` to a tree."""
        m = self.copy()
        for name, (lb, ub) in bounds.items():
            k = m._var_index[name]
            m.variables[k] = replace(m.variables[k], lb=lb, ub=ub)
        return m

    def objective_value(self, values: Mapping[str, float]) -> float:
        return sum(c * values.get(v, 0.0) for v, c in self.objective.items())

    def max_violation(self, values: Mapping[str, float]) -> float:
        worst = 0.0
        for c in self.constraints:
            worst = max(worst, -c.slack(values))
        for v in self.variables:
            x = values.get(v.name, 0.0)
            worst = max(worst, v.lb - x, x - v.ub)
        return worst
