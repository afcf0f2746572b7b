"""CPLEX-style LP text export and a reference reader for round trips.

Every variable is listed in ``Bounds`` in declaration order, so the
reader recovers the exact column order. Metadata travels in comment
lines of the form ``\\ arbx <key> <json value>``.
"""
from __future__ import annotations

import json
import math
import re
from typing import Iterable

from .linear import Constraint, LinearModel, Variable

MAX_LINE = 255

__all__ = ["export_lp", "parse_lp", "format_number"]


def format_number(v: float) -> str:
    if v == int(v) and abs(v) < 1e15:
        return str(int(v))
    return repr(float(v))


def _terms(terms: Iterable[tuple[str, float]]) -> list[str]:
    out = []
    for k, (name, c) in enumerate(terms):
        sign = "-" if c < 0 else "+"
        mag = abs(c)
        body = name if mag == 1 else f"{format_number(mag)} {name}"
        if k == 0:
            out.append(body if sign == "+" else f"- {body}")
        else:
            out.append(f"{sign} {body}")
    return out


def _wrap(head: str, tokens: list[str]) -> list[str]:
    lines = []
    cur = head
    for tok in tokens:
        if len(cur) + 1 + len(tok) > MAX_LINE and cur.strip():
            lines.append(cur)
            cur = "   " + tok
        else:
            cur = f"{cur} {tok}" if cur.strip() else cur + tok
    lines.append(cur)
    return lines


def _bound_line(v: Variable) -> str:
    lo, hi = v.lb, v.ub
    if lo == -math.inf and hi == math.inf:
        return f" {v.name} free"
    lo_s = "-inf" if lo == -math.inf else format_number(lo)
    if hi == math.inf:
        return f" {v.name} >= {lo_s}"
    if lo == hi:
        return f" {v.name} = {lo_s}"
    return f" {lo_s} <= {v.name} <= {format_number(hi)}"


def export_lp(m: LinearModel) -> str:
    out = []
    for key in sorted(m.metadata):
        out.append(f"\\ arbx {key} {json.dumps(m.metadata[key])}")
    out.append("Minimize")
    # an empty expression is written as a zero multiple of the first column
    zero = [f"0 {m.variables[0].name}"] if m.variables else ["0"]
    out += _wrap(" obj:", _terms(m.objective.items()) or zero)
    out.append("Subject To")
    for c in m.constraints:
        tokens = _terms(c.terms) or list(zero)
        tokens += [c.sense, format_number(c.rhs)]
        out += _wrap(f" {c.name}:", tokens)
    out.append("Bounds")
    for v in m.variables:
        out.append(_bound_line(v))
    binaries = [v.name for v in m.variables if v.kind == "binary"]
    if binaries:
        out.append("Binary")
        out += _wrap(" ", binaries)
    out.append("End")
    text = "\n".join(out) + "\n"
    assert all(len(line) <= MAX_LINE for line in text.splitlines())
    return text


_SECTION = {
    "minimize": "obj",
    "minimise": "obj",
    "min": "obj",
    "subject to": "rows",
    "such that": "rows",
    "st": "rows",
    "s.t.": "rows",
    "bounds": "bounds",
    "binary": "binary",
    "binaries": "binary",
    "bin": "binary",
    "end": "end",
}
_ROW_START = re.compile(r"^\s*([A-Za-z_][\w.\[\]]*)\s*:(.*)$")
_TOKEN = re.compile(r"\s*(<=|>=|=<|=>|=|[0-9.]+(?:[eE][+-]?[0-9]+)?|[+-]|[^\s+\-<>=]+)")


def _parse_expr(text: str) -> tuple[list[tuple[str, float]], str | None, float | None]:
    toks = _TOKEN.findall(text)
    terms: list[tuple[str, float]] = []
    sign = 1.0
    coef = None
    sense = None
    rhs = None
    k = 0
    while k < len(toks):
        tok = toks[k]
        k += 1
        if tok in ("+", "-"):
            sign = -sign if tok == "-" else sign
            continue
        if tok in ("<=", ">=", "=", "=<", "=>"):
            sense = {"=<": "<=", "=>": ">="}.get(tok, tok)
            rest = "".join(toks[k:])
            rhs = float(rest)
            break
        try:
            val = float(tok)
        except ValueError:
            terms.append((tok, sign * (1.0 if coef is None else coef)))
            sign, coef = 1.0, None
        else:
            coef = val
    return terms, sense, rhs


def parse_lp(text: str) -> LinearModel:
    """Read an LP file produced by :func:`export_lp`."""
    metadata: dict[str, object] = {}
    section = None
    obj_text: list[str] = []
    rows: list[list[str]] = []
    bounds: list[str] = []
    binaries: list[str] = []
    for raw in text.splitlines():
        line = raw.strip()
        if line.startswith("\\"):
            parts = line[1:].strip().split(None, 2)
            if len(parts) == 3 and parts[0] == "arbx":
                metadata[parts[1]] = json.loads(parts[2])
            continue
        if not line:
            continue
        key = line.lower()
        if key in _SECTION:
            section = _SECTION[key]
            if section == "end":
                break
            continue
        if section == "obj":
            obj_text.append(line)
        elif section == "rows":
            mt = _ROW_START.match(line)
            if mt:
                rows.append([mt.group(1), mt.group(2)])
            else:
                rows[-1][1] += " " + line
        elif section == "bounds":
            bounds.append(line)
        elif section == "binary":
            binaries += line.split()
        else:
            raise ValueError(f"content outside any section: {line!r}")

    order: list[str] = []
    lb: dict[str, float] = {}
    ub: dict[str, float] = {}
    num = r"[+-]?(?:inf|infinity|[0-9.eE+-]+)"
    for b in bounds:
        if mt := re.fullmatch(rf"({num})\s*<=\s*(\S+)\s*<=\s*({num})", b, re.I):
            name, lo, hi = mt.group(2), float(mt.group(1)), float(mt.group(3))
        elif mt := re.fullmatch(rf"(\S+)\s*>=\s*({num})", b, re.I):
            name, lo, hi = mt.group(1), float(mt.group(2)), math.inf
        elif mt := re.fullmatch(rf"(\S+)\s*<=\s*({num})", b, re.I):
            name, lo, hi = mt.group(1), 0.0, float(mt.group(2))
        elif mt := re.fullmatch(rf"(\S+)\s*=\s*({num})", b, re.I):
            name = mt.group(1)
            lo = hi = float(mt.group(2))
        elif mt := re.fullmatch(r"(\S+)\s+free", b, re.I):
            name, lo, hi = mt.group(1), -math.inf, math.inf
        else:
            raise ValueError(f"unreadable bound line {b!r}")
        if name not in lb:
            order.append(name)
        lb[name], ub[name] = lo, hi

    body = " ".join(obj_text)
    mt = _ROW_START.match(body)
    obj_terms, _, _ = _parse_expr(mt.group(2) if mt else body)
    parsed_rows = []
    for name, expr in rows:
        terms, sense, rhs = _parse_expr(expr)
        if sense is None:
            raise ValueError(f"row {name} has no sense")
        parsed_rows.append(Constraint(name, tuple(terms), sense, rhs))
    for name, _ in obj_terms:
        if name not in lb:
            order.append(name)
            lb[name], ub[name] = 0.0, math.inf
    for c in parsed_rows:
        for name, _ in c.terms:
            if name not in lb:
                order.append(name)
                lb[name], ub[name] = 0.0, math.inf
    bin_set = set(binaries)
    variables = []
    for name in order:
        if name in bin_set:
            variables.append(Variable(name, "binary", max(lb[name], 0.0), min(ub[name], 1.0)))
        else:
            variables.append(Variable(name, "continuous", lb[name], ub[name]))
    obj: dict[str, float] = {}
    for name, c in obj_terms:
        obj[name] = obj.get(name, 0.0) + c
    rows_clean = [Constraint(c.name, tuple((v, a) for v, a in c.terms if a != 0), c.sense, c.rhs) for c in parsed_rows]
    return LinearModel(variables, rows_clean, {v: c for v, c in obj.items() if c != 0}, metadata)
