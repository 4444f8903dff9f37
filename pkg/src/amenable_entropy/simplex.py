"""Exact rational linear programming by the two-phase simplex method.

Problems are min c.x subject to sparse rows A_i.x (<=, >=, ==) b_i and x >= 0,
with every coefficient a Fraction. Rows are kept as dicts, which suits the
0/1 incidence structure of covering and packing programs. Bland's smallest
index rule is used throughout, so the method cannot cycle; speed is adequate
at desk scale and exactness is the point, certified duality gaps and exact
inequality comparisons are downstream of this module.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Sequence

__all__ = ["LPResult", "solve_lp", "Infeasible", "Unbounded"]


class Infeasible(RuntimeError):
    pass


class Unbounded(RuntimeError):
    pass


@dataclass
class LPResult:
    x: dict[int, Fraction]
    value: Fraction


def solve_lp(
    objective: Mapping[int, Fraction],
    rows: Sequence[Mapping[int, Fraction]],
    senses: Sequence[str],
    rhs: Sequence[Fraction],
    num_vars: int,
    maximize: bool = False,
) -> LPResult:
    """Solve min (or max) objective.x over A x (sense) b, x >= 0, exactly."""
    if len(rows) != len(senses) or len(rows) != len(rhs):
        raise ValueError("rows, senses and rhs must align")
    m = len(rows)
    # normalize to equality form with rhs >= 0; slack/surplus then artificials
    eq_rows: list[dict[int, Fraction]] = []
    eq_rhs: list[Fraction] = []
    next_var = num_vars
    basis: list[int] = []
    artificials: set[int] = set()
    for row, sense, b in zip(rows, senses, rhs):
        r = {j: Fraction(v) for j, v in row.items() if v}
        b = Fraction(b)
        if sense not in ("<=", ">=", "=="):
            raise ValueError(f"bad sense {sense!r}")
        if b < 0:
            r = {j: -v for j, v in r.items()}
            b = -b
            sense = {"<=": ">=", ">=": "<=", "==": "=="}[sense]
        if sense == "<=":
            r[next_var] = Fraction(1)
            basis.append(next_var)
            next_var += 1
        elif sense == ">=":
            r[next_var] = Fraction(-1)
            next_var += 1
            r[next_var] = Fraction(1)
            basis.append(next_var)
            artificials.add(next_var)
            next_var += 1
        else:
            r[next_var] = Fraction(1)
            basis.append(next_var)
            artificials.add(next_var)
            next_var += 1
        eq_rows.append(r)
        eq_rhs.append(b)

    if artificials:
        phase1 = {j: Fraction(1) for j in artificials}
        value = _run_simplex(eq_rows, eq_rhs, basis, phase1, next_var)
        if value != 0:
            raise Infeasible(f"phase 1 optimum {value} > 0")
        _drive_out_artificials(eq_rows, eq_rhs, basis, artificials)

    sign = Fraction(-1) if maximize else Fraction(1)
    cost = {j: sign * Fraction(v) for j, v in objective.items() if v}
    value = _run_simplex(eq_rows, eq_rhs, basis, cost, next_var, forbidden=artificials)
    x = {j: Fraction(0) for j in range(num_vars)}
    for r, j in enumerate(basis):
        if j < num_vars:
            x[j] = eq_rhs[r]
    return LPResult(x=x, value=sign * value)


def _run_simplex(
    rows: list[dict[int, Fraction]],
    rhs: list[Fraction],
    basis: list[int],
    cost: Mapping[int, Fraction],
    num_vars: int,
    forbidden: set[int] | None = None,
) -> Fraction:
    """Primal simplex with Bland's rule on the given basis; mutates in place."""
    m = len(rows)
    forbidden = forbidden or set()

    def reduced_costs() -> dict[int, Fraction]:
        # z_j = c_j - sum over basic rows of c_B[i] * a_ij, recomputed from
        # scratch each pivot; exact and cheap at the sparse sizes used here
        red = {j: Fraction(v) for j, v in cost.items() if v}
        for i, bj in enumerate(basis):
            cb = cost.get(bj, Fraction(0))
            if cb:
                for j, a in rows[i].items():
                    red[j] = red.get(j, Fraction(0)) - cb * a
        basic = set(basis)
        return {j: v for j, v in red.items() if j not in basic and v < 0}

    while True:
        red = reduced_costs()
        entering = None
        for j in sorted(red):
            if j not in forbidden:
                entering = j
                break
        if entering is None:
            return _objective_value(rows, rhs, basis, cost)
        leaving = None
        best = None
        for i in range(m):
            a = rows[i].get(entering, Fraction(0))
            if a > 0:
                ratio = rhs[i] / a
                if best is None or ratio < best or (ratio == best and basis[i] < basis[leaving]):
                    best = ratio
                    leaving = i
        if leaving is None:
            raise Unbounded(f"column {entering} is unbounded")
        _pivot(rows, rhs, basis, leaving, entering)


def _objective_value(rows, rhs, basis, cost) -> Fraction:
    return sum(cost.get(bj, Fraction(0)) * rhs[i] for i, bj in enumerate(basis))


def _pivot(rows, rhs, basis, leaving: int, entering: int) -> None:
    prow = rows[leaving]
    piv = prow[entering]
    if piv != 1:
        rows[leaving] = prow = {j: v / piv for j, v in prow.items() if v}
        rhs[leaving] = rhs[leaving] / piv
    for i in range(len(rows)):
        if i == leaving:
            continue
        a = rows[i].get(entering)
        if a:
            ri = rows[i]
            for j, v in prow.items():
                nv = ri.get(j, Fraction(0)) - a * v
                if nv:
                    ri[j] = nv
                else:
                    ri.pop(j, None)
            rhs[i] = rhs[i] - a * rhs[leaving]
    basis[leaving] = entering


def _drive_out_artificials(rows, rhs, basis, artificials: set[int]) -> None:
    """Pivot artificial variables out of the basis; drop redundant rows' pivots."""
    for i in range(len(rows)):
        if basis[i] in artificials:
            entering = None
            for j in sorted(rows[i]):
                if j not in artificials and rows[i][j] != 0:
                    entering = j
                    break
            if entering is not None:
                _pivot(rows, rhs, basis, i, entering)
            # else: the row is 0 = 0, harmless; the artificial stays basic at 0
