"""Invariant measures on shift spaces: Bernoulli products and Z Markov chains.

All cylinder masses are exact rationals; logarithms appear only when a profile
value is reported. Markov chains require an irreducible row-stochastic rational
matrix with an exact stationary vector (computed by rational elimination when
omitted); aperiodicity is not needed by anything here and is not checked.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Sequence

from .errors import WindowError
from .group import FolnerSequence, GroupElement, GroupSpec
from .shift_space import Cylinder, MetricSpec, Pattern, bowen_ball, bowen_window

__all__ = [
    "ProductMeasure",
    "bernoulli",
    "markov_chain",
    "golden_mean_parry",
    "LocalEntropyEstimate",
    "cylinder_mass",
    "bowen_ball_mass",
    "local_entropy_profile",
    "smb_estimate",
    "ergodic_average",
    "sample",
    "measure_entropy",
]

BERNOULLI = "bernoulli"
MARKOV = "markov"


@dataclass(frozen=True)
class ProductMeasure:
    """A Bernoulli product measure or a stationary Z Markov measure."""

    kind: str
    probs: tuple[Fraction, ...] = ()
    transition: tuple[tuple[Fraction, ...], ...] = ()
    stationary: tuple[Fraction, ...] = ()

    @property
    def num_symbols(self) -> int:
        return len(self.probs) if self.kind == BERNOULLI else len(self.transition)


def bernoulli(probs: Sequence[Fraction | int | str]) -> ProductMeasure:
    ps = tuple(Fraction(p) for p in probs)
    if len(ps) < 2:
        raise ValueError("need at least two symbols")
    if any(p < 0 for p in ps) or sum(ps) != 1:
        raise ValueError(f"probabilities must be nonnegative and sum to 1, got {ps}")
    return ProductMeasure(BERNOULLI, probs=ps)


def _solve_stationary(p: tuple[tuple[Fraction, ...], ...]) -> tuple[Fraction, ...]:
    """Exact stationary row vector of an irreducible stochastic matrix."""
    n = len(p)
    # solve pi (P - I) = 0 with sum pi = 1: transpose to columns, replace one
    # equation by the normalization, then eliminate over the rationals
    rows = [[p[j][i] - (1 if i == j else 0) for j in range(n)] + [Fraction(0)] for i in range(n)]
    rows[n - 1] = [Fraction(1)] * n + [Fraction(1)]
    for col in range(n):
        piv = next((r for r in range(col, n) if rows[r][col] != 0), None)
        if piv is None:
            raise ValueError("transition matrix is reducible or degenerate")
        rows[col], rows[piv] = rows[piv], rows[col]
        inv = 1 / rows[col][col]
        rows[col] = [v * inv for v in rows[col]]
        for r in range(n):
            if r != col and rows[r][col] != 0:
                f = rows[r][col]
                rows[r] = [a - f * b for a, b in zip(rows[r], rows[col])]
    return tuple(rows[i][n] for i in range(n))


def _irreducible(p: tuple[tuple[Fraction, ...], ...]) -> bool:
    n = len(p)
    reach = [{j for j in range(n) if p[i][j] > 0} for i in range(n)]
    for i in range(n):
        seen = {i}
        stack = [i]
        while stack:
            cur = stack.pop()
            for j in reach[cur]:
                if j not in seen:
                    seen.add(j)
                    stack.append(j)
        if len(seen) != n:
            return False
    return True


def markov_chain(
    transition: Sequence[Sequence[Fraction | int | str]],
    stationary: Sequence[Fraction | int | str] | None = None,
) -> ProductMeasure:
    p = tuple(tuple(Fraction(v) for v in row) for row in transition)
    n = len(p)
    if n < 2 or any(len(row) != n for row in p):
        raise ValueError("transition matrix must be square with size >= 2")
    for row in p:
        if any(v < 0 for v in row) or sum(row) != 1:
            raise ValueError(f"rows must be stochastic, got {row}")
    if not _irreducible(p):
        raise ValueError("transition matrix must be irreducible")
    pi = tuple(Fraction(v) for v in stationary) if stationary is not None else _solve_stationary(p)
    if sum(pi) != 1 or any(v < 0 for v in pi):
        raise ValueError(f"stationary vector must be a distribution, got {pi}")
    for j in range(n):
        if sum(pi[i] * p[i][j] for i in range(n)) != pi[j]:
            raise ValueError("stationary vector fails pi P = pi exactly")
    return ProductMeasure(MARKOV, transition=p, stationary=pi)


def golden_mean_parry(convergent: int = 19) -> ProductMeasure:
    """Rational approximation of the Parry chain on the golden mean shift.

    P(0->0) is the Fibonacci convergent F_k / F_{k+1} of 1/phi, which makes the
    rows exactly stochastic and keeps every cylinder mass rational; the entropy
    rate differs from log phi by about phi^(-2k).
    """
    a, b = 1, 1
    for _ in range(convergent):
        a, b = b, a + b
    p00 = Fraction(a, b)  # F_k / F_{k+1}
    p = ((p00, 1 - p00), (Fraction(1), Fraction(0)))
    return markov_chain(p)


def cylinder_mass(mu: ProductMeasure, c: Cylinder | Pattern) -> Fraction:
    """Exact measure of a cylinder; Markov windows must be integer intervals."""
    pat = c.pattern if isinstance(c, Cylinder) else c
    if mu.kind == BERNOULLI:
        counts = [0] * mu.num_symbols
        for s in pat.cells.values():
            if s >= mu.num_symbols:
                raise ValueError(f"symbol {s} outside the measure's alphabet")
            counts[s] += 1
        mass = Fraction(1)
        for p, cnt in zip(mu.probs, counts):
            if cnt:
                mass *= p**cnt
        return mass
    cells = sorted(pat.window)
    if any(len(c0) != 1 for c0 in cells):
        raise WindowError("Markov measures are defined on Z windows only")
    lo, hi = cells[0][0], cells[-1][0]
    if hi - lo + 1 != len(cells):
        raise WindowError(f"Markov window must be an interval, got gaps in [{lo},{hi}]")
    syms = [pat[(i,)] for i in range(lo, hi + 1)]
    if any(s >= mu.num_symbols for s in syms):
        raise ValueError("symbol outside the measure's alphabet")
    mass = mu.stationary[syms[0]]
    for a, b in zip(syms, syms[1:]):
        mass *= mu.transition[a][b]
    return mass


def bowen_ball_mass(
    mu: ProductMeasure, metric: MetricSpec, x: Pattern, f: Iterable[GroupElement], eps: Fraction
) -> Fraction:
    return cylinder_mass(mu, bowen_ball(metric, x, f, eps))


@dataclass(frozen=True)
class LocalEntropyEstimate:
    """Finite-scale local entropy profile with tail proxies.

    values holds (n, -log mu(B_{F_n}(x, eps)) / |F_n|); the liminf and limsup
    proxies are the min and max over the last quarter of the rows.
    """

    eps: Fraction
    values: tuple[tuple[int, float], ...]
    liminf_proxy: float
    limsup_proxy: float


def _tail(rows: list[tuple[int, float]]) -> tuple[float, float]:
    tail = rows[-max(1, len(rows) // 4):]
    vals = [v for _, v in tail]
    return min(vals), max(vals)


def local_entropy_profile(
    mu: ProductMeasure,
    metric: MetricSpec,
    x: Pattern,
    seq: FolnerSequence,
    eps: Fraction,
    ns: Sequence[int],
) -> LocalEntropyEstimate:
    """Brin-Katok style profile along the Folner sequence at radius eps."""
    rows = []
    for n in ns:
        f = seq.subset(n)
        mass = bowen_ball_mass(mu, metric, x, f, eps)
        rows.append((n, _neglog(mass) / len(f)))
    lo, hi = _tail(rows)
    return LocalEntropyEstimate(Fraction(eps), tuple(rows), lo, hi)


def smb_estimate(
    mu: ProductMeasure, x: Pattern, seq: FolnerSequence, ns: Sequence[int]
) -> LocalEntropyEstimate:
    """Shannon-McMillan-Breiman profile: -log mu(xi_{F_n}(x)) / |F_n|.

    The partition cell xi_{F_n}(x) is the cylinder of x on F_n, so at
    eps = 1/2 this agrees with local_entropy_profile exactly (E_1 = {e}).
    """
    rows = []
    for n in ns:
        f = seq.subset(n)
        mass = cylinder_mass(mu, x.restrict(f))
        rows.append((n, _neglog(mass) / len(f)))
    lo, hi = _tail(rows)
    return LocalEntropyEstimate(Fraction(1, 2), tuple(rows), lo, hi)


def _neglog(mass: Fraction) -> float:
    if mass <= 0:
        raise ValueError("cylinder has zero mass; the point is outside the support")
    return math.log(mass.denominator) - math.log(mass.numerator)


def ergodic_average(
    f: Callable[[int], float] | dict[int, float],
    x: Pattern,
    seq: FolnerSequence,
    ns: Sequence[int],
) -> list[tuple[int, float]]:
    """Averages (1/|F_n|) sum_{g in F_n} f((g.x)(e)); note (g.x)(e) = x(g)."""
    fn = f.__getitem__ if isinstance(f, dict) else f
    out = []
    for n in ns:
        cells = seq.subset(n)
        out.append((n, sum(fn(x[g]) for g in cells) / len(cells)))
    return out


def sample(mu: ProductMeasure, window: Iterable[GroupElement], seed: int) -> Pattern:
    """Seeded sample of mu restricted to the window (sorted-cell draw order)."""
    cells = sorted(frozenset(window))
    rng = random.Random(seed)
    if mu.kind == BERNOULLI:
        cum = []
        acc = 0.0
        for p in mu.probs:
            acc += float(p)
            cum.append(acc)
        out = {}
        for c in cells:
            r = rng.random()
            out[c] = next(i for i, t in enumerate(cum) if r < t or i == len(cum) - 1)
        return Pattern(out)
    if any(len(c) != 1 for c in cells):
        raise WindowError("Markov measures sample on Z windows only")
    lo, hi = cells[0][0], cells[-1][0]
    if hi - lo + 1 != len(cells):
        raise WindowError("Markov sampling needs an interval window")

    def draw(dist: Sequence[Fraction]) -> int:
        r = rng.random()
        acc = 0.0
        for i, p in enumerate(dist):
            acc += float(p)
            if r < acc:
                return i
        return len(dist) - 1

    out = {}
    state = draw(mu.stationary)
    out[(lo,)] = state
    for i in range(lo + 1, hi + 1):
        state = draw(mu.transition[state])
        out[(i,)] = state
    return Pattern(out)


def measure_entropy(mu: ProductMeasure) -> float:
    """Closed-form entropy rate in nats."""
    if mu.kind == BERNOULLI:
        return -sum(float(p) * math.log(p) for p in mu.probs if p > 0)
    total = 0.0
    for pi_i, row in zip(mu.stationary, mu.transition):
        for p in row:
            if p > 0:
                total -= float(pi_i) * float(p) * math.log(p)
    return total
