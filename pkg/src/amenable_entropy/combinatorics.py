"""Name vectors, Hamming balls, and the explicit counting constant.

A point's name along a finite set F is the vector of partition cells its
orbit visits, one entry per g in F in enumeration order. The number of names
within normalized Hamming distance eps_1 of a given one is the exact
big-integer sum L_n; the constant K makes exp(K eps |F_n|) an upper bound
for L_n, which is the counting input for local entropy lower bounds.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

from .group import GroupElement, GroupSpec, enumerate_prefix
from .shift_space import Pattern, ShiftSpace, act, admissible_patterns

__all__ = [
    "NameVector",
    "enumeration_order",
    "name_of",
    "hamming_distance",
    "normalized_hamming",
    "hamming_ball_count",
    "stirling_K",
    "verify_Ln_bound",
]


@dataclass(frozen=True)
class NameVector:
    """Partition-cell indices along F, in enumeration order."""

    entries: tuple[int, ...]
    num_cells: int

    def __post_init__(self):
        for e in self.entries:
            if not 0 <= e < self.num_cells:
                raise ValueError(f"cell index {e} outside [0, {self.num_cells})")

    def __len__(self) -> int:
        return len(self.entries)


def enumeration_order(group: GroupSpec, cells: Iterable[GroupElement]) -> list[GroupElement]:
    """The cells sorted by their position in the canonical enumeration."""
    wanted = frozenset(cells)
    m = max(1, len(wanted))
    while True:
        prefix = enumerate_prefix(group, m).order
        if wanted <= set(prefix):
            return [g for g in prefix if g in wanted]
        m *= 2


def name_of(space: ShiftSpace, x: Pattern, f: Iterable[GroupElement], r: int = 0) -> NameVector:
    """The (xi, F)-name of x for the depth-r pattern partition.

    Entry for g is the cell of g.x, the index of its E_{r+1} pattern in the
    sorted admissible list; at depth 0 that is just the symbol x(g).
    """
    prefix = enumerate_prefix(space.group, r + 1).order
    elements = admissible_patterns(space, prefix)
    index = {p.key: i for i, p in enumerate(elements)}
    entries = tuple(
        index[act(space.group, g, x, prefix).key]
        for g in enumeration_order(space.group, f)
    )
    return NameVector(entries=entries, num_cells=len(elements))


def hamming_distance(a: NameVector, b: NameVector) -> int:
    if len(a) != len(b):
        raise ValueError(f"name lengths differ: {len(a)} vs {len(b)}")
    return sum(1 for u, v in zip(a.entries, b.entries) if u != v)


def normalized_hamming(a: NameVector, b: NameVector) -> Fraction:
    if not len(a):
        raise ValueError("names must be nonempty")
    return Fraction(hamming_distance(a, b), len(a))


def hamming_ball_count(n: int, eps1: Fraction, cells: int) -> int:
    """L_n = sum_{j <= floor(eps1 n)} C(n, j) (cells - 1)^j, exactly."""
    eps1 = Fraction(eps1)
    if not 0 < eps1 < Fraction(1, 2):
        raise ValueError(f"need 0 < eps1 < 1/2, got {eps1}")
    if cells < 2:
        raise ValueError(f"need at least 2 partition cells, got {cells}")
    if n < 1:
        raise ValueError(f"need n >= 1, got {n}")
    top = int(eps1 * n)  # exact floor of a rational
    return sum(math.comb(n, j) * (cells - 1) ** j for j in range(top + 1))


def stirling_K(eps: float, eps1: float, cells: int) -> float:
    """The constant with exp(K eps n) >= L_n for all n.

    K = (1/eps)(eps1 + eps1 log(cells-1) - eps1 log eps1
        - (1-eps1) log(1-eps1)) + 2, with the 0 log 0 = 0 convention at
    cells = 2. Always exceeds 2, and K eps -> 0 along eps1 -> 0, eps -> 0.
    """
    if not 0 < eps1 < 1:
        raise ValueError(f"need 0 < eps1 < 1, got {eps1}")
    if eps <= 0:
        raise ValueError(f"need eps > 0, got {eps}")
    if cells < 2:
        raise ValueError(f"need at least 2 partition cells, got {cells}")
    inner = eps1 - eps1 * math.log(eps1) - (1 - eps1) * math.log(1 - eps1)
    if cells > 2:
        inner += eps1 * math.log(cells - 1)
    return inner / eps + 2


def verify_Ln_bound(
    n_max: int,
    eps: float,
    eps1: Fraction,
    cells: int,
    k_value: float | None = None,
) -> tuple[bool, int | None]:
    """Check L_n <= exp(K eps n) for all n <= n_max; report the first failure.

    The left side is an exact big integer; the comparison rounds outward, so
    only violations beyond float fuzz are reported. k_value substitutes an
    alternative constant for diagnostics.
    """
    k = stirling_K(eps, float(Fraction(eps1)), cells) if k_value is None else k_value
    for n in range(1, n_max + 1):
        ln = hamming_ball_count(n, eps1, cells)
        rhs = k * eps * n
        margin = 1e-9 * max(1.0, abs(rhs))
        if math.log(ln) > rhs + margin:
            return False, n
    return True, None
