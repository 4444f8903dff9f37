"""Discrete amenable groups, Folner sequences, and enumeration prefixes.

Elements are integer coordinate tuples. Two families are provided: Z^d with
componentwise addition, and the discrete Heisenberg group on Z^3 with
(a, b, c) * (a', b', c') = (a + a', b + b', c + c' + a * b').

The canonical enumeration orders elements by word length over the symmetric
generating set, breaking ties lexicographically on coordinates, starting at
the identity. Any fixed enumeration induces an equivalent metric on the shift
space; this one is pinned so that results are reproducible.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

__all__ = [
    "GroupElement",
    "FiniteSubset",
    "GroupSpec",
    "Enumeration",
    "FolnerSequence",
    "zd",
    "heisenberg",
    "product_set",
    "inverse_set",
    "folner_defect",
    "shulman_profile",
    "shulman_constant",
    "growth_ratios",
    "enumerate_prefix",
]

GroupElement = tuple  # tuple[int, ...]
FiniteSubset = frozenset  # frozenset[GroupElement]

ZD = "zd"
HEISENBERG = "heisenberg"


@dataclass(frozen=True)
class GroupSpec:
    """A finitely generated group given by kind and coordinate arity."""

    kind: str
    d: int = 1

    def __post_init__(self) -> None:
        if self.kind not in (ZD, HEISENBERG):
            raise ValueError(f"unknown group kind {self.kind!r}")
        if self.kind == ZD and self.d < 1:
            raise ValueError(f"Z^d needs d >= 1, got {self.d}")
        if self.kind == HEISENBERG and self.d != 3:
            raise ValueError("heisenberg elements have exactly 3 coordinates")

    @property
    def arity(self) -> int:
        return self.d

    def identity(self) -> GroupElement:
        return (0,) * self.arity

    def mul(self, g: GroupElement, h: GroupElement) -> GroupElement:
        self._check(g)
        self._check(h)
        if self.kind == ZD:
            return tuple(a + b for a, b in zip(g, h))
        a, b, c = g
        x, y, z = h
        return (a + x, b + y, c + z + a * y)

    def inv(self, g: GroupElement) -> GroupElement:
        self._check(g)
        if self.kind == ZD:
            return tuple(-a for a in g)
        a, b, c = g
        return (-a, -b, -c + a * b)

    def generators(self) -> tuple[GroupElement, ...]:
        """Symmetric generating set; for Heisenberg the x, y pair suffices."""
        if self.kind == ZD:
            gens = []
            for i in range(self.d):
                e = [0] * self.d
                e[i] = 1
                gens.append(tuple(e))
                e2 = [0] * self.d
                e2[i] = -1
                gens.append(tuple(e2))
            return tuple(sorted(gens))
        return ((-1, 0, 0), (0, -1, 0), (0, 1, 0), (1, 0, 0))

    def _check(self, g: GroupElement) -> None:
        if len(g) != self.arity:
            raise ValueError(f"element {g!r} has arity {len(g)}, expected {self.arity}")


def zd(d: int = 1) -> GroupSpec:
    return GroupSpec(ZD, d)


def heisenberg() -> GroupSpec:
    return GroupSpec(HEISENBERG, 3)


@dataclass(frozen=True)
class Enumeration:
    """A prefix of the canonical total order on group elements."""

    group: GroupSpec
    order: tuple[GroupElement, ...]

    def __post_init__(self) -> None:
        if not self.order or self.order[0] != self.group.identity():
            raise ValueError("enumeration must start at the identity")

    def __len__(self) -> int:
        return len(self.order)


def enumerate_prefix(group: GroupSpec, m: int) -> Enumeration:
    """First m elements: BFS word-length layers, lexicographic within a layer."""
    if m < 1:
        raise ValueError(f"prefix length must be >= 1, got {m}")
    gens = group.generators()
    seen = {group.identity()}
    order = [group.identity()]
    layer = [group.identity()]
    while len(order) < m:
        nxt = set()
        for g in layer:
            for s in gens:
                h = group.mul(g, s)
                if h not in seen:
                    nxt.add(h)
        if not nxt:
            raise ValueError("generating set does not reach enough elements")
        layer = sorted(nxt)
        seen.update(layer)
        order.extend(layer)
    return Enumeration(group, tuple(order[:m]))


@dataclass(frozen=True)
class FolnerSequence:
    """Folner sequence F_1, F_2, ... given by a rule.

    rule "box": Z^d boxes [0,n)^d; Heisenberg boxes [0,n) x [0,n) x [0,n^2).
    rule "explicit": a fixed tuple of finite subsets, F_n = sets[n-1].
    """

    group: GroupSpec
    rule: str = "box"
    sets: tuple[FiniteSubset, ...] | None = None

    def __post_init__(self) -> None:
        if self.rule not in ("box", "explicit"):
            raise ValueError(f"unknown Folner rule {self.rule!r}")
        if self.rule == "explicit":
            if not self.sets:
                raise ValueError("explicit rule needs a nonempty tuple of sets")
        elif self.sets is not None:
            raise ValueError("sets are only allowed with the explicit rule")

    def subset(self, n: int) -> FiniteSubset:
        if n < 1:
            raise ValueError(f"Folner index must be >= 1, got {n}")
        if self.rule == "explicit":
            if n > len(self.sets):
                raise ValueError(f"explicit sequence has {len(self.sets)} sets, asked for F_{n}")
            return self.sets[n - 1]
        if self.group.kind == ZD:
            cells = [()]
            for _ in range(self.group.d):
                cells = [c + (i,) for c in cells for i in range(n)]
            return frozenset(cells)
        return frozenset(
            (a, b, c) for a in range(n) for b in range(n) for c in range(n * n)
        )

    def size(self, n: int) -> int:
        if self.rule == "explicit":
            return len(self.subset(n))
        if self.group.kind == ZD:
            return n**self.group.d
        return n**4

    def max_index(self) -> int | None:
        return len(self.sets) if self.rule == "explicit" else None


def product_set(group: GroupSpec, a: Iterable[GroupElement], b: Iterable[GroupElement]) -> FiniteSubset:
    """The product set AB = {xy : x in A, y in B}."""
    bl = list(b)
    return frozenset(group.mul(x, y) for x in a for y in bl)


def inverse_set(group: GroupSpec, a: Iterable[GroupElement]) -> FiniteSubset:
    return frozenset(group.inv(x) for x in a)


def folner_defect(group: GroupSpec, f: Iterable[GroupElement], g: GroupElement) -> Fraction:
    """|F symm-diff gF| / |F| for the left translate gF, as an exact rational."""
    fs = frozenset(f)
    if not fs:
        raise ValueError("Folner defect of the empty set is undefined")
    gf = frozenset(group.mul(g, x) for x in fs)
    return Fraction(len(fs ^ gf), len(fs))


def shulman_profile(seq: FolnerSequence, n_max: int) -> list[tuple[int, Fraction]]:
    """Rows (n, |union_{k<n} F_k^{-1} F_n| / |F_n|) for 2 <= n <= n_max."""
    if n_max < 2:
        raise ValueError(f"need n_max >= 2, got {n_max}")
    group = seq.group
    inv_union: set[GroupElement] = set()
    rows: list[tuple[int, Fraction]] = []
    for n in range(1, n_max + 1):
        fn = seq.subset(n)
        if n >= 2:
            prod = product_set(group, inv_union, fn)
            rows.append((n, Fraction(len(prod), len(fn))))
        inv_union.update(group.inv(x) for x in fn)
    return rows

def shulman_constant(seq: FolnerSequence, n_max: int) -> Fraction:
    """The tempered (Shulman) ratio max_{2<=n<=n_max} |union_{k<n} F_k^{-1} F_n| / |F_n|."""
    return max(r for _, r in shulman_profile(seq, n_max))


@dataclass(frozen=True)
class GrowthReport:
    rows: tuple[tuple[int, int, float], ...]  # (n, |F_n|, |F_n| / log n)
    sizes_increasing: bool


def growth_ratios(seq: FolnerSequence, ns: Sequence[int]) -> GrowthReport:
    """Growth diagnostics |F_n| / log n; n >= 2 so the denominator is positive."""
    rows = []
    sizes = []
    for n in ns:
        if n < 2:
            raise ValueError(f"growth ratios need n >= 2, got {n}")
        size = seq.size(n)
        sizes.append(size)
        rows.append((n, size, size / math.log(n)))
    increasing = all(a < b for a, b in zip(sizes, sizes[1:]))
    return GrowthReport(tuple(rows), increasing)
