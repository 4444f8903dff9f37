"""Symbolic shift spaces over discrete groups.

Configurations x map group elements to symbols; the group acts on the left by
(g.x)(h) = x(hg). Only finite windows of configurations are ever materialized
(the Pattern type). A shift space is a full shift or a subshift of finite type
given by forbidden patterns; admissibility here is the local notion, a pattern
is admissible when no forbidden translate lies fully inside its window. For
the shipped systems (full shifts on any group, nearest-neighbour SFTs on
integer intervals) local admissibility coincides with global extendability;
for d >= 2 SFTs it may overcount and callers should treat counts accordingly.

The metric comes from an enumeration g_1 = e, g_2, ... of the group:
d(x, y) = 2^(-min{i : x(g_i) != y(g_i)}). For 0 < eps <= 1/2 and
m(eps) = floor(log2(1/eps)), two points are eps-close iff they agree on
E_m = {g_1..g_m}, so the Bowen ball B_F(x, eps) is exactly the cylinder of x
on the window E_m * F. That makes every covering computation combinatorial.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .errors import BudgetExceededError, WindowError
from .group import Enumeration, GroupElement, GroupSpec, enumerate_prefix

__all__ = [
    "Alphabet",
    "Pattern",
    "Cylinder",
    "MetricSpec",
    "ShiftSpace",
    "full_shift",
    "golden_mean_shift",
    "act",
    "bowen_window",
    "bowen_ball",
    "admissible_patterns",
    "count_admissible",
    "forbidden_translates",
    "pattern_translates",
    "pattern_from_literal",
    "pattern_to_literal",
    "CANDIDATE_BUDGET",
]

CANDIDATE_BUDGET = 2**26


@dataclass(frozen=True)
class Alphabet:
    """Finite alphabet {0, ..., size-1}."""

    size: int

    def __post_init__(self) -> None:
        if self.size < 2:
            raise ValueError(f"alphabet needs at least 2 symbols, got {self.size}")

    def symbols(self) -> range:
        return range(self.size)


class Pattern:
    """An assignment of symbols to a finite window of group elements."""

    __slots__ = ("_cells", "_key")

    def __init__(self, cells: Mapping[GroupElement, int]):
        self._cells = dict(cells)
        self._key = tuple(sorted(self._cells.items()))

    @property
    def cells(self) -> dict:
        return self._cells

    @property
    def window(self) -> frozenset:
        return frozenset(self._cells)

    @property
    def key(self) -> tuple:
        return self._key

    def __getitem__(self, g: GroupElement) -> int:
        return self._cells[g]

    def __contains__(self, g: GroupElement) -> bool:
        return g in self._cells

    def __len__(self) -> int:
        return len(self._cells)

    def __eq__(self, other) -> bool:
        return isinstance(other, Pattern) and self._key == other._key

    def __hash__(self) -> int:
        return hash(self._key)

    def __repr__(self) -> str:
        return f"Pattern({dict(self._key)!r})"

    def restrict(self, window: Iterable[GroupElement]) -> "Pattern":
        w = frozenset(window)
        missing = w - self.window
        if missing:
            raise WindowError(f"pattern lacks cells {sorted(missing)[:8]} (need {len(missing)})")
        return Pattern({g: self._cells[g] for g in w})

    def agrees_with(self, other: "Pattern") -> bool:
        """True when the two patterns match on their common cells."""
        a, b = self._cells, other._cells
        if len(b) < len(a):
            a, b = b, a
        return all(b.get(g, s) == s for g, s in a.items())


@dataclass(frozen=True)
class Cylinder:
    """The set of configurations extending a pattern."""

    pattern: Pattern

    @property
    def window(self) -> frozenset:
        return self.pattern.window

    def same_window_disjoint(self, other: "Cylinder") -> bool:
        """Cylinders on a common window are equal or disjoint."""
        if self.window != other.window:
            raise ValueError("cylinders live on different windows")
        return self.pattern != other.pattern

    def contains_extension_of(self, pattern: Pattern) -> bool:
        """Whether a pattern defined on a superwindow lies inside this cylinder."""
        return all(pattern.cells.get(g) == s for g, s in self.pattern.cells.items())


@dataclass(frozen=True)
class MetricSpec:
    """Enumeration-based metric; holds the group and a cached enumeration prefix."""

    group: GroupSpec

    def depth(self, eps: Fraction) -> int:
        """m(eps) = floor(log2(1/eps)) for 0 < eps <= 1/2."""
        eps = Fraction(eps)
        if not 0 < eps <= Fraction(1, 2):
            raise ValueError(f"metric radius must satisfy 0 < eps <= 1/2, got {eps}")
        m = 0
        while Fraction(1, 2 ** (m + 1)) >= eps:
            m += 1
        return m

    def prefix(self, m: int) -> Enumeration:
        return enumerate_prefix(self.group, m)


@dataclass(frozen=True)
class ShiftSpace:
    """Full shift or SFT over a group, given by finitely many forbidden patterns."""

    group: GroupSpec
    alphabet: Alphabet
    forbidden: tuple[Pattern, ...] = ()

    def __post_init__(self) -> None:
        for p in self.forbidden:
            if not p.window:
                raise ValueError("forbidden patterns must have nonempty windows")
            for s in p.cells.values():
                if s not in self.alphabet.symbols():
                    raise ValueError(f"forbidden pattern uses symbol {s} outside the alphabet")

    @property
    def is_full_shift(self) -> bool:
        return not self.forbidden


def full_shift(group: GroupSpec, k: int) -> ShiftSpace:
    return ShiftSpace(group, Alphabet(k))


def golden_mean_shift(group: GroupSpec) -> ShiftSpace:
    """Binary Z shift forbidding adjacent ones."""
    if group.kind != "zd" or group.d != 1:
        raise ValueError("the golden mean shift ships for Z only")
    forbid = Pattern({(0,): 1, (1,): 1})
    return ShiftSpace(group, Alphabet(2), (forbid,))


def act(group: GroupSpec, g: GroupElement, x: Pattern, window: Iterable[GroupElement]) -> Pattern:
    """(g.x) restricted to the window, via (g.x)(h) = x(hg)."""
    out = {}
    missing = []
    for h in window:
        src = group.mul(h, g)
        if src in x:
            out[h] = x[src]
        else:
            missing.append(src)
    if missing:
        raise WindowError(f"action needs source cells {sorted(missing)[:8]} (missing {len(missing)})")
    return Pattern(out)


def bowen_window(metric: MetricSpec, f: Iterable[GroupElement], eps: Fraction) -> frozenset:
    """W(F, eps) = E_m * F with m = m(eps); Bowen balls are cylinders on it."""
    m = metric.depth(eps)
    return _depth_window(metric.group, f, m)


def _depth_window(group: GroupSpec, f: Iterable[GroupElement], m: int) -> frozenset:
    prefix = enumerate_prefix(group, m).order
    return frozenset(group.mul(e, g) for e in prefix for g in f)


def bowen_ball(metric: MetricSpec, x: Pattern, f: Iterable[GroupElement], eps: Fraction) -> Cylinder:
    """B_F(x, eps) as the cylinder of x on W(F, eps)."""
    w = bowen_window(metric, f, eps)
    return Cylinder(x.restrict(w))


def pattern_translates(
    group: GroupSpec, patterns: Sequence[Pattern], cells: Iterable[GroupElement]
) -> list[tuple[tuple[GroupElement, int], ...]]:
    """All translates of the patterns lying fully inside the given cells.

    A configuration x contains the translate of p at g iff x(v g) = p(v) for
    all v in p's window. Returned as tuples of (cell, required symbol).
    """
    cellset = frozenset(cells)
    out = []
    seen = set()
    for p in patterns:
        win = sorted(p.window)
        v0 = win[0]
        # candidate translates g with v0 g in cells: g = v0^{-1} w
        for w in cellset:
            g = group.mul(group.inv(v0), w)
            placed = tuple((group.mul(v, g), p[v]) for v in win)
            if all(c in cellset for c, _ in placed):
                if placed not in seen:
                    seen.add(placed)
                    out.append(placed)
    return out


def forbidden_translates(
    space: ShiftSpace, cells: Sequence[GroupElement], extra: Sequence[Pattern] = ()
) -> list[tuple[tuple[GroupElement, int], ...]]:
    """Translates of the space's forbidden patterns (plus extras) inside cells."""
    return pattern_translates(space.group, tuple(space.forbidden) + tuple(extra), cells)


def admissible_patterns(
    space: ShiftSpace,
    window: Iterable[GroupElement],
    budget: int = CANDIDATE_BUDGET,
) -> list[Pattern]:
    """All locally admissible patterns on the window, in lexicographic cell order."""
    cells = sorted(frozenset(window))
    k = space.alphabet.size
    if k ** len(cells) > budget:
        raise BudgetExceededError(
            f"{k}^{len(cells)} candidate patterns exceed the budget {budget}"
        )
    pos = {c: i for i, c in enumerate(cells)}
    # translate checks fire at their last cell in enumeration order
    triggers: list[list[tuple[tuple[int, int], ...]]] = [[] for _ in cells]
    for placed in forbidden_translates(space, cells):
        by_pos = tuple(sorted((pos[c], s) for c, s in placed))
        triggers[by_pos[-1][0]].append(by_pos)
    out: list[Pattern] = []
    assignment = [0] * len(cells)

    def rec(i: int) -> None:
        if i == len(cells):
            out.append(Pattern({c: assignment[pos[c]] for c in cells}))
            return
        for s in range(k):
            assignment[i] = s
            if any(all(assignment[j] == r for j, r in t) for t in triggers[i]):
                continue
            rec(i + 1)

    rec(0)
    return out


def count_admissible(space: ShiftSpace, window: Iterable[GroupElement]) -> int:
    """Exact count of locally admissible patterns on the window.

    Uses the layered state compression from _dp, so counts with astronomically
    many patterns (e.g. full shifts on large windows) stay cheap.
    """
    from ._dp import build_layer_graph, count_leaves

    cells = sorted(frozenset(window))
    graph = build_layer_graph(space, cells)
    return count_leaves(graph)


_BOX_RE = re.compile(r"box((?:\[\s*-?\d+\s*,\s*-?\d+\s*\)\s*x?\s*)+)$")
_RANGE_RE = re.compile(r"\[\s*(-?\d+)\s*,\s*(-?\d+)\s*\)")
_CELL_RE = re.compile(r"\(([^)]*)\)\s*:\s*(\w)")

_SYMS = "0123456789abcdefghijklmnopqrstuvwxyz"


def pattern_from_literal(text: str) -> Pattern:
    """Parse 'box[0,4) : 0110' (row major, first coordinate slowest) or
    'cells (0,1):1 (1,0):0' literals."""
    text = text.strip()
    if text.startswith("box"):
        head, _, body = text.partition(":")
        m = _BOX_RE.match(head.strip())
        if not m:
            raise ValueError(f"bad box literal {text!r}")
        ranges = [(int(a), int(b)) for a, b in _RANGE_RE.findall(m.group(1))]
        if not ranges or any(b <= a for a, b in ranges):
            raise ValueError(f"bad box ranges in {text!r}")
        cells = [()]
        for a, b in ranges:
            cells = [c + (i,) for c in cells for i in range(a, b)]
        symbols = body.strip()
        if len(symbols) != len(cells):
            raise ValueError(
                f"literal {text!r} has {len(symbols)} symbols for {len(cells)} cells"
            )
        return Pattern({c: _SYMS.index(s) for c, s in zip(cells, symbols)})
    if text.startswith("cells"):
        body = text[len("cells"):]
        cells = {}
        for coords, sym in _CELL_RE.findall(body):
            cell = tuple(int(t) for t in coords.split(","))
            cells[cell] = _SYMS.index(sym)
        if not cells:
            raise ValueError(f"no cells in literal {text!r}")
        return Pattern(cells)
    raise ValueError(f"unrecognized pattern literal {text!r}")


def pattern_to_literal(p: Pattern) -> str:
    """Inverse of pattern_from_literal; falls back to the cells form off-box."""
    win = sorted(p.window)
    arity = len(win[0])
    lo = [min(c[i] for c in win) for i in range(arity)]
    hi = [max(c[i] for c in win) + 1 for i in range(arity)]
    boxcells = [()]
    for a, b in zip(lo, hi):
        boxcells = [c + (i,) for c in boxcells for i in range(a, b)]
    if len(boxcells) == len(win) and all(c in p for c in boxcells):
        ranges = "x".join(f"[{a},{b})" for a, b in zip(lo, hi))
        return f"box{ranges} : " + "".join(_SYMS[p[c]] for c in boxcells)
    return "cells " + " ".join(f"({','.join(map(str, c))}):{_SYMS[p[c]]}" for c in win)
