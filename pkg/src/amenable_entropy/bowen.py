"""Dimensional (Bowen) entropy via Caratheodory outer measures on covers.

The outer measure M(Z, s) is the minimum of sum exp(-s |F_{n_i}|) over
families of Bowen balls at scales n in [n_min, n_max] covering Z, and the
weighted variant W(f, s) relaxes the cover to fractional multiplicities
c_i >= 0 with sum c_i chi_{B_i} >= f. The critical exponent is the s where
M crosses 1; at desk scale M is finite, continuous and strictly decreasing
in s, so the crossing is found by bisection with exact rational cost
comparisons at every step.

Costs exp(-s |F_n|) are rationalized as Fraction(exp(-s)) ** |F_n|, the
nearest-float base raised to an exact integer power. All comparisons (cover
vs cover, W vs M, duality gaps) therefore happen in exact arithmetic over a
consistently rationalized cost, and the bias against the real-valued cost is
below 1e-12 relative at the window sizes shipped here. Callers may pin an
exact base or per-scale costs instead when literal equalities matter.

Two computation routes exist and are cross-validated in the tests:

* complete families (every admissible ball at each scale, the family the
  infimum ranges over) with nested windows form a laminar set system, so the
  minimum-cost cover decomposes along the pattern tree and is computed by an
  exact dynamic program on the layered state graph, never materializing the
  balls;
* explicit ball lists go through a finite atom space (the join of all ball
  windows) and exact branch-and-bound set cover, falling back to a certified
  greedy/LP bracket above the atom budget.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Mapping, Sequence

from ._dp import LayerGraph, build_layer_graph
from .entropy_top import cover_window
from .errors import BudgetExceededError, CoverError
from .group import FolnerSequence, enumerate_prefix
from .shift_space import (
    CANDIDATE_BUDGET,
    Cylinder,
    MetricSpec,
    Pattern,
    ShiftSpace,
    act,
    admissible_patterns,
    bowen_window,
    count_admissible,
    pattern_translates,
)
from .simplex import solve_lp

__all__ = [
    "SubsetSpec",
    "WholeSpace",
    "CylinderUnion",
    "SubShiftAtoms",
    "Ball",
    "BallFamily",
    "AtomSpace",
    "OuterMeasureResult",
    "WeightedCoverResult",
    "FrostmanResult",
    "CoverWord",
    "BowenReport",
    "ScheduleRow",
    "DEFAULT_ATOM_BUDGET",
    "rational_cost",
    "candidate_balls",
    "build_atom_space",
    "outer_measure_M",
    "weighted_W",
    "critical_exponent",
    "cover_words",
    "cover_word_M",
    "enlarge_ball",
    "five_r_disjointify",
    "weighted_disjoint_subfamilies",
    "frostman_measure",
    "bowen_entropy_estimate",
]

DEFAULT_ATOM_BUDGET = 2**14
_ATOM_HARD_CAP = 2**18
_LP_ROW_CAP = 2**11


# ---------------------------------------------------------------------------
# target subsets Z


class SubsetSpec:
    """A subset of the shift space that covers can be aimed at.

    Shipped shapes: the whole space, a finite union of cylinders, and the
    points locally admissible for extra forbidden patterns (a sub-SFT viewed
    at finite resolution). Membership questions are answered at pattern
    granularity; for unions this is exact once the pattern's window contains
    every union window, for sub-SFTs it is the local notion used throughout.
    """

    def windows(self) -> tuple[frozenset, ...]:
        return ()

    def tracker_kwargs(self) -> dict:
        return {}

    def meets(self, space: ShiftSpace, pattern: Pattern) -> bool:
        raise NotImplementedError


@dataclass(frozen=True)
class WholeSpace(SubsetSpec):
    def meets(self, space: ShiftSpace, pattern: Pattern) -> bool:
        return True


@dataclass(frozen=True)
class CylinderUnion(SubsetSpec):
    """Union of finitely many cylinders; empty tuple is the empty set."""

    patterns: tuple[Pattern, ...]

    def __post_init__(self):
        object.__setattr__(self, "patterns", tuple(self.patterns))

    def windows(self) -> tuple[frozenset, ...]:
        return tuple(p.window for p in self.patterns)

    def tracker_kwargs(self) -> dict:
        return {"z_union": self.patterns}

    def meets(self, space: ShiftSpace, pattern: Pattern) -> bool:
        return any(q.agrees_with(pattern) for q in self.patterns)


@dataclass(frozen=True)
class SubShiftAtoms(SubsetSpec):
    """Points avoiding extra forbidden patterns, at local resolution."""

    forbidden: tuple[Pattern, ...]

    def __post_init__(self):
        object.__setattr__(self, "forbidden", tuple(self.forbidden))

    def windows(self) -> tuple[frozenset, ...]:
        return tuple(p.window for p in self.forbidden)

    def tracker_kwargs(self) -> dict:
        return {"z_forbidden": self.forbidden}

    def meets(self, space: ShiftSpace, pattern: Pattern) -> bool:
        cells = sorted(pattern.window)
        for placed in pattern_translates(space.group, self.forbidden, cells):
            if all(pattern[c] == s for c, s in placed):
                return False
        return True


def cylinder_union(cylinders: Iterable[Cylinder | Pattern]) -> CylinderUnion:
    pats = tuple(c.pattern if isinstance(c, Cylinder) else c for c in cylinders)
    return CylinderUnion(pats)


# ---------------------------------------------------------------------------
# ball families


@dataclass(frozen=True)
class Ball:
    """A Bowen ball: a cylinder tagged with its scale and cost exponent."""

    cylinder: Cylinder
    scale: int
    cost_exponent: int  # |F_scale|


class BallFamily:
    """Candidate Bowen balls at scales n_min..n_max and a fixed radius.

    A complete family contains every admissible ball meeting the target at
    each scale; it is kept lazy because the covering DP never needs the list.
    Explicit families carry their balls and go through the atom-space route.
    """

    def __init__(
        self,
        space: ShiftSpace,
        seq: FolnerSequence,
        eps: Fraction,
        n_min: int,
        n_max: int,
        z: SubsetSpec,
        complete: bool,
        balls: tuple[Ball, ...] | None = None,
    ):
        if n_min < 1 or n_min > n_max:
            raise ValueError(f"need 1 <= n_min <= n_max, got [{n_min}, {n_max}]")
        self.space = space
        self.seq = seq
        self.metric = MetricSpec(space.group)
        self.eps = Fraction(eps)
        self.n_min = n_min
        self.n_max = n_max
        self.z = z
        self.complete = complete
        self._balls = balls
        self.metric.depth(self.eps)  # validate the radius early

    @classmethod
    def explicit(
        cls,
        space: ShiftSpace,
        seq: FolnerSequence,
        eps: Fraction,
        balls: Sequence[Ball],
    ) -> "BallFamily":
        if not balls:
            raise ValueError("explicit families need at least one ball")
        scales = [b.scale for b in balls]
        fam = cls(
            space,
            seq,
            eps,
            min(scales),
            max(scales),
            WholeSpace(),
            complete=False,
            balls=tuple(balls),
        )
        return fam

    @property
    def scales(self) -> range:
        return range(self.n_min, self.n_max + 1)

    def window(self, n: int) -> frozenset:
        return bowen_window(self.metric, self.seq.subset(n), self.eps)

    def windows(self) -> dict[int, frozenset]:
        return {n: self.window(n) for n in self.scales}

    def cost_exponent(self, n: int) -> int:
        return len(self.seq.subset(n))

    def balls(self, budget: int = 2**20) -> tuple[Ball, ...]:
        """Materialize the family; complete families enumerate per scale."""
        if self._balls is None:
            total = 0
            for n in self.scales:
                total += count_admissible(self.space, self.window(n))
                if total > budget:
                    raise BudgetExceededError(
                        f"family holds more than {budget} balls; keep it lazy"
                    )
            out = []
            for n in self.scales:
                exp = self.cost_exponent(n)
                for pat in admissible_patterns(self.space, self.window(n)):
                    if self.z.meets(self.space, pat):
                        out.append(Ball(Cylinder(pat), n, exp))
            self._balls = tuple(out)
        return self._balls


def candidate_balls(
    space: ShiftSpace,
    seq: FolnerSequence,
    eps: Fraction,
    n_min: int,
    n_max: int,
    z: SubsetSpec = WholeSpace(),
) -> BallFamily:
    """All Bowen balls at scales n_min..n_max whose cylinders meet z.

    The family the covering infimum ranges over. It is returned lazily;
    reading .balls() enumerates it subject to a budget.
    """
    return BallFamily(space, seq, eps, n_min, n_max, z, complete=True)


# ---------------------------------------------------------------------------
# costs


def rational_cost(s: float, size: int) -> Fraction:
    """exp(-s * size) rationalized as Fraction(exp(-s)) ** size."""
    if size < 0:
        raise ValueError("cost exponent must be nonnegative")
    return Fraction(math.exp(-s)) ** size


def _scale_costs(
    family_sizes: Mapping[int, int],
    s: float,
    cost_base: Fraction | None,
    scale_costs: Mapping[int, Fraction] | None,
) -> dict[int, Fraction]:
    out = {}
    for n, size in family_sizes.items():
        if scale_costs is not None and n in scale_costs:
            c = Fraction(scale_costs[n])
        elif cost_base is not None:
            c = Fraction(cost_base) ** size
        else:
            c = rational_cost(s, size)
        if c <= 0:
            raise ValueError(f"cost at scale {n} must be positive, got {c}")
        out[n] = c
    return out


# ---------------------------------------------------------------------------
# results


@dataclass(frozen=True)
class OuterMeasureResult:
    """Certified bracket for the cover optimum M at fixed (s, scales, eps)."""

    s: float
    eps: Fraction
    n_min: int
    n_max: int
    value_lower: Fraction
    value_upper: Fraction
    exact: bool
    method: str
    # scale-dp: ((scale, balls bought), ...); atom routes: selected ball indices
    certificate: tuple

    def __post_init__(self):
        if self.value_lower > self.value_upper:
            raise ValueError("bracket is inverted")
        if self.exact and self.value_lower != self.value_upper:
            raise ValueError("exact results must have a collapsed bracket")


@dataclass(frozen=True)
class WeightedCoverResult:
    """Exact optimum of the fractional covering LP for W."""

    s: float
    eps: Fraction
    n_min: int
    n_max: int
    value: Fraction
    weights: tuple[Fraction, ...]  # aligned with the family's ball order
    method: str


# ---------------------------------------------------------------------------
# scale-layered covering DP (complete families, nested windows)


class _CoverEngine:
    """Min-cost cover of Z by complete nested scale families, exactly.

    Cells of the largest window are ordered so every scale's window is a
    prefix; partial patterns compress to the layered DP states. Walking the
    tree bottom-up, a subtree is either finished for free (no Z below),
    bought outright at any scale whose window is exactly the current prefix,
    or split into children. Laminarity of same-family cylinders makes this
    decomposition lossless, so the DP value is the exact cover optimum. The
    graph is independent of s and is reused across a bisection.
    """

    def __init__(
        self,
        space: ShiftSpace,
        z: SubsetSpec,
        windows: Mapping[int, frozenset],
    ):
        scales = sorted(windows)
        levels: dict = {}
        for n in reversed(scales):
            for c in windows[n]:
                levels[c] = n
        prev: frozenset | None = None
        for n in scales:
            if prev is not None and not prev <= windows[n]:
                raise ValueError("engine needs nested scale windows")
            prev = windows[n]
        extra = sorted(set().union(*z.windows()) - set(levels)) if z.windows() else []
        cells = sorted(levels, key=lambda c: (levels[c], c)) + extra
        self.space = space
        self.scales = scales
        self.graph: LayerGraph = build_layer_graph(space, cells, **z.tracker_kwargs())
        counts: dict[int, int] = {}
        for c in levels.values():
            counts[c] = counts.get(c, 0) + 1
        self.boundaries: dict[int, list[int]] = {}
        running = 0
        for n in scales:
            running += counts.get(n, 0)
            self.boundaries.setdefault(running, []).append(n)

    def _buy_price(self, b: int, costs: Mapping[int, Fraction]) -> tuple[Fraction, int]:
        ns = self.boundaries[b]
        best = min(ns, key=lambda n: (costs[n], n))
        return costs[best], best

    def value(self, costs: Mapping[int, Fraction]) -> Fraction:
        g = self.graph
        v: list[Fraction | None] = [
            None if inz else Fraction(0) for inz in g.leaf_in_z
        ]
        for b in range(g.length, -1, -1):
            if b < g.length:
                nxt = v
                v = []
                for row in g.trans[b]:
                    acc = Fraction(0)
                    for nid, mult in row:
                        child = nxt[nid]
                        if child is None:
                            acc = None
                            break
                        if child:
                            acc += mult * child
                    v.append(acc)
            if b in self.boundaries:
                price, _ = self._buy_price(b, costs)
                v = [price if (x is None or price <= x) else x for x in v]
        root = v[0]
        if root is None:
            raise CoverError("target set cannot be covered at the given scales")
        return root

    def value_and_certificate(
        self, costs: Mapping[int, Fraction]
    ) -> tuple[Fraction, tuple[tuple[int, int], ...]]:
        g = self.graph
        v: list[Fraction | None] = [
            None if inz else Fraction(0) for inz in g.leaf_in_z
        ]
        bought: dict[int, list[bool]] = {}
        for b in range(g.length, -1, -1):
            if b < g.length:
                nxt = v
                v = []
                for row in g.trans[b]:
                    acc = Fraction(0)
                    for nid, mult in row:
                        child = nxt[nid]
                        if child is None:
                            acc = None
                            break
                        if child:
                            acc += mult * child
                    v.append(acc)
            if b in self.boundaries:
                price, _ = self._buy_price(b, costs)
                flags = [x is None or price <= x for x in v]
                bought[b] = flags
                v = [price if f else x for f, x in zip(flags, v)]
        root = v[0]
        if root is None:
            raise CoverError("target set cannot be covered at the given scales")
        # forward pass: count pattern paths that end in a purchase per scale
        counts: dict[int, int] = {}
        active = [1]
        for b in range(g.length + 1):
            if b in self.boundaries:
                _, scale = self._buy_price(b, costs)
                flags = bought[b]
                for sid, a in enumerate(active):
                    if a and flags[sid]:
                        counts[scale] = counts.get(scale, 0) + a
                active = [0 if flags[sid] else a for sid, a in enumerate(active)]
            if b < g.length:
                nxt = [0] * len(g.state_keys[b + 1])
                for sid, row in enumerate(g.trans[b]):
                    a = active[sid]
                    if a:
                        for nid, mult in row:
                            nxt[nid] += a * mult
                active = nxt
        total = sum(counts[n] * costs[n] for n in counts)
        if total != root:
            raise AssertionError("certificate does not reproduce the DP value")
        return root, tuple(sorted(counts.items()))


def _measure_by_engine(
    space, z, windows, costs, s, eps, n_min, n_max, engine=None
) -> OuterMeasureResult:
    eng = engine if engine is not None else _CoverEngine(space, z, windows)
    value, cert = eng.value_and_certificate(costs)
    return OuterMeasureResult(
        s=s,
        eps=Fraction(eps),
        n_min=n_min,
        n_max=n_max,
        value_lower=value,
        value_upper=value,
        exact=True,
        method="scale-dp",
        certificate=cert,
    )


# ---------------------------------------------------------------------------
# atom space (explicit families)


@dataclass(frozen=True)
class AtomSpace:
    """The join of all ball windows, refined enough to resolve the target."""

    window: frozenset
    atoms: tuple[Pattern, ...]
    incidence: tuple[frozenset, ...]  # per ball: atom ids lying inside it
    in_z: tuple[bool, ...]


def build_atom_space(
    space: ShiftSpace,
    balls: Sequence[Ball],
    z: SubsetSpec,
    hard_cap: int = _ATOM_HARD_CAP,
) -> AtomSpace:
    w_star = frozenset().union(*(b.cylinder.window for b in balls), *z.windows())
    total = count_admissible(space, w_star)
    if total > hard_cap:
        raise BudgetExceededError(
            f"atom space needs {total} atoms, above the cap {hard_cap}"
        )
    atoms = tuple(admissible_patterns(space, w_star, budget=CANDIDATE_BUDGET))
    by_window: dict[frozenset, dict[tuple, list[int]]] = {}
    for j, b in enumerate(balls):
        by_window.setdefault(b.cylinder.window, {})
    for win, index in by_window.items():
        for i, a in enumerate(atoms):
            index.setdefault(a.restrict(win).key, []).append(i)
    incidence = tuple(
        frozenset(by_window[b.cylinder.window].get(b.cylinder.pattern.key, ()))
        for b in balls
    )
    in_z = tuple(z.meets(space, a) for a in atoms)
    return AtomSpace(window=w_star, atoms=atoms, incidence=incidence, in_z=in_z)


def _greedy_cover(
    universe: frozenset, covers: Sequence[frozenset], costs: Sequence[Fraction]
) -> tuple[list[int], Fraction]:
    uncovered = set(universe)
    chosen: list[int] = []
    total = Fraction(0)
    while uncovered:
        best = None
        best_ratio = None
        for j, cov in enumerate(covers):
            gain = len(cov & uncovered)
            if not gain:
                continue
            ratio = costs[j] / gain
            if best_ratio is None or ratio < best_ratio:
                best, best_ratio = j, ratio
        chosen.append(best)
        total += costs[best]
        uncovered -= covers[best]
    return chosen, total


def _cover_lower_bound(
    universe: frozenset, covers: Sequence[frozenset], costs: Sequence[Fraction]
) -> Fraction:
    """max of two admissible bounds: hardest single atom, and an atomwise
    split of each ball's cost across what it could still cover."""
    if not universe:
        return Fraction(0)
    hardest = Fraction(0)
    split = Fraction(0)
    for a in universe:
        best_single = None
        best_split = None
        for j, cov in enumerate(covers):
            if a in cov:
                share = costs[j] / len(cov & universe)
                if best_single is None or costs[j] < best_single:
                    best_single = costs[j]
                if best_split is None or share < best_split:
                    best_split = share
        hardest = max(hardest, best_single)
        split += best_split
    return max(hardest, split)


def _branch_and_bound_cover(
    universe: frozenset,
    covers: Sequence[frozenset],
    costs: Sequence[Fraction],
) -> tuple[Fraction, tuple[int, ...]]:
    incumbent_sel, incumbent = _greedy_cover(universe, covers, costs)
    of_atom = {a: tuple(j for j, cov in enumerate(covers) if a in cov) for a in universe}

    def attack(uncovered: frozenset, banned: frozenset, chosen: tuple[int, ...], cost: Fraction):
        nonlocal incumbent, incumbent_sel
        # forced picks: atoms with a single ball still allowed
        while uncovered:
            forced = None
            for a in uncovered:
                avail = [j for j in of_atom[a] if j not in banned]
                if not avail:
                    return
                if len(avail) == 1:
                    forced = avail[0]
                    break
            if forced is None:
                break
            chosen = chosen + (forced,)
            cost = cost + costs[forced]
            uncovered = uncovered - covers[forced]
            if cost >= incumbent:
                return
        if not uncovered:
            if cost < incumbent:
                incumbent = cost
                incumbent_sel = list(chosen)
            return
        if cost + _cover_lower_bound(uncovered, covers, costs) >= incumbent:
            return
        avail = [j for j in of_atom[min(uncovered, key=lambda a: (len(of_atom[a]), a))] if j not in banned]
        # each branch bans the earlier alternatives, so selections never repeat
        for i, j in enumerate(avail):
            attack(uncovered - covers[j], banned | frozenset(avail[:i]), chosen + (j,), cost + costs[j])

    attack(universe, frozenset(), (), Fraction(0))
    return incumbent, tuple(sorted(incumbent_sel))


def _measure_by_atoms(
    z: SubsetSpec,
    family: BallFamily,
    costs: Mapping[int, Fraction],
    s: float,
    budget_atoms: int,
) -> OuterMeasureResult:
    balls = family.balls()
    aspace = build_atom_space(family.space, balls, z)
    universe = frozenset(i for i, inz in enumerate(aspace.in_z) if inz)
    ball_costs = [costs[b.scale] for b in balls]
    covers = [cov & universe for cov in aspace.incidence]
    missing = universe - frozenset().union(*covers) if covers else universe
    if missing:
        atom = aspace.atoms[min(missing)]
        raise CoverError(f"family does not cover the target; first gap {atom!r}")
    common = dict(
        s=s, eps=family.eps, n_min=family.n_min, n_max=family.n_max
    )
    if not universe:
        zero = Fraction(0)
        return OuterMeasureResult(
            value_lower=zero,
            value_upper=zero,
            exact=True,
            method="branch-and-bound",
            certificate=(),
            **common,
        )
    if len(universe) <= budget_atoms:
        value, cert = _branch_and_bound_cover(universe, covers, ball_costs)
        return OuterMeasureResult(
            value_lower=value,
            value_upper=value,
            exact=True,
            method="branch-and-bound",
            certificate=cert,
            **common,
        )
    chosen, upper = _greedy_cover(universe, covers, ball_costs)
    lower = _cover_lower_bound(universe, covers, ball_costs)
    if len(universe) <= _LP_ROW_CAP:
        lower = max(lower, _cover_lp_value(universe, covers, ball_costs))
    else:
        # Chvatal: greedy is within H_d of the LP optimum, d = largest ball
        d = max(len(cov) for cov in covers)
        harmonic = sum(Fraction(1, i) for i in range(1, d + 1))
        lower = max(lower, upper / harmonic)
    return OuterMeasureResult(
        value_lower=lower,
        value_upper=upper,
        exact=lower == upper,
        method="greedy-bracket",
        certificate=tuple(sorted(chosen)),
        **common,
    )


def _cover_lp_value(
    universe: frozenset, covers: Sequence[frozenset], costs: Sequence[Fraction]
) -> Fraction:
    rows = []
    for a in sorted(universe):
        rows.append({j: Fraction(1) for j, cov in enumerate(covers) if a in cov})
    res = solve_lp(
        objective={j: c for j, c in enumerate(costs)},
        rows=rows,
        senses=[">="] * len(rows),
        rhs=[Fraction(1)] * len(rows),
        num_vars=len(covers),
    )
    return res.value


def outer_measure_M(
    z: SubsetSpec,
    family: BallFamily,
    s: float,
    *,
    cost_base: Fraction | None = None,
    scale_costs: Mapping[int, Fraction] | None = None,
    budget_atoms: int = DEFAULT_ATOM_BUDGET,
) -> OuterMeasureResult:
    """Minimum cover cost of z over subfamilies of the given ball family.

    Complete families with nested windows use the exact scale DP; explicit
    families use exact branch-and-bound over atoms up to budget_atoms and a
    certified greedy/LP bracket beyond it. With a complete family built for
    a larger target, any z inside it is valid here; the DP only ever charges
    balls that meet z.
    """
    sizes = {n: family.cost_exponent(n) for n in family.scales}
    costs = _scale_costs(sizes, s, cost_base, scale_costs)
    if family.complete:
        windows = family.windows()
        nested = all(
            windows[a] <= windows[b]
            for a, b in zip(sorted(windows), sorted(windows)[1:])
        )
        if nested:
            return _measure_by_engine(
                family.space, z, windows, costs, s, family.eps,
                family.n_min, family.n_max,
            )
    return _measure_by_atoms(z, family, costs, s, budget_atoms)


# ---------------------------------------------------------------------------
# weighted covers


def _demand_fn(
    f, space: ShiftSpace
) -> tuple[Callable[[Pattern], Fraction], tuple[frozenset, ...]]:
    if isinstance(f, SubsetSpec):
        spec, scalar = f, Fraction(1)
    elif isinstance(f, tuple) and len(f) == 2 and isinstance(f[0], SubsetSpec):
        spec, scalar = f[0], Fraction(f[1])
    else:
        fn = f
        return (lambda a: Fraction(fn(a))), ()
    if scalar < 0:
        raise ValueError("demands must be nonnegative")

    def chi(a: Pattern) -> Fraction:
        return scalar if spec.meets(space, a) else Fraction(0)

    return chi, spec.windows()


class _DemandWindows(SubsetSpec):
    """Window carrier so the atom space resolves a demand function."""

    def __init__(self, wins: tuple[frozenset, ...]):
        self._wins = wins

    def windows(self) -> tuple[frozenset, ...]:
        return self._wins

    def meets(self, space: ShiftSpace, pattern: Pattern) -> bool:
        return True


def weighted_W(
    f,
    family: BallFamily,
    s: float,
    *,
    cost_base: Fraction | None = None,
    scale_costs: Mapping[int, Fraction] | None = None,
) -> WeightedCoverResult:
    """Exact optimum of min sum c_i cost_i over c_i >= 0 with
    sum c_i chi_{B_i} >= f on every atom.

    f may be a SubsetSpec (its indicator), a (SubsetSpec, scalar) pair, or a
    callable from atom patterns to nonnegative rationals. Families whose
    balls share a single window decouple (the balls are pairwise disjoint),
    otherwise the rational simplex solves the covering LP.
    """
    demand, wins = _demand_fn(f, family.space)
    balls = family.balls()
    sizes = {n: family.cost_exponent(n) for n in family.scales}
    costs = _scale_costs(sizes, s, cost_base, scale_costs)
    ball_costs = [costs[b.scale] for b in balls]
    aspace = build_atom_space(family.space, balls, _DemandWindows(wins))
    demands = [demand(a) for a in aspace.atoms]
    if any(d < 0 for d in demands):
        raise ValueError("demands must be nonnegative")
    needy = [i for i, d in enumerate(demands) if d > 0]
    cover_of = [frozenset() for _ in aspace.atoms]
    for j, cov in enumerate(aspace.incidence):
        for i in cov:
            cover_of[i] = cover_of[i] | {j}
    for i in needy:
        if not cover_of[i]:
            raise CoverError(
                f"no ball covers a demanded atom; first gap {aspace.atoms[i]!r}"
            )
    common = dict(s=s, eps=family.eps, n_min=family.n_min, n_max=family.n_max)
    distinct = len({b.cylinder.pattern.key for b in balls}) == len(balls)
    if distinct and len({b.cylinder.window for b in balls}) == 1:
        # one window, no repeats: balls are disjoint, each weight is its own max demand
        weights = [
            max((demands[i] for i in cov), default=Fraction(0))
            for cov in aspace.incidence
        ]
        value = sum(w * c for w, c in zip(weights, ball_costs))
        return WeightedCoverResult(
            value=value, weights=tuple(weights), method="disjoint-decoupled", **common
        )
    if len(needy) > _LP_ROW_CAP:
        raise BudgetExceededError(
            f"covering LP needs {len(needy)} rows, above the cap {_LP_ROW_CAP}"
        )
    rows = [{j: Fraction(1) for j in sorted(cover_of[i])} for i in needy]
    res = solve_lp(
        objective={j: c for j, c in enumerate(ball_costs)},
        rows=rows,
        senses=[">="] * len(rows),
        rhs=[demands[i] for i in needy],
        num_vars=len(balls),
    )
    weights = tuple(res.x.get(j, Fraction(0)) for j in range(len(balls)))
    return WeightedCoverResult(
        value=res.value, weights=weights, method="lp-simplex", **common
    )


# ---------------------------------------------------------------------------
# critical exponent


def critical_exponent(
    z: SubsetSpec,
    space: ShiftSpace,
    seq: FolnerSequence,
    eps: Fraction,
    n_min: int,
    n_max: int,
    *,
    tol: float = 1e-9,
    budget_atoms: int = DEFAULT_ATOM_BUDGET,
) -> float:
    """The s where the finite-scale cover optimum M(z, s) crosses 1.

    M is strictly decreasing and continuous in s, so bisection brackets the
    crossing; every comparison against 1 is exact for the rationalized cost.
    Returns 0.0 when already M(0) <= 1 (a fixed-size target needs only one
    ever-cheaper ball).
    """
    family = candidate_balls(space, seq, eps, n_min, n_max, z)
    windows = family.windows()
    nested = all(
        windows[a] <= windows[b] for a, b in zip(sorted(windows), sorted(windows)[1:])
    )
    sizes = {n: family.cost_exponent(n) for n in family.scales}
    engine = _CoverEngine(space, z, windows) if nested else None

    def measure(s: float) -> Fraction:
        costs = _scale_costs(sizes, s, None, None)
        if engine is not None:
            return engine.value(costs)
        res = _measure_by_atoms(z, family, costs, s, budget_atoms)
        if not res.exact:
            if res.value_lower > 1 or res.value_upper < 1:
                return res.value_upper
            raise BudgetExceededError(
                "cover bracket straddles 1; cannot certify the crossing"
            )
        return res.value_upper

    if measure(0.0) <= 1:
        return 0.0
    lo, hi = 0.0, 1.0
    while measure(hi) >= 1:
        hi *= 2
        if hi > 2**10:
            raise CoverError("no crossing below s = 1024; check the instance")
    while hi - lo > tol:
        mid = (lo + hi) / 2
        if measure(mid) >= 1:
            lo = mid
        else:
            hi = mid
    return (lo + hi) / 2


# ---------------------------------------------------------------------------
# cover words


@dataclass(frozen=True)
class CoverWord:
    """A word of cover elements along F; its body is a cylinder."""

    elements: tuple[int, ...]  # indices into the cover's element list
    length: int  # |F|
    body: Cylinder


def cover_words(space: ShiftSpace, cover, f: Iterable) -> list[CoverWord]:
    """Words with nonempty admissible body, one per admissible window pattern.

    The element at g is the pattern of g.x at depth r, so the body, the set
    of x whose orbit follows the word, is exactly the cylinder of a pattern
    on the joined window. Words with empty body are skipped.
    """
    cells = sorted(frozenset(f))
    window = cover_window(space, cover, cells)
    prefix = enumerate_prefix(space.group, cover.r + 1).order
    elements = admissible_patterns(space, prefix)
    index = {p.key: i for i, p in enumerate(elements)}
    out = []
    for pat in admissible_patterns(space, window):
        word = tuple(
            index[act(space.group, g, pat, prefix).key] for g in cells
        )
        out.append(CoverWord(elements=word, length=len(cells), body=Cylinder(pat)))
    return out


def cover_word_M(
    z: SubsetSpec,
    space: ShiftSpace,
    cover,
    seq: FolnerSequence,
    n_min: int,
    n_max: int,
    s: float,
    *,
    cost_base: Fraction | None = None,
    scale_costs: Mapping[int, Fraction] | None = None,
) -> OuterMeasureResult:
    """Minimum of sum exp(-s m(U)) over word families covering z.

    For partition covers every body is a cylinder on E_{r+1} F_n, so this is
    the ball construction with those windows; at matched scales (r = 0,
    eps = 1/2) the two agree exactly.
    """
    windows = {n: cover_window(space, cover, seq.subset(n)) for n in range(n_min, n_max + 1)}
    sizes = {n: len(seq.subset(n)) for n in windows}
    costs = _scale_costs(sizes, s, cost_base, scale_costs)
    return _measure_by_engine(
        space, z, windows, costs, s, Fraction(1, 2), n_min, n_max
    )


# ---------------------------------------------------------------------------
# 5r disjointification


def enlarge_ball(
    metric: MetricSpec, ball: Cylinder, f: Iterable, eps: Fraction
) -> Cylinder:
    """The ball at radius 5 eps around the same center.

    Five times the radius forgets floor(log2 5) = 2 enumeration depths, so
    the enlarged ball is the cylinder on E_{max(1, m-2)} F.
    """
    m = metric.depth(Fraction(eps))
    prefix = enumerate_prefix(metric.group, max(1, m - 2)).order
    small = frozenset(metric.group.mul(e, g) for e in prefix for g in f)
    return Cylinder(ball.pattern.restrict(small))


def five_r_disjointify(
    balls: Sequence[Cylinder], metric: MetricSpec, f: Iterable, eps: Fraction
) -> list[Cylinder]:
    """Disjoint subfamily whose 5 eps enlargements cover the input's union.

    Balls at one (F, eps) are cylinders on a common window, so distinct ones
    are already disjoint; the content of the lemma here is economy: one
    representative per enlargement suffices, since balls sharing the smaller
    window pattern sit inside the representative's enlargement.
    """
    f = frozenset(f)
    window = bowen_window(metric, f, Fraction(eps))
    dedup: dict[tuple, Cylinder] = {}
    for b in balls:
        if b.window != window:
            raise ValueError("all balls must share the scale window W(F, eps)")
        dedup.setdefault(b.pattern.key, b)
    groups: dict[tuple, Cylinder] = {}
    for key in sorted(dedup):
        b = dedup[key]
        ekey = enlarge_ball(metric, b, f, eps).pattern.key
        groups.setdefault(ekey, b)
    return [groups[k] for k in sorted(groups)]


def weighted_disjoint_subfamilies(
    balls: Sequence[tuple[Cylinder, int]],
    t: int,
    metric: MetricSpec,
    f: Iterable,
    eps: Fraction,
) -> tuple[list[list[Cylinder]], int]:
    """t rounds of disjoint subfamilies for integer-weighted balls.

    Round j selects one representative per enlargement among balls with
    remaining weight >= 1 and decrements the selected. Wherever the weighted
    sum reaches t, some ball with remaining weight survives to round j, so
    each round's enlargements cover that region; total selections cannot
    exceed the total weight, and the smallest round j0 is within (1/t) of it.
    Duplicate cylinders have their weights summed.
    """
    if t < 1:
        raise ValueError(f"threshold must be a positive integer, got {t}")
    f = frozenset(f)
    window = bowen_window(metric, f, Fraction(eps))
    weights: dict[tuple, int] = {}
    cyls: dict[tuple, Cylinder] = {}
    for b, c in balls:
        if b.window != window:
            raise ValueError("all balls must share the scale window W(F, eps)")
        if c < 1 or c != int(c):
            raise ValueError(f"weights must be positive integers, got {c}")
        weights[b.pattern.key] = weights.get(b.pattern.key, 0) + int(c)
        cyls.setdefault(b.pattern.key, b)
    rounds: list[list[Cylinder]] = []
    for _ in range(math.ceil(t)):
        groups: dict[tuple, tuple] = {}
        for key in sorted(weights):
            if weights[key] < 1:
                continue
            ekey = enlarge_ball(metric, cyls[key], f, eps).pattern.key
            groups.setdefault(ekey, key)
        selected = [groups[k] for k in sorted(groups)]
        for key in selected:
            weights[key] -= 1
        rounds.append([cyls[k] for k in selected])
    j0 = min(range(len(rounds)), key=lambda j: (len(rounds[j]), j))
    return rounds, j0


# ---------------------------------------------------------------------------
# Frostman measures by packing duality


@dataclass(frozen=True)
class FrostmanResult:
    """A probability measure on atoms charging K against ball-cost caps.

    value is the packing optimum c; the measure is the optimizer scaled by
    1/c, so it has total mass 1 on K and satisfies
    mu(B_i) <= (1/c) cost_i with the listed exact slacks.
    """

    value: Fraction
    cover_value: Fraction  # weighted cover optimum; equals value exactly
    measure: tuple[tuple[Pattern, Fraction], ...]
    ball_slacks: tuple[Fraction, ...]
    window: frozenset


def frostman_measure(
    k_set: SubsetSpec,
    family: BallFamily,
    s: float,
    *,
    cost_base: Fraction | None = None,
    scale_costs: Mapping[int, Fraction] | None = None,
) -> FrostmanResult:
    """Max-mass measure on K with mu(B_i) <= cost_i, certified against W.

    Solves the packing LP (the exact dual of the weighted cover of chi_K)
    with the rational simplex, checks the duality gap is exactly zero, then
    normalizes. Raises when K has no atoms or some K atom lies in no ball.
    """
    balls = family.balls()
    sizes = {n: family.cost_exponent(n) for n in family.scales}
    costs = _scale_costs(sizes, s, cost_base, scale_costs)
    ball_costs = [costs[b.scale] for b in balls]
    aspace = build_atom_space(family.space, balls, k_set)
    k_atoms = [i for i, inz in enumerate(aspace.in_z) if inz]
    if not k_atoms:
        raise CoverError("target set has no atoms at this resolution")
    covered = frozenset().union(*aspace.incidence)
    for i in k_atoms:
        if i not in covered:
            raise CoverError(
                f"no ball covers a target atom; first gap {aspace.atoms[i]!r}"
            )
    col = {atom: v for v, atom in enumerate(k_atoms)}
    rows = []
    for cov in aspace.incidence:
        rows.append({col[i]: Fraction(1) for i in cov if i in col})
    res = solve_lp(
        objective={v: Fraction(1) for v in range(len(k_atoms))},
        rows=rows,
        senses=["<="] * len(rows),
        rhs=ball_costs,
        num_vars=len(k_atoms),
        maximize=True,
    )
    c = res.value
    w = weighted_W(k_set, family, s, cost_base=cost_base, scale_costs=scale_costs)
    if w.value != c:
        raise CoverError(
            f"packing/cover duality gap {w.value - c} is nonzero; solver bug"
        )
    if c == 0:
        raise CoverError("target set carries no packing mass at this cost")
    masses = [res.x.get(v, Fraction(0)) / c for v in range(len(k_atoms))]
    slacks = []
    for j, cov in enumerate(aspace.incidence):
        ball_mass = sum(masses[col[i]] for i in cov if i in col)
        slack = ball_costs[j] / c - ball_mass
        if slack < 0:
            raise AssertionError("normalized measure violates a ball cap")
        slacks.append(slack)
    measure = tuple(
        (aspace.atoms[i], masses[col[i]]) for i in k_atoms
    )
    return FrostmanResult(
        value=c,
        cover_value=w.value,
        measure=measure,
        ball_slacks=tuple(slacks),
        window=aspace.window,
    )


# ---------------------------------------------------------------------------
# schedule reports


@dataclass(frozen=True)
class ScheduleRow:
    eps: Fraction
    n_min: int
    n_max: int
    s_hat: float
    window_ratio: float  # |W(F_{n_max}, eps)| / |F_{n_max}|, the finite-size factor


@dataclass(frozen=True)
class BowenReport:
    rows: tuple[ScheduleRow, ...]
    estimate: float  # row at the smallest radius, then the largest top scale


def bowen_entropy_estimate(
    z: SubsetSpec,
    space: ShiftSpace,
    seq: FolnerSequence,
    schedule: Sequence[tuple[Fraction, int, int]],
    *,
    tol: float = 1e-9,
    budget_atoms: int = DEFAULT_ATOM_BUDGET,
) -> BowenReport:
    """Critical exponents over an (eps, n_min, n_max) schedule.

    The window ratio flags how much of each cost exponent is window padding
    rather than F_n itself; it tends to 1 as eps shrinks slower than n grows.
    """
    if not schedule:
        raise ValueError("schedule must be nonempty")
    metric = MetricSpec(space.group)
    rows = []
    for eps, n_min, n_max in schedule:
        eps = Fraction(eps)
        s_hat = critical_exponent(
            z, space, seq, eps, n_min, n_max, tol=tol, budget_atoms=budget_atoms
        )
        f_top = seq.subset(n_max)
        ratio = len(bowen_window(metric, f_top, eps)) / len(f_top)
        rows.append(ScheduleRow(eps, n_min, n_max, s_hat, ratio))
    best = min(rows, key=lambda r: (r.eps, -r.n_max))
    return BowenReport(rows=tuple(rows), estimate=best.s_hat)
