"""Topological entropy of shift actions via open-cover counts.

The shipped cover is the clopen partition by patterns at refinement depth r:
its join along F_n is the partition into cylinders on the window E_{r+1} F_n
(depth 0 is the alphabet partition {[a]}). Join elements are pairwise disjoint
cylinders, so the minimal subcover cardinality N(U_{F_n}) is exactly the
number of nonempty elements, i.e. the admissible pattern count.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .group import FolnerSequence, GroupElement, enumerate_prefix
from .shift_space import MetricSpec, ShiftSpace, bowen_window, count_admissible

__all__ = ["OpenCoverSpec", "cover_count", "htop_profile", "separated_set_size", "HtopRow"]


@dataclass(frozen=True)
class OpenCoverSpec:
    """Partition by patterns on E_{r+1}; r = 0 is the alphabet partition."""

    r: int = 0

    def __post_init__(self) -> None:
        if self.r < 0:
            raise ValueError(f"refinement depth must be >= 0, got {self.r}")


def cover_window(space: ShiftSpace, cover: OpenCoverSpec, f: Iterable[GroupElement]) -> frozenset:
    prefix = enumerate_prefix(space.group, cover.r + 1).order
    return frozenset(space.group.mul(e, g) for e in prefix for g in f)


def cover_count(space: ShiftSpace, cover: OpenCoverSpec, f: Iterable[GroupElement]) -> int:
    """Minimal subcover cardinality N(U_{F}) of the join along F."""
    return count_admissible(space, cover_window(space, cover, f))


@dataclass(frozen=True)
class HtopRow:
    n: int
    folner_size: int
    count: int
    value: float  # log N(U_{F_n}) / |F_n|


def htop_profile(
    space: ShiftSpace, cover: OpenCoverSpec, seq: FolnerSequence, ns: Sequence[int]
) -> list[HtopRow]:
    rows = []
    for n in ns:
        f = seq.subset(n)
        cnt = cover_count(space, cover, f)
        rows.append(HtopRow(n, len(f), cnt, _logint(cnt) / len(f)))
    return rows


def separated_set_size(
    space: ShiftSpace, metric: MetricSpec, f: Iterable[GroupElement], eps: Fraction
) -> int:
    """Maximal cardinality of an eps-separated set for d_F.

    Points are eps-separated iff they differ somewhere on W(F, eps), and points
    sharing a pattern there are closer than eps, so the maximum is exactly the
    number of admissible patterns on the window.
    """
    return count_admissible(space, bowen_window(metric, f, eps))


def _logint(n: int) -> float:
    return math.log(n)
