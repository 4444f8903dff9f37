"""Layered exact dynamic programming over window cells.

Patterns on a window are walked cell by cell in a fixed order. The state kept
between cells is only what the future can still inspect: the symbols of cells
that occur in some forbidden-pattern translate reaching past the current
boundary, plus a small tracker for membership in a target subset Z (a bitmask
of still-compatible cylinders, or an alive flag for a sub-SFT). Assignments
that agree on this state are merged with multiplicities, which is what keeps
full shifts at one state per cell and nearest-neighbour SFTs at a handful,
independent of window size. Counting and minimum-cost covering both run on
the resulting layered graph with exact integer / rational arithmetic.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .group import GroupElement
from .shift_space import Pattern, ShiftSpace, pattern_translates

__all__ = ["LayerGraph", "build_layer_graph", "count_leaves", "count_leaves_in_z"]


@dataclass
class LayerGraph:
    """Forward transition structure over boundaries 0..L (after b cells assigned)."""

    cells: list
    num_states: list[int]  # per boundary
    trans: list[list[list[tuple[int, int]]]]  # [b][state_id] -> [(next_id, multiplicity)]
    leaf_in_z: list[bool]  # per boundary-L state
    state_keys: list[list]  # per boundary, for certificates and debugging

    @property
    def length(self) -> int:
        return len(self.cells)


def build_layer_graph(
    space: ShiftSpace,
    cells: Sequence[GroupElement],
    z_union: Sequence[Pattern] | None = None,
    z_forbidden: Sequence[Pattern] | None = None,
) -> LayerGraph:
    """Compile the layered graph for admissible patterns on the given cells.

    z_union tracks membership in a finite union of cylinders (their windows
    must lie inside the cells); z_forbidden tracks membership in the sub-SFT
    that additionally avoids those patterns. At most one may be given; with
    neither, every leaf counts as inside Z.
    """
    if z_union is not None and z_forbidden is not None:
        raise ValueError("at most one Z tracker may be used")
    k = space.alphabet.size
    cells = list(cells)
    length = len(cells)
    pos = {c: i for i, c in enumerate(cells)}

    def to_positions(placed):
        out = []
        for placed_t in placed:
            out.append(tuple(sorted((pos[c], s) for c, s in placed_t)))
        return out

    hard = to_positions(pattern_translates(space.group, space.forbidden, cells))
    soft = []
    if z_forbidden:
        for p in z_forbidden:
            missing = p.window - set(cells)
            if missing:
                raise ValueError("sub-SFT forbidden pattern reaches outside the cells")
        soft = to_positions(pattern_translates(space.group, tuple(z_forbidden), cells))

    hard_trig: list[list] = [[] for _ in range(length)]
    soft_trig: list[list] = [[] for _ in range(length)]
    retain: list[set[int]] = [set() for _ in range(length + 1)]
    for trig, translist in ((hard_trig, hard), (soft_trig, soft)):
        for t in translist:
            last = t[-1][0]
            trig[last].append(t)
            for p, _ in t:
                for b in range(p + 1, last + 1):
                    retain[b].add(p)
    retain_sorted = [tuple(sorted(r)) for r in retain]

    cyl_req: list[list[tuple[int, int]]] = [[] for _ in range(length)]
    if z_union is not None:
        for cid, pat in enumerate(z_union):
            missing = pat.window - set(cells)
            if missing:
                raise ValueError("cylinder window reaches outside the cells")
            for c, s in pat.cells.items():
                cyl_req[pos[c]].append((cid, s))
        z0 = (1 << len(z_union)) - 1  # mask of still-compatible cylinders
    elif z_forbidden is not None:
        z0 = True
    else:
        z0 = None

    state_keys: list[list] = [[((), z0)]]
    trans: list[list[list[tuple[int, int]]]] = []
    for b in range(length):
        cur_keys = state_keys[b]
        nxt_index: dict = {}
        nxt_keys: list = []
        step: list[list[tuple[int, int]]] = []
        keep = retain_sorted[b + 1]
        for items, z in cur_keys:
            vals = dict(items)
            agg: dict = {}
            for s in range(k):
                vals[b] = s
                if any(all(vals[p] == r for p, r in t) for t in hard_trig[b]):
                    continue
                z2 = z
                if soft_trig[b] and z2:
                    if any(all(vals[p] == r for p, r in t) for t in soft_trig[b]):
                        z2 = False
                if cyl_req[b] and z2:
                    for cid, req in cyl_req[b]:
                        if req != s:
                            z2 &= ~(1 << cid)
                key = (tuple((p, vals[p]) for p in keep), z2)
                agg[key] = agg.get(key, 0) + 1
            del vals[b]
            row = []
            for key, cnt in agg.items():
                if key not in nxt_index:
                    nxt_index[key] = len(nxt_keys)
                    nxt_keys.append(key)
                row.append((nxt_index[key], cnt))
            step.append(row)
        trans.append(step)
        state_keys.append(nxt_keys)

    leaf_in_z = []
    for items, z in state_keys[length]:
        if z_union is not None:
            leaf_in_z.append(z != 0)
        elif z_forbidden is not None:
            leaf_in_z.append(bool(z))
        else:
            leaf_in_z.append(True)
    return LayerGraph(
        cells=cells,
        num_states=[len(s) for s in state_keys],
        trans=trans,
        leaf_in_z=leaf_in_z,
        state_keys=state_keys,
    )


def _forward_counts(graph: LayerGraph) -> list[int]:
    counts = [1]
    for b, step in enumerate(graph.trans):
        nxt = [0] * len(graph.state_keys[b + 1])
        for sid, row in enumerate(step):
            c = counts[sid]
            if not c:
                continue
            for nid, mult in row:
                nxt[nid] += c * mult
        counts = nxt
    return counts


def count_leaves(graph: LayerGraph) -> int:
    """Number of admissible leaf patterns."""
    return sum(_forward_counts(graph)) if graph.trans else 1


def count_leaves_in_z(graph: LayerGraph) -> int:
    """Number of admissible leaf patterns inside the tracked Z."""
    if not graph.trans:
        return 1 if (graph.leaf_in_z and graph.leaf_in_z[0]) else 0
    counts = _forward_counts(graph)
    return sum(c for c, inz in zip(counts, graph.leaf_in_z) if inz)
