"""Indexed supertile hierarchy on an exact integer cell grid.

A Hierarchy materializes every supertile of one root supertile (all levels
down to 0) as flat numpy arrays in depth-first order, with leaf (level-0)
tiles contiguous per node.  All coordinates are integers on a common grid of
spacing 1/scale, chosen so that every rational corner lands on the grid, so
region volumes, facet censuses and boundary measures are exact integer counts
converted by the appropriate power of 1/scale.

Regions are boolean masks over the leaf index space; cell-level views are
produced through the painted leaf-id grid.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .qlinalg import mat_pow
from .ruleset import RuleSet, substitution_matrix

__all__ = ["Hierarchy", "BudgetExceededError", "FaceTables", "exposed_face_count"]

DEFAULT_TILE_BUDGET = 10**7


class BudgetExceededError(Exception):
    code = "budget-exceeded"


def expected_leaf_count(rs: RuleSet, root_type: str, level: int) -> int:
    A = substitution_matrix(rs)
    P = mat_pow(A, level)
    j = rs.tile_index(root_type)
    return sum(P[i][j] for i in range(rs.n))


class Hierarchy:
    """All supertiles of one level-M supertile, indexed for exact region work."""

    def __init__(self, rs: RuleSet, root_type: str, level: int, budget: int = DEFAULT_TILE_BUDGET):
        if not rs.geometric:
            raise ValueError("geometric mode required")
        leaves_expected = expected_leaf_count(rs, root_type, level)
        if leaves_expected > budget:
            raise BudgetExceededError(
                f"level-{level} supertile of {root_type!r} has {leaves_expected} tiles, budget {budget}"
            )
        self.rs = rs
        self.root_type = root_type
        self.level = level
        self.dim = rs.dimension
        self.scale = self._common_scale(rs, level)

        # scaled integer extents per (type, level)
        n = rs.n
        self._ext = np.zeros((n, level + 1, self.dim), dtype=np.int64)
        for ti, t in enumerate(rs.tiles):
            for lv in range(level + 1):
                for a in range(self.dim):
                    v = t.extent[a] * rs.inflation**lv * self.scale
                    assert v.denominator == 1, "scale does not clear denominators"
                    self._ext[ti, lv, a] = int(v)

        # precomputed integer child offsets per (parent type, child level):
        # keeps the big DFS loop in plain int arithmetic
        scaled_rules: list[list[list[tuple[int, tuple[int, ...]]]]] = []
        for t in rs.tiles:
            per_level = []
            for child_lv in range(level):
                per_level.append(
                    [
                        (
                            rs.tile_index(ch.tile),
                            tuple(self._scaled_offset(ch.offset[a], child_lv) for a in range(self.dim)),
                        )
                        for ch in rs.rules[t.id]
                    ]
                )
            scaled_rules.append(per_level)

        types, levels, los, parents = [], [], [], []
        lr_lo_list, lr_hi_list = [], []
        leaf_ids: list[int] = []

        root_ti = rs.tile_index(root_type)
        stack = [(root_ti, level, (0,) * self.dim, -1)]
        while stack:
            ti, lv, lo, parent = stack.pop()
            nid = len(types)
            types.append(ti)
            levels.append(lv)
            los.append(lo)
            parents.append(parent)
            lr_lo_list.append(len(leaf_ids))
            lr_hi_list.append(0)  # patched after the subtree completes
            if lv == 0:
                leaf_ids.append(nid)
            else:
                children = [
                    (cti, lv - 1, tuple(lo[a] + off[a] for a in range(self.dim)), nid)
                    for cti, off in scaled_rules[ti][lv - 1]
                ]
                # reversed push keeps declaration order in the DFS
                stack.extend(reversed(children))

        self.n_nodes = len(types)
        self.node_type = np.array(types, dtype=np.int32)
        self.node_level = np.array(levels, dtype=np.int32)
        self.node_lo = np.array(los, dtype=np.int64)
        self.node_parent = np.array(parents, dtype=np.int64)
        self.node_hi = self.node_lo + self._ext[self.node_type, self.node_level]

        self.leaf_of = np.array(leaf_ids, dtype=np.int64)
        self.n_leaves = len(leaf_ids)
        assert self.n_leaves == leaves_expected

        kids: list[list[int]] = [[] for _ in range(self.n_nodes)]
        for nid in range(1, self.n_nodes):
            kids[self.node_parent[nid]].append(nid)
        self.children = kids
        # a node's leaves are contiguous in DFS order: close ranges bottom-up
        lr_lo = np.array(lr_lo_list, dtype=np.int64)
        lr_hi = np.array(lr_hi_list, dtype=np.int64)
        for nid in range(self.n_nodes - 1, -1, -1):
            if self.node_level[nid] == 0:
                lr_hi[nid] = lr_lo[nid] + 1
            else:
                lr_hi[nid] = lr_hi[kids[nid][-1]] if kids[nid] else lr_lo[nid]
        self.leaf_range_lo = lr_lo
        self.leaf_range_hi = lr_hi

        self.leaf_type = self.node_type[self.leaf_of]
        self.leaf_lo = self.node_lo[self.leaf_of]
        self.leaf_hi = self.node_hi[self.leaf_of]
        self.leaf_cellvol = np.prod(self.leaf_hi - self.leaf_lo, axis=1)
        ext = self.node_hi - self.node_lo
        self.node_cellvol = np.prod(ext, axis=1)
        self.node_surface = 2 * (self.node_cellvol[:, None] // ext).sum(axis=1)
        self.grid_shape = tuple(int(x) for x in self.node_hi[0])
        self._leaf_grid = None

        # nodes by level for candidate scans
        self.level_nodes = [
            np.flatnonzero(self.node_level == lv) for lv in range(level + 1)
        ]

    @staticmethod
    def _common_scale(rs: RuleSet, level: int) -> int:
        den = 1
        for t in rs.tiles:
            for e in t.extent:
                den = math.lcm(den, e.denominator)
        for chs in rs.rules.values():
            for ch in chs:
                for o in ch.offset:
                    den = math.lcm(den, o.denominator)
        return den * rs.inflation.denominator**level

    def _scaled_offset(self, off: Fraction, child_level: int) -> int:
        v = off * self.rs.inflation**child_level * self.scale
        assert v.denominator == 1
        return int(v)

    # ----- unit conversions -----

    @property
    def cell_volume(self) -> Fraction:
        return Fraction(1, self.scale) ** self.dim

    @property
    def cell_face_area(self) -> Fraction:
        return Fraction(1, self.scale) ** (self.dim - 1)

    def node_volume(self, nid: int) -> Fraction:
        return int(np.prod(self.node_hi[nid] - self.node_lo[nid])) * self.cell_volume

    def node_surface_cells(self, nid: int) -> int:
        return int(self.node_surface[nid])

    # ----- leaf/cell views -----

    @property
    def leaf_grid(self) -> np.ndarray:
        """Cell grid holding the owning leaf index (painted once, cached)."""
        if self._leaf_grid is None:
            g = np.full(self.grid_shape, -1, dtype=np.int32)
            for li in range(self.n_leaves):
                sl = tuple(slice(int(a), int(b)) for a, b in zip(self.leaf_lo[li], self.leaf_hi[li]))
                g[sl] = li
            assert (g >= 0).all(), "leaves do not tile the root box"
            self._leaf_grid = g
        return self._leaf_grid

    def cell_mask(self, leaf_mask: np.ndarray) -> np.ndarray:
        return leaf_mask[self.leaf_grid]

    def leaf_count_vector(self, leaf_mask: np.ndarray) -> list[int]:
        return [int(np.count_nonzero(self.leaf_type[leaf_mask] == ti)) for ti in range(self.rs.n)]

    def leaf_mask_of_node(self, nid: int) -> np.ndarray:
        m = np.zeros(self.n_leaves, dtype=bool)
        m[self.leaf_range_lo[nid] : self.leaf_range_hi[nid]] = True
        return m

    def node_leaf_count(self, nid: int, leaf_mask: np.ndarray, prefix=None) -> int:
        lo, hi = self.leaf_range_lo[nid], self.leaf_range_hi[nid]
        if prefix is not None:
            return int(prefix[hi] - prefix[lo])
        return int(np.count_nonzero(leaf_mask[lo:hi]))

    def maximal_nodes(self, leaf_mask: np.ndarray, within: int = 0) -> list[int]:
        """Maximal supertiles (by hierarchy containment) whose leaves all lie
        in the region; greedy from the top, so the result partitions it."""
        prefix = np.concatenate([[0], np.cumsum(leaf_mask.astype(np.int64))])
        out: list[int] = []
        stack = [within]
        while stack:
            nid = stack.pop()
            lo, hi = self.leaf_range_lo[nid], self.leaf_range_hi[nid]
            cnt = int(prefix[hi] - prefix[lo])
            if cnt == 0:
                continue
            if cnt == hi - lo:
                out.append(nid)
            else:
                stack.extend(reversed(self.children[nid]))
        return out

    def ancestors(self, nid: int):
        p = self.node_parent[nid]
        while p >= 0:
            yield int(p)
            p = self.node_parent[p]

    def barycenters_doubled(self) -> np.ndarray:
        """2 * barycenter of every leaf, integer in grid units."""
        return (self.leaf_lo + self.leaf_hi).astype(np.int64)


# ---------------------------------------------------------------------------
# exact facet censuses on cell masks


def exposed_face_count(mask: np.ndarray) -> int:
    """Number of unit cell faces between the region and its complement
    (including the grid boundary): the (d-1)-measure of the topological
    boundary in cell-face units."""
    total = 0
    d = mask.ndim
    for a in range(d):
        sl_lo = [slice(None)] * d
        sl_hi = [slice(None)] * d
        sl_lo[a] = slice(0, -1)
        sl_hi[a] = slice(1, None)
        total += int(np.count_nonzero(mask[tuple(sl_lo)] != mask[tuple(sl_hi)]))
        first = [slice(None)] * d
        first[a] = 0
        last = [slice(None)] * d
        last[a] = mask.shape[a] - 1
        total += int(np.count_nonzero(mask[tuple(first)]))
        total += int(np.count_nonzero(mask[tuple(last)]))
    return total


class FaceTables:
    """Summed-area tables of the region's internal face indicators, for O(2^d)
    queries of 'boundary faces of the region strictly inside a box'."""

    def __init__(self, mask: np.ndarray):
        self.dim = mask.ndim
        self.tables = []
        for a in range(self.dim):
            sl_lo = [slice(None)] * self.dim
            sl_hi = [slice(None)] * self.dim
            sl_lo[a] = slice(0, -1)
            sl_hi[a] = slice(1, None)
            faces = (mask[tuple(sl_lo)] != mask[tuple(sl_hi)]).astype(np.int64)
            sat = faces
            for ax in range(self.dim):
                sat = np.cumsum(sat, axis=ax)
            padded = np.zeros(tuple(s + 1 for s in sat.shape), dtype=np.int64)
            padded[(slice(1, None),) * self.dim] = sat
            self.tables.append(padded)

    def _box_sum(self, table: np.ndarray, lo, hi) -> int:
        # standard inclusion-exclusion over the 2^d corners
        total = 0
        for corner in itertools.product((0, 1), repeat=self.dim):
            idx = tuple(hi[a] if corner[a] else lo[a] for a in range(self.dim))
            sign = (-1) ** (self.dim - sum(corner))
            total += sign * int(table[idx])
        return total

    def boundary_in_box_interior(self, lo, hi) -> int:
        """Faces of the region boundary strictly inside the box [lo, hi)."""
        total = 0
        for a in range(self.dim):
            qlo = list(lo)
            qhi = list(hi)
            # the face array along axis a sits between cells i and i+1; strict
            # interior means face positions lo[a] .. hi[a]-2
            qhi[a] = hi[a] - 1
            if qhi[a] <= qlo[a]:
                continue
            total += self._box_sum(self.tables[a], qlo, qhi)
        return total

    def boundary_in_boxes(self, los: np.ndarray, his: np.ndarray) -> np.ndarray:
        """Vectorized boundary_in_box_interior over many boxes."""
        m = los.shape[0]
        out = np.zeros(m, dtype=np.int64)
        for a in range(self.dim):
            qlo = los.copy()
            qhi = his.copy()
            qhi[:, a] = qhi[:, a] - 1
            valid = qhi[:, a] > qlo[:, a]
            if not valid.any():
                continue
            acc = np.zeros(m, dtype=np.int64)
            table = self.tables[a]
            for corner in itertools.product((0, 1), repeat=self.dim):
                idx = tuple(
                    np.where(corner[ax], qhi[:, ax], qlo[:, ax]) for ax in range(self.dim)
                )
                sign = (-1) ** (self.dim - sum(corner))
                acc += sign * table[idx]
            out += np.where(valid, acc, 0)
        return out
