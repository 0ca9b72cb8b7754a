"""Recursive economic packing of hierarchy-aligned regions.

Given a region V inside a supertile T with volume at most half of T, the
decomposition expresses V in the closure of a small supertile family under
disjoint union and proper difference, using each tile instance at most once,
with per-level tile counts decaying like the inverse (d-1)-power of the
inflation per level.  The recursion follows the inductive construction: grab
every supertile that both covers a definite fraction of V and sees little of
V's boundary, fill V up with the maximal such, emit the maximal tiles of the
filled region as union leaves, and recurse on the overfill inside each
grabbed supertile.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .hierarchy import FaceTables, Hierarchy
from .ruleset import RuleSet

__all__ = [
    "PackingConfig",
    "PackingResult",
    "RegionExpr",
    "ExprError",
    "PackingPreconditionError",
    "boundary_in_interior",
    "economic_pack",
    "evaluate_expr",
    "expr_leaf_nodes",
    "random_aligned_region",
]


class PackingPreconditionError(Exception):
    """A recursive call saw an overfull complement; with adaptive mode off
    this surfaces the offending supertile."""

    code = "packing-precondition"

    def __init__(self, node: int, msg: str):
        super().__init__(msg)
        self.node = node


class ExprError(ValueError):
    """Malformed region expression; kind in {overlap, not-contained,
    duplicate-leaf}."""

    def __init__(self, kind: str, msg: str):
        super().__init__(f"{kind}: {msg}")
        self.kind = kind


@dataclass(frozen=True)
class PackingConfig:
    """Constants of the packing recursion.

    c is the covered-fraction threshold, default (2 rho)^-1 xi^-d with rho
    the extreme tile-volume ratio; epsilon is the boundary-quietness
    threshold, a calibrated per-fixture default (the theory guarantees some
    positive value works but its closed form rests on non-computable
    constants, so it is configuration here).  Adaptive mode halves epsilon
    and restarts when a recursive call violates the half-volume precondition.
    """

    epsilon: Fraction
    c: Fraction
    rho: Fraction
    d_min: Fraction
    adaptive: bool = True
    max_restarts: int = 16

    @classmethod
    def for_ruleset(cls, rs: RuleSet, epsilon: Fraction | None = None, adaptive: bool = True) -> "PackingConfig":
        vols = rs.volumes()
        rho = max(vols) / min(vols)
        c = 1 / (2 * rho * rs.inflation**rs.dimension)
        d_min = min(rs.surfaces())
        if epsilon is None:
            epsilon = Fraction(1, 16)
        return cls(epsilon=epsilon, c=c, rho=rho, d_min=d_min, adaptive=adaptive)


# region expressions: leaves are hierarchy node ids


@dataclass(frozen=True)
class RegionExpr:
    op: str  # "leaf" | "union" | "difference"
    node: int = -1
    parts: tuple["RegionExpr", ...] = ()

    @staticmethod
    def leaf(node: int) -> "RegionExpr":
        return RegionExpr("leaf", node=node)

    @staticmethod
    def union(parts) -> "RegionExpr":
        return RegionExpr("union", parts=tuple(parts))

    @staticmethod
    def difference(left: "RegionExpr", right: "RegionExpr") -> "RegionExpr":
        return RegionExpr("difference", parts=(left, right))

    def to_jsonable(self, h: Hierarchy):
        if self.op == "leaf":
            return {
                "tile": h.rs.tiles[h.node_type[self.node]].id,
                "level": int(h.node_level[self.node]),
                "origin": [f"{int(c)}/{h.scale}" for c in h.node_lo[self.node]],
            }
        if self.op == "union":
            return {"union": [p.to_jsonable(h) for p in self.parts]}
        return {
            "minus": [self.parts[0].to_jsonable(h), self.parts[1].to_jsonable(h)]
        }


def expr_leaf_nodes(expr: RegionExpr) -> list[int]:
    if expr.op == "leaf":
        return [expr.node]
    out = []
    for p in expr.parts:
        out.extend(expr_leaf_nodes(p))
    return out


def evaluate_expr(expr: RegionExpr, h: Hierarchy, _seen: set | None = None) -> np.ndarray:
    """Evaluate to a level-0 tile mask, checking the closure side conditions:
    disjoint union parts, difference containment, single use of every leaf."""
    seen = _seen if _seen is not None else set()

    def ev(e: RegionExpr) -> np.ndarray:
        if e.op == "leaf":
            if e.node in seen:
                raise ExprError("duplicate-leaf", f"tile instance {e.node} used twice")
            seen.add(e.node)
            return h.leaf_mask_of_node(e.node)
        if e.op == "union":
            acc = np.zeros(h.n_leaves, dtype=bool)
            for p in e.parts:
                m = ev(p)
                if (acc & m).any():
                    raise ExprError("overlap", "union parts overlap")
                acc |= m
            return acc
        left = ev(e.parts[0])
        right = ev(e.parts[1])
        if (right & ~left).any():
            raise ExprError("not-contained", "difference subtrahend not inside the minuend")
        return left & ~right

    return ev(expr)


@dataclass
class PackingResult:
    expr: RegionExpr
    per_level_counts: dict[int, int]
    epsilon_used: Fraction
    restarts: int
    recursion_depth: int


def boundary_in_interior(h: Hierarchy, leaf_mask: np.ndarray, lo, hi) -> Fraction:
    """Exact (d-1)-measure of the region boundary strictly inside the box."""
    ft = FaceTables(h.cell_mask(leaf_mask))
    return Fraction(ft.boundary_in_box_interior(tuple(int(x) for x in lo), tuple(int(x) for x in hi))) * h.cell_face_area


def _strict_descendants_by_level(h: Hierarchy, root: int) -> dict[int, np.ndarray]:
    lo, hi = h.leaf_range_lo[root], h.leaf_range_hi[root]
    out = {}
    for lv in range(int(h.node_level[root])):
        ids = h.level_nodes[lv]
        sel = ids[(h.leaf_range_lo[ids] >= lo) & (h.leaf_range_hi[ids] <= hi)]
        out[lv] = sel
    return out


def economic_pack(h: Hierarchy, leaf_mask: np.ndarray, root: int | None = None, cfg: PackingConfig | None = None) -> PackingResult:
    """Decompose the region into the supertile closure, economically.

    `leaf_mask` selects level-0 tiles inside `root` (default: the hierarchy
    root); its volume must not exceed half the root supertile's.  Restarts
    with halved epsilon when adaptive and a recursive call goes overfull.
    """
    root = 0 if root is None else root
    cfg = cfg or PackingConfig.for_ruleset(h.rs)
    leaf_vol = h.leaf_cellvol
    root_vol = int(np.sum(leaf_vol[h.leaf_range_lo[root] : h.leaf_range_hi[root]]))
    region_vol = int(np.sum(leaf_vol[leaf_mask]))
    if np.any(leaf_mask[: h.leaf_range_lo[root]]) or np.any(leaf_mask[h.leaf_range_hi[root] :]):
        raise ValueError("region leaves outside the root supertile")
    if 2 * region_vol > root_vol:
        raise ValueError("region volume exceeds half the root supertile")

    eps = cfg.epsilon
    for restart in range(cfg.max_restarts + 1):
        try:
            expr, depth = _pack_rec(h, leaf_mask, root, cfg, eps, 0)
            counts: dict[int, int] = {}
            for nid in expr_leaf_nodes(expr):
                lv = int(h.node_level[nid])
                counts[lv] = counts.get(lv, 0) + 1
            return PackingResult(expr, counts, eps, restart, depth)
        except PackingPreconditionError:
            if not cfg.adaptive or restart == cfg.max_restarts:
                raise
            eps = eps / 2
    raise AssertionError("unreachable")


def _pack_rec(h: Hierarchy, V: np.ndarray, T: int, cfg: PackingConfig, eps: Fraction, depth: int):
    if not V.any():
        return RegionExpr.union(()), depth
    level = int(h.node_level[T])
    assert level > 0, "half-volume precondition forces emptiness at level 0"

    # candidate supertiles: strictly below T, covering a c-fraction of V,
    # seeing less than eps of their surface worth of region boundary inside
    prefix = np.concatenate([[0], np.cumsum(np.where(V, h.leaf_cellvol, 0))])
    ft = FaceTables(h.cell_mask(V))
    scale_face = h.cell_face_area
    members: list[int] = []
    for lv in range(level):
        ids = _level_ids_under(h, T, lv)
        if len(ids) == 0:
            continue
        vol_in = prefix[h.leaf_range_hi[ids]] - prefix[h.leaf_range_lo[ids]]
        cov = vol_in * cfg.c.denominator >= h.node_cellvol[ids] * cfg.c.numerator
        if not cov.any():
            continue
        cand = ids[cov]
        bnd = ft.boundary_in_boxes(h.node_lo[cand], h.node_hi[cand])
        quiet = bnd * eps.denominator < h.node_surface[cand] * eps.numerator
        members.extend(int(x) for x in cand[quiet])

    # maximal members by hierarchy containment (leaf ranges nest or are disjoint)
    members.sort(key=lambda n: (h.leaf_range_lo[n], -(h.leaf_range_hi[n] - h.leaf_range_lo[n])))
    maximal: list[int] = []
    last_end = -1
    for nid in members:
        if h.leaf_range_lo[nid] >= last_end:
            maximal.append(nid)
            last_end = h.leaf_range_hi[nid]

    V1 = V.copy()
    for nid in maximal:
        V1[h.leaf_range_lo[nid] : h.leaf_range_hi[nid]] = True

    union_leaves = [RegionExpr.leaf(n) for n in h.maximal_nodes(V1, within=T)]
    if not maximal:
        return RegionExpr.union(union_leaves), depth

    sub_exprs = []
    max_depth = depth
    for nid in maximal:
        lo, hi = h.leaf_range_lo[nid], h.leaf_range_hi[nid]
        W = np.zeros_like(V)
        W[lo:hi] = ~V[lo:hi]
        w_vol = int(np.sum(h.leaf_cellvol[lo:hi][W[lo:hi]]))
        p_vol = int(np.prod(h.node_hi[nid] - h.node_lo[nid]))
        if 2 * w_vol > p_vol:
            raise PackingPreconditionError(
                nid, f"complement of the region fills more than half of supertile {nid}"
            )
        e, dep = _pack_rec(h, W, nid, cfg, eps, depth + 1)
        sub_exprs.append(e)
        max_depth = max(max_depth, dep)
    return RegionExpr.difference(RegionExpr.union(union_leaves), RegionExpr.union(sub_exprs)), max_depth


def _level_ids_under(h: Hierarchy, T: int, lv: int) -> np.ndarray:
    ids = h.level_nodes[lv]
    lo, hi = h.leaf_range_lo[T], h.leaf_range_hi[T]
    return ids[(h.leaf_range_lo[ids] >= lo) & (h.leaf_range_hi[ids] <= hi)]


def random_aligned_region(h: Hierarchy, root: int, rng: random.Random, max_tries: int = 200) -> np.ndarray:
    """A random union of supertiles inside `root` with volume at most half of
    it: hierarchy-aligned by construction, deterministic given the rng."""
    lo, hi = h.leaf_range_lo[root], h.leaf_range_hi[root]
    root_vol = int(np.sum(h.leaf_cellvol[lo:hi]))
    target = root_vol // 2
    mask = np.zeros(h.n_leaves, dtype=bool)
    vol = 0
    max_level = max(1, int(h.node_level[root]) - 1)
    per_level = [_level_ids_under(h, root, lv) for lv in range(max_level)]
    for _ in range(max_tries):
        lv = rng.randrange(0, max_level)
        ids = per_level[lv]
        if len(ids) == 0:
            continue
        nid = int(ids[rng.randrange(len(ids))])
        nlo, nhi = h.leaf_range_lo[nid], h.leaf_range_hi[nid]
        if mask[nlo:nhi].all():
            continue
        add = int(np.sum(h.leaf_cellvol[nlo:nhi][~mask[nlo:nhi]]))
        if vol + add > target:
            continue
        mask[nlo:nhi] = True
        vol += add
    return mask
