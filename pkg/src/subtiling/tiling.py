"""Finite patches by iterated substitution: supertiles, counts, net points,
level partitions, and an SVG view for plane tilings.

Patches carry exact rational coordinates.  Large-scale region work (windows,
packing, erosion experiments) goes through the integer-grid Hierarchy engine
instead; this module is the value-level API and stays modest in size, guarded
by the tile budget.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .hierarchy import DEFAULT_TILE_BUDGET, BudgetExceededError, Hierarchy, expected_leaf_count
from .qlinalg import mat_pow
from .ruleset import RuleSet, substitution_matrix

__all__ = [
    "TileInstance",
    "Patch",
    "NetPoint",
    "supertile",
    "count_vector",
    "net_points",
    "inflate",
    "partition_levels",
    "patch_to_svg",
]


@dataclass(frozen=True)
class TileInstance:
    """A placed copy of a basic tile: type, hierarchy level, lower corner, and
    the child-index path from the generating supertile."""

    type_id: str
    level: int
    origin: tuple[Fraction, ...]
    path: tuple[int, ...]

    def extent(self, rs: RuleSet) -> tuple[Fraction, ...]:
        f = rs.inflation**self.level
        return tuple(f * e for e in rs.tile(self.type_id).extent)

    def barycenter(self, rs: RuleSet) -> tuple[Fraction, ...]:
        return tuple(o + e / 2 for o, e in zip(self.origin, self.extent(rs)))

    def volume(self, rs: RuleSet) -> Fraction:
        return rs.tile(self.type_id).volume * rs.inflation ** (self.level * rs.dimension)


@dataclass(frozen=True)
class NetPoint:
    position: tuple[Fraction, ...]
    owner: TileInstance


@dataclass(frozen=True)
class Patch:
    """Level-0 decomposition of one supertile, anchored at the origin."""

    rs: RuleSet
    root_type: str
    root_level: int
    tiles: tuple[TileInstance, ...]

    @property
    def bounding_box(self) -> tuple[tuple[Fraction, ...], tuple[Fraction, ...]]:
        ext = tuple(self.rs.inflation**self.root_level * e for e in self.rs.tile(self.root_type).extent)
        return (0,) * self.rs.dimension, ext

    def volume(self) -> Fraction:
        return sum(t.volume(self.rs) for t in self.tiles)


def supertile(rs: RuleSet, type_id: str, level: int, budget: int = DEFAULT_TILE_BUDGET) -> Patch:
    """Level-0 tiles of the level-`level` supertile of the given type."""
    if not rs.geometric:
        raise ValueError("geometric mode required")
    rs.tile_index(type_id)
    n_expected = expected_leaf_count(rs, type_id, level)
    if n_expected > budget:
        raise BudgetExceededError(f"{n_expected} tiles exceed budget {budget}")
    tiles: list[TileInstance] = []
    stack = [(type_id, level, (Fraction(0),) * rs.dimension, ())]
    while stack:
        tid, lv, origin, path = stack.pop()
        if lv == 0:
            tiles.append(TileInstance(tid, 0, origin, path))
            continue
        f = rs.inflation ** (lv - 1)
        for ci in range(len(rs.rules[tid]) - 1, -1, -1):
            ch = rs.rules[tid][ci]
            corigin = tuple(o + f * x for o, x in zip(origin, ch.offset))
            stack.append((ch.tile, lv - 1, corigin, path + (ci,)))
    assert len(tiles) == n_expected
    return Patch(rs, type_id, level, tuple(tiles))


def count_vector(p: Patch | list[TileInstance], rs: RuleSet | None = None) -> list[int]:
    """Per-type tile counts of a patch or bare tile collection."""
    if isinstance(p, Patch):
        rs = p.rs
        tiles = p.tiles
    else:
        tiles = p
        if rs is None:
            raise ValueError("rule set required for a bare tile list")
    counts = [0] * rs.n
    for t in tiles:
        counts[rs.tile_index(t.type_id)] += 1
    return counts


def net_points(p: Patch) -> list[NetPoint]:
    """One point per level-0 tile, at the tile barycenter."""
    return [NetPoint(t.barycenter(p.rs), t) for t in p.tiles]


def inflate(p: Patch) -> Patch:
    """One substitution step applied to the whole patch: scale by the
    inflation constant and dissect every tile by its rule."""
    rs = p.rs
    xi = rs.inflation
    out: list[TileInstance] = []
    for t in p.tiles:
        base = tuple(xi * o for o in t.origin)
        for ci, ch in enumerate(rs.rules[t.type_id]):
            out.append(
                TileInstance(ch.tile, 0, tuple(b + x for b, x in zip(base, ch.offset)), t.path + (ci,))
            )
    return Patch(rs, p.root_type, p.root_level + 1, tuple(out))


def _node_instance(h: Hierarchy, nid: int) -> TileInstance:
    scale = Fraction(1, h.scale)
    origin = tuple(Fraction(int(c)) * scale for c in h.node_lo[nid])
    return TileInstance(h.rs.tiles[h.node_type[nid]].id, int(h.node_level[nid]), origin, ())


def partition_levels(h: Hierarchy, leaf_mask: np.ndarray) -> list[list[TileInstance]]:
    """Partition a union of level-0 tiles into maximal supertiles, reported
    per level from the root level down to 0.

    Index k of the result lists the maximal level-k supertiles that fit
    wholly inside the region once all higher levels have been carved out;
    together they tile the region exactly.
    """
    buckets: list[list[TileInstance]] = [[] for _ in range(h.level + 1)]
    for nid in h.maximal_nodes(leaf_mask):
        buckets[int(h.node_level[nid])].append(_node_instance(h, nid))
    return buckets


def partition_level_counts(h: Hierarchy, leaf_mask: np.ndarray) -> dict[int, list[int]]:
    """Per-level per-type counts of the maximal-supertile partition."""
    out: dict[int, list[int]] = {}
    for nid in h.maximal_nodes(leaf_mask):
        lv = int(h.node_level[nid])
        out.setdefault(lv, [0] * h.rs.n)[h.node_type[nid]] += 1
    return out


_SVG_COLORS = ["#4878a8", "#e0a030", "#78b060", "#c05850", "#8868a8", "#60a8a0", "#a87848", "#888888"]


def patch_to_svg(p: Patch, px_per_unit: int = 24) -> str:
    """Deterministic SVG rendering (d = 2 only), one rectangle per tile."""
    rs = p.rs
    if rs.dimension != 2:
        raise ValueError("SVG output requires dimension 2")
    _, (w, hgt) = p.bounding_box
    W, H = float(w * px_per_unit), float(hgt * px_per_unit)
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{W:g}" height="{H:g}" '
        f'viewBox="0 0 {W:g} {H:g}">'
    ]
    for t in sorted(p.tiles, key=lambda t: t.origin):
        ox, oy = (float(c * px_per_unit) for c in t.origin)
        ex, ey = (float(c * px_per_unit) for c in t.extent(rs))
        color = _SVG_COLORS[rs.tile_index(t.type_id) % len(_SVG_COLORS)]
        parts.append(
            f'<rect x="{ox:g}" y="{H - oy - ey:g}" width="{ex:g}" height="{ey:g}" '
            f'fill="{color}" stroke="#222222" stroke-width="0.5"/>'
        )
    parts.append("</svg>")
    return "\n".join(parts) + "\n"
