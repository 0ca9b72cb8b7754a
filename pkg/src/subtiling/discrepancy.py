"""Discrepancy of type-count vectors, growth-rate experiments, the unit-cube
window criterion harness, and the eroded-supertile counterexample family.

The discrepancy of a region is point count minus density times volume; for
unions of tiles it is a linear functional of the per-type count vector, so
supertile discrepancies need nothing but exact integer matrix powers.  The
geometric side (window ratios, the eroded family) runs on the integer cell
grid and stays exact as well.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .fixtures import load_ruleset
from .hierarchy import FaceTables, Hierarchy, exposed_face_count
from .qlinalg import mat_pow, mat_vec
from .spectra import SpectralReport
from .tiling import partition_level_counts

__all__ = [
    "DiscrepancyReport",
    "GrowthFit",
    "disc",
    "supertile_disc",
    "growth_fit",
    "growth_fit_all",
    "laczkovich_ratio",
    "window_harness",
    "vm_counts_paper",
    "vm_disc_paper",
    "vm_disc_closed_form",
    "vm_geometry",
    "VmRegion",
    "DegenerateWindowError",
]


class DegenerateWindowError(ValueError):
    code = "degenerate-window"


@dataclass(frozen=True)
class DiscrepancyReport:
    a_v: tuple[int, ...]
    points: int
    volume: Fraction
    disc: Fraction
    boundary: Fraction | None  # set when the region is geometric

    @property
    def ratio(self) -> Fraction | None:
        if self.boundary is None or self.boundary == 0:
            return None
        return abs(self.disc) / self.boundary


def disc(a, report: SpectralReport) -> Fraction:
    """<1, a> - alpha * <u1, a>, exactly (signed)."""
    if report.alpha is None or report.u1 is None:
        raise ValueError("report carries no exact density data")
    total = sum(a)
    vol = sum(Fraction(x) * u for x, u in zip(a, report.u1, strict=True))
    return total - report.alpha * vol


def count_report(a, report: SpectralReport, boundary: Fraction | None = None) -> DiscrepancyReport:
    a = tuple(int(x) for x in a)
    vol = sum(Fraction(x) * u for x, u in zip(a, report.u1, strict=True))
    return DiscrepancyReport(a, sum(a), vol, disc(a, report), boundary)


def supertile_disc(A, report: SpectralReport, j: int, m: int) -> Fraction:
    """disc of the level-m supertile of type j via exact matrix powers."""
    a = mat_vec(mat_pow(A, m), [1 if i == j else 0 for i in range(len(A))])
    return disc(a, report)


# ---------------------------------------------------------------------------
# growth-rate fits (Section on eigenvalue-driven growth; exponents only, the
# existence constants are not reproducible quantities)


@dataclass(frozen=True)
class GrowthFit:
    type_index: int
    samples: tuple[tuple[int, Fraction], ...]  # (m, |disc|), exact
    fitted_rate: float  # estimate of lim |disc_m|^(1/m)
    fitted_poly_degree: int  # estimate of the polynomial-in-m exponent
    degenerate: bool = False  # all sampled discrepancies vanished


def _fit_log_growth(samples: list[tuple[int, Fraction]]) -> tuple[float, int]:
    """Deterministic rate/degree fit on exact samples.

    Uses the last half of the samples; for each candidate polynomial degree g
    fits log2|disc_m| - g*log2(m) = a + s*m by least squares and keeps the
    degree with the smallest residual, reading the rate off that slope.
    """
    tail = samples[-((len(samples) + 1) // 2) :]
    pts = [(m, v) for m, v in tail if v != 0]
    if len(pts) < 3:
        return 0.0, 0
    xs = [m for m, _ in pts]
    logs = [math.log2(v.numerator) - math.log2(v.denominator) for _, v in pts]
    best = None
    for g in range(4):
        ys = [L - g * math.log2(m) for m, L in zip(xs, logs)]
        n = len(xs)
        mx = sum(xs) / n
        my = sum(ys) / n
        sxx = sum((x - mx) ** 2 for x in xs)
        sxy = sum((x - mx) * (y - my) for x, y in zip(xs, ys))
        slope = sxy / sxx
        sse = sum((y - (my + slope * (x - mx))) ** 2 for x, y in zip(xs, ys))
        if best is None or sse < best[0]:
            best = (sse, g, slope)
    _, g, slope = best
    return 2.0**slope, g


def growth_fit(A, report: SpectralReport, j: int, m_max: int) -> GrowthFit:
    """Growth of |disc| over level-m type-j supertiles, m = 1..m_max."""
    if m_max < 10:
        raise ValueError("m_max must be >= 10")
    n = len(A)
    samples = []
    P = [row[:] for row in A]
    for m in range(1, m_max + 1):
        a = [P[i][j] for i in range(n)]
        samples.append((m, abs(disc(a, report))))
        if m < m_max:
            P = [[sum(P[i][t] * A[t][jj] for t in range(n)) for jj in range(n)] for i in range(n)]
    if all(v == 0 for _, v in samples):
        return GrowthFit(j, tuple(samples), 0.0, 0, degenerate=True)
    rate, degree = _fit_log_growth(samples)
    return GrowthFit(j, tuple(samples), rate, degree)


def growth_fit_all(A, report: SpectralReport, m_max: int) -> tuple[list[GrowthFit], GrowthFit]:
    """Per-type fits plus the dominating witness (largest rate, then degree)."""
    fits = [growth_fit(A, report, j, m_max) for j in range(len(A))]
    witness = max(fits, key=lambda f: (not f.degenerate, f.fitted_rate, f.fitted_poly_degree))
    return fits, witness


# ---------------------------------------------------------------------------
# unit-cube window harness (criterion (ii) style falsification tool)


def _unit_shape(h: Hierarchy) -> tuple[int, ...]:
    if any(s % h.scale for s in h.grid_shape):
        raise ValueError("root box does not align with the unit lattice")
    return tuple(s // h.scale for s in h.grid_shape)


def point_count_grid(h: Hierarchy) -> np.ndarray:
    """Net points per unit lattice cell, under the half-open cell convention
    [i, i+1)^d.  For any window that is a union of whole tiles this matches
    the owned-point count exactly (barycenters are interior to their tiles);
    for other windows it is the fixed boundary convention of the harness."""
    grid = getattr(h, "_point_grid", None)
    if grid is None:
        b2 = h.barycenters_doubled()  # 2 * grid coords = 2*scale * unit coords
        cells = b2 // (2 * h.scale)
        grid = np.zeros(_unit_shape(h), dtype=np.int64)
        np.add.at(grid, tuple(cells[:, a] for a in range(h.dim)), 1)
        h._point_grid = grid
    return grid


def _points_in_window(h: Hierarchy, window: np.ndarray) -> int:
    return int(point_count_grid(h)[window].sum())


def laczkovich_ratio(h: Hierarchy, alpha: Fraction, window: np.ndarray) -> Fraction:
    """|#(Y cap U) - alpha * vol(U)| / perimeter(U) for a union U of unit
    lattice cells, all three quantities exact."""
    cells = int(np.count_nonzero(window))
    if cells == 0:
        return Fraction(0)
    points = _points_in_window(h, window)
    numerator = abs(points - alpha * cells)
    perimeter = exposed_face_count(window)
    if perimeter == 0:
        if numerator == 0:
            return Fraction(0)
        raise DegenerateWindowError("window with empty boundary but nonzero discrepancy")
    return numerator / perimeter


def random_window(shape: tuple[int, ...], rng) -> np.ndarray:
    """A random axis-aligned box snapped to the unit grid."""
    w = np.zeros(shape, dtype=bool)
    sl = []
    for s in shape:
        lo = rng.randrange(0, s)
        hi = rng.randrange(lo + 1, s + 1)
        sl.append(slice(lo, hi))
    w[tuple(sl)] = True
    return w


def window_harness(h: Hierarchy, alpha: Fraction, n_windows: int, seed: int, include_supertiles: bool = True):
    """Ratios over a seeded family of grid-snapped boxes plus (optionally)
    all supertile supports.  Returns a list of (label, ratio) pairs."""
    import random

    shape = _unit_shape(h)
    rng = random.Random(seed)
    out = []
    for i in range(n_windows):
        w = random_window(shape, rng)
        out.append((f"rand-{i}", laczkovich_ratio(h, alpha, w)))
    if include_supertiles:
        S = h.scale
        for lv in range(h.level + 1):
            for nid in h.level_nodes[lv]:
                lo = h.node_lo[nid]
                hi = h.node_hi[nid]
                if any(int(x) % S for x in np.concatenate([lo, hi])):
                    continue
                w = np.zeros(shape, dtype=bool)
                w[tuple(slice(int(a) // S, int(b) // S) for a, b in zip(lo, hi))] = True
                out.append((f"node-{nid}", laczkovich_ratio(h, alpha, w)))
                if lv <= 1:
                    break  # level 0/1 supports: one representative is enough
    return out


# ---------------------------------------------------------------------------
# the eroded-supertile family (3-D equality-case counterexample)


def vm_counts_paper(m: int) -> tuple[Fraction, ...]:
    """The literal per-level count schedule of the construction, kept as
    exact rationals (the top level is the non-integral 1/2)."""
    if m < 1:
        raise ValueError("m >= 1 required")
    out = [Fraction(6) * 4 ** (m - 1)]
    for k in range(1, m + 1):
        out.append(Fraction(2 * 4**m, 4 ** (k + 1)))
    return tuple(out)


def vm_disc_paper(m: int) -> Fraction:
    """Discrepancy of the schedule via the per-level count sums."""
    t = vm_counts_paper(m)
    a1 = sum(t[k] * (8**k - 4**k) / 4 for k in range(m + 1))
    a2 = sum(t[k] * (8**k + 4**k) / 2 for k in range(m + 1))
    return abs(a1 + a2 - Fraction(3, 4) * (2 * a1 + a2))


def vm_disc_closed_form(m: int) -> Fraction:
    return Fraction(m + 3, 8) * 4**m


@dataclass
class VmRegion:
    m: int
    hierarchy: Hierarchy
    leaf_mask: np.ndarray
    cell_mask: np.ndarray
    removed_levels: list[int]  # level of each removed column supertile
    report: DiscrepancyReport

    def partition_counts(self) -> dict[int, list[int]]:
        return partition_level_counts(self.hierarchy, self.leaf_mask)

    def removal_histogram(self) -> dict[int, int]:
        out: dict[int, int] = {}
        for lv in self.removed_levels:
            out[lv] = out.get(lv, 0) + 1
        return out


def _face_fully_on_boundary(U: np.ndarray, lo, hi, axis: int, side: int) -> bool:
    """Whether the given box face lies entirely in the boundary of U."""
    if side < 0:
        if lo[axis] == 0:
            return True
        sl = [slice(int(a), int(b)) for a, b in zip(lo, hi)]
        sl[axis] = slice(int(lo[axis]) - 1, int(lo[axis]))
    else:
        if hi[axis] == U.shape[axis]:
            return True
        sl = [slice(int(a), int(b)) for a, b in zip(lo, hi)]
        sl[axis] = slice(int(hi[axis]), int(hi[axis]) + 1)
    return not U[tuple(sl)].any()


def vm_geometry(m: int, report: SpectralReport, rs=None, budget_cells: int | None = None) -> VmRegion:
    """Build the eroded region on the shipped 3-D layout and measure it.

    Start from the level-(m+1) cube supertile, remove its unique level-m
    column supertile, then level by level (m-1 down to 1) remove every column
    supertile with at least two whole faces on the current region boundary
    (simultaneously per level).  Discrepancy comes from exact count-vector
    arithmetic; the boundary area from an exact voxel face census.
    """
    if m < 1:
        raise ValueError("m >= 1 required")
    rs = rs or load_ruleset("s4-3d")
    cells = 2 ** (3 * (m + 1))
    if budget_cells is not None and cells > budget_cells:
        raise ValueError(f"voxel budget exceeded: {cells} > {budget_cells}")
    i_col = rs.tile_index("T1")
    i_cube = rs.tile_index("T2")
    h = Hierarchy(rs, "T2", m + 1)
    U = h.cell_mask(np.ones(h.n_leaves, dtype=bool)).copy()
    alive = np.ones(h.n_leaves, dtype=bool)
    A = [[rs.counts[t.id].get(u.id, 0) for t in rs.tiles] for u in rs.tiles]
    a_v = [int(x) for x in mat_vec(mat_pow(A, m + 1), [1 if i == i_cube else 0 for i in range(rs.n)])]
    removed_levels: list[int] = []

    def remove(nid: int):
        lv = int(h.node_level[nid])
        removed_levels.append(lv)
        lo, hi = h.node_lo[nid], h.node_hi[nid]
        U[tuple(slice(int(a), int(b)) for a, b in zip(lo, hi))] = False
        alive[h.leaf_range_lo[nid] : h.leaf_range_hi[nid]] = False
        col_counts = mat_vec(mat_pow(A, lv), [1 if i == i_col else 0 for i in range(rs.n)])
        for i in range(rs.n):
            a_v[i] -= int(col_counts[i])

    top_cols = [c for c in h.children[0] if h.node_type[c] == i_col]
    assert len(top_cols) == 1, "root rule must contain exactly one column child"
    remove(top_cols[0])

    for lv in range(m - 1, 0, -1):
        to_remove = []
        for nid in h.level_nodes[lv]:
            if h.node_type[nid] != i_col or not alive[h.leaf_range_lo[nid]]:
                continue
            lo, hi = h.node_lo[nid], h.node_hi[nid]
            faces = 0
            for axis in range(3):
                for side in (-1, 1):
                    if _face_fully_on_boundary(U, lo, hi, axis, side):
                        faces += 1
                        if faces >= 2:
                            break
                if faces >= 2:
                    break
            if faces >= 2:
                to_remove.append(nid)
        for nid in to_remove:
            remove(nid)

    boundary = Fraction(exposed_face_count(U)) * h.cell_face_area
    rep = count_report(a_v, report, boundary)
    return VmRegion(m, h, alive, U, removed_levels, rep)
