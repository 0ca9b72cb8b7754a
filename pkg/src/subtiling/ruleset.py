"""Substitution rules on axis-aligned boxes, their rule-file format, and the
substitution matrix.

A rule set dissects each inflated basic tile into translated copies of the
basic tiles.  Geometry is restricted to rectilinear boxes under translation,
which keeps every measure (volume, facet area) an exact rational.  A rule set
may also be "matrix" mode: only child-type counts are known and all geometric
operations are unavailable.
"""

from __future__ import annotations


from dataclasses import dataclass
from fractions import Fraction
from functools import reduce

from .qlinalg import mat_mul

__all__ = [
    "TileType",
    "ChildPlacement",
    "RuleSet",
    "RuleFileSyntaxError",
    "RuleValidationError",
    "parse_ruleset",
    "serialize_ruleset",
    "substitution_matrix",
    "primitivity_check",
]


class RuleFileSyntaxError(ValueError):
    """Malformed rule file; carries 1-based line and column."""

    def __init__(self, line: int, col: int, msg: str):
        super().__init__(f"line {line}, col {col}: {msg}")
        self.line = line
        self.col = col


class RuleValidationError(ValueError):
    """A structurally valid rule file that violates a rule-set invariant."""

    def __init__(self, kind: str, msg: str):
        super().__init__(f"{kind}: {msg}")
        self.kind = kind


@dataclass(frozen=True)
class TileType:
    """A basic tile: an axis-aligned box with symbolic id and rational sides."""

    id: str
    extent: tuple[Fraction, ...]

    @property
    def volume(self) -> Fraction:
        return reduce(lambda a, b: a * b, self.extent, Fraction(1))

    @property
    def surface(self) -> Fraction:
        # sum of facet areas: 2 * sum_j prod_{i != j} extent_i
        v = self.volume
        return 2 * sum(v / e for e in self.extent)

    @property
    def diameter_sq(self) -> Fraction:
        return sum(e * e for e in self.extent)


@dataclass(frozen=True)
class ChildPlacement:
    """One child tile translated to `offset` inside the inflated parent box."""

    tile: str
    offset: tuple[Fraction, ...]


@dataclass(frozen=True)
class RuleSet:
    dimension: int
    inflation: Fraction
    tiles: tuple[TileType, ...]
    rules: dict[str, tuple[ChildPlacement, ...]]  # geometric mode
    counts: dict[str, dict[str, int]]  # child-type counts, both modes
    mode: str  # "geometric" | "matrix"

    @property
    def n(self) -> int:
        return len(self.tiles)

    @property
    def geometric(self) -> bool:
        return self.mode == "geometric"

    def tile_index(self, tile_id: str) -> int:
        for i, t in enumerate(self.tiles):
            if t.id == tile_id:
                return i
        raise KeyError(tile_id)

    def tile(self, tile_id: str) -> TileType:
        return self.tiles[self.tile_index(tile_id)]

    def volumes(self) -> tuple[Fraction, ...]:
        return tuple(t.volume for t in self.tiles)

    def surfaces(self) -> tuple[Fraction, ...]:
        return tuple(t.surface for t in self.tiles)

    @property
    def lambda1(self) -> Fraction:
        return self.inflation**self.dimension


def _parse_rational(tok: str, line: int, col: int) -> Fraction:
    try:
        if "/" in tok:
            p, q = tok.split("/", 1)
            return Fraction(int(p), int(q))
        return Fraction(int(tok))
    except (ValueError, ZeroDivisionError):
        raise RuleFileSyntaxError(line, col, f"bad rational literal {tok!r}") from None


def _tokenize(line: str) -> list[tuple[str, int]]:
    """Split one line into (token, 1-based column) pairs, dropping comments."""
    out = []
    i = 0
    while i < len(line):
        if line[i] == "#":
            break
        if line[i].isspace():
            i += 1
            continue
        j = i
        while j < len(line) and not line[j].isspace() and line[j] != "#":
            j += 1
        out.append((line[i:j], i + 1))
        i = j
    return out


def parse_ruleset(text: str) -> RuleSet:
    """Parse and fully validate a rule file.  See the module docstring for the
    grammar; raises RuleFileSyntaxError / RuleValidationError."""
    dimension = None
    inflation = None
    mode = None
    tiles: list[TileType] = []
    tile_ids: set[str] = set()
    rules: dict[str, list[ChildPlacement]] = {}
    counts: dict[str, dict[str, int]] = {}
    current_rule: str | None = None

    for lineno, raw in enumerate(text.splitlines(), start=1):
        toks = _tokenize(raw)
        if not toks:
            continue
        head, col0 = toks[0]

        if head in ("dimension", "inflation", "mode"):
            if len(toks) != 3 or toks[1][0] != "=":
                raise RuleFileSyntaxError(lineno, col0, f"expected `{head} = <value>`")
            val, vcol = toks[2]
            if head == "dimension":
                try:
                    dimension = int(val)
                except ValueError:
                    raise RuleFileSyntaxError(lineno, vcol, f"bad integer {val!r}") from None
            elif head == "inflation":
                inflation = _parse_rational(val, lineno, vcol)
            else:
                if val not in ("geometric", "matrix"):
                    raise RuleFileSyntaxError(lineno, vcol, f"mode must be geometric|matrix, got {val!r}")
                mode = val
            current_rule = None
        elif head == "tile":
            if dimension is None:
                raise RuleFileSyntaxError(lineno, col0, "tile before `dimension =` header")
            if len(toks) != 3 + dimension or toks[2][0] != "extent":
                raise RuleFileSyntaxError(lineno, col0, f"expected `tile <id> extent <r1> ... <r{dimension}>`")
            tid = toks[1][0]
            if tid in tile_ids:
                raise RuleValidationError("duplicate-tile", f"tile {tid!r} declared twice")
            ext = tuple(_parse_rational(t, lineno, c) for t, c in toks[3:])
            if any(e <= 0 for e in ext):
                raise RuleValidationError("bad-extent", f"tile {tid!r} has a non-positive side")
            tiles.append(TileType(tid, ext))
            tile_ids.add(tid)
            current_rule = None
        elif head == "rule":
            if len(toks) != 2 or not toks[1][0].endswith(":"):
                raise RuleFileSyntaxError(lineno, col0, "expected `rule <id>:`")
            tid = toks[1][0][:-1]
            if tid not in tile_ids:
                raise RuleValidationError("unknown-tile", f"rule for undeclared tile {tid!r}")
            if tid in rules or tid in counts:
                raise RuleValidationError("duplicate-rule", f"rule for {tid!r} given twice")
            current_rule = tid
            rules.setdefault(tid, [])
            counts.setdefault(tid, {})
        elif head == "child":
            if current_rule is None:
                raise RuleFileSyntaxError(lineno, col0, "child line outside a rule block")
            if dimension is None or len(toks) != 3 + dimension or toks[2][0] != "at":
                raise RuleFileSyntaxError(lineno, col0, f"expected `child <id> at <r1> ... <r{dimension}>`")
            cid = toks[1][0]
            if cid not in tile_ids:
                raise RuleValidationError("unknown-tile", f"child of unknown type {cid!r} in rule {current_rule!r}")
            off = tuple(_parse_rational(t, lineno, c) for t, c in toks[3:])
            rules[current_rule].append(ChildPlacement(cid, off))
            counts[current_rule][cid] = counts[current_rule].get(cid, 0) + 1
        elif head == "count":
            if current_rule is None:
                raise RuleFileSyntaxError(lineno, col0, "count line outside a rule block")
            if len(toks) != 3:
                raise RuleFileSyntaxError(lineno, col0, "expected `count <id> <k>`")
            cid = toks[1][0]
            if cid not in tile_ids:
                raise RuleValidationError("unknown-tile", f"count for unknown type {cid!r} in rule {current_rule!r}")
            try:
                k = int(toks[2][0])
            except ValueError:
                raise RuleFileSyntaxError(lineno, toks[2][1], f"bad integer {toks[2][0]!r}") from None
            if k < 0:
                raise RuleValidationError("bad-count", f"negative count for {cid!r}")
            counts[current_rule][cid] = counts[current_rule].get(cid, 0) + k
        else:
            raise RuleFileSyntaxError(lineno, col0, f"unknown directive {head!r}")

    if dimension is None or dimension < 1:
        raise RuleValidationError("bad-dimension", "missing or non-positive dimension")
    if inflation is None or inflation <= 1:
        raise RuleValidationError("bad-inflation", "inflation must be a rational > 1")
    if not tiles:
        raise RuleValidationError("no-tiles", "no tiles declared")
    if mode is None:
        mode = "geometric"
    if mode == "matrix":
        for tid in tile_ids:
            if rules.get(tid):
                raise RuleValidationError("mode-mismatch", f"child lines in matrix-only rule {tid!r}")
    else:
        for tid, cnts in counts.items():
            if cnts and not rules.get(tid):
                raise RuleValidationError("mode-mismatch", f"count lines in geometric rule {tid!r}")

    for t in tiles:
        if t.id not in counts:
            raise RuleValidationError("missing-rule", f"tile {t.id!r} has no rule")

    rs = RuleSet(
        dimension=dimension,
        inflation=inflation,
        tiles=tuple(tiles),
        rules={k: tuple(v) for k, v in rules.items()} if mode == "geometric" else {},
        counts=counts,
        mode=mode,
    )
    _validate(rs)
    return rs


def _boxes_overlap(lo1, hi1, lo2, hi2) -> bool:
    return all(a1 < b2 and a2 < b1 for a1, b1, a2, b2 in zip(lo1, hi1, lo2, hi2))


def _validate(rs: RuleSet) -> None:
    xi_d = rs.inflation**rs.dimension
    by_id = {t.id: t for t in rs.tiles}
    for parent in rs.tiles:
        target = xi_d * parent.volume
        if rs.geometric:
            placements = rs.rules[parent.id]
            parent_hi = tuple(rs.inflation * e for e in parent.extent)
            boxes = []
            for ch in placements:
                ct = by_id[ch.tile]
                lo = ch.offset
                hi = tuple(o + e for o, e in zip(ch.offset, ct.extent))
                if any(a < 0 for a in lo) or any(b > p for b, p in zip(hi, parent_hi)):
                    raise RuleValidationError(
                        "child-outside-parent",
                        f"rule {parent.id!r}: child {ch.tile!r} at {ch.offset} leaves the inflated box",
                    )
                boxes.append((lo, hi, ch))
            for i in range(len(boxes)):
                for j in range(i + 1, len(boxes)):
                    if _boxes_overlap(boxes[i][0], boxes[i][1], boxes[j][0], boxes[j][1]):
                        raise RuleValidationError(
                            "overlap",
                            f"rule {parent.id!r}: children {boxes[i][2].tile!r}@{boxes[i][2].offset} "
                            f"and {boxes[j][2].tile!r}@{boxes[j][2].offset} overlap",
                        )
            total = sum(by_id[ch.tile].volume for ch in placements)
            # children are inside and pairwise disjoint, so a total-volume match
            # certifies an exact partition of the inflated box
            if total != target:
                raise RuleValidationError(
                    "gap",
                    f"rule {parent.id!r}: children cover {total} of {target}",
                )
        else:
            total = sum(by_id[cid].volume * k for cid, k in rs.counts[parent.id].items())
            if total != target:
                raise RuleValidationError(
                    "volume-mismatch",
                    f"rule {parent.id!r}: child volumes total {total}, expected {target}",
                )


def serialize_ruleset(rs: RuleSet) -> str:
    """Canonical rule-file text; parse_ruleset(serialize_ruleset(rs)) == rs."""

    def rat(x: Fraction) -> str:
        return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"

    lines = [
        f"dimension = {rs.dimension}",
        f"inflation = {rat(rs.inflation)}",
        f"mode = {rs.mode}",
    ]
    for t in rs.tiles:
        lines.append(f"tile {t.id} extent " + " ".join(rat(e) for e in t.extent))
    for t in rs.tiles:
        lines.append(f"rule {t.id}:")
        if rs.geometric:
            for ch in rs.rules[t.id]:
                lines.append(f"  child {ch.tile} at " + " ".join(rat(o) for o in ch.offset))
        else:
            for u in rs.tiles:
                k = rs.counts[t.id].get(u.id, 0)
                if k:
                    lines.append(f"  count {u.id} {k}")
    return "\n".join(lines) + "\n"


def substitution_matrix(rs: RuleSet) -> list[list[int]]:
    """Entry (i, j) counts the type-i children in the rule for tile j."""
    ids = [t.id for t in rs.tiles]
    return [[rs.counts[pj].get(ci, 0) for pj in ids] for ci in ids]


def primitivity_check(A: list[list[int]]) -> tuple[bool, int | None]:
    """Whether some power of A is entrywise positive.

    Checks powers up to the Wielandt bound n^2 - 2n + 2 and returns the least
    witness exponent when primitive.
    """
    n = len(A)
    if any(len(row) != n for row in A):
        raise ValueError("matrix is not square")
    if any(x < 0 for row in A for x in row):
        raise ValueError("matrix has negative entries")
    bound = n * n - 2 * n + 2
    P = [row[:] for row in A]
    for m in range(1, bound + 1):
        if all(x > 0 for row in P for x in row):
            return True, m
        if m < bound:
            P = mat_mul(P, A)
            # cap entries to keep boolean reachability cheap on large powers
            P = [[1 if x > 0 else 0 for x in row] for row in P]
    return False, None


def wielandt_bound(n: int) -> int:
    return n * n - 2 * n + 2


def check_left_eigenvector(A: list[list[int]], volumes, lam: Fraction) -> bool:
    """u^T A == lam * u^T, exactly."""
    n = len(A)
    lhs = [sum(Fraction(volumes[i]) * A[i][j] for i in range(n)) for j in range(n)]
    return all(lhs[j] == lam * Fraction(volumes[j]) for j in range(n))


def volume_conservation_holds(rs: RuleSet) -> bool:
    """sum_i a_ij s_i == xi^d s_j for every column j."""
    A = substitution_matrix(rs)
    return check_left_eigenvector(A, rs.volumes(), rs.lambda1)
