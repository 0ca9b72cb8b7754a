"""Command-line frontend: analyze | classify | tile | disc | pack | example-vm.

All outputs are byte-deterministic given flags and seed: JSON is emitted with
sorted keys, rationals as "p/q" strings, and floats only where a value is an
estimate (growth fits, window ratios in decimal columns).
"""

from __future__ import annotations

import argparse
import json
import random
import sys
from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction
from pathlib import Path

import numpy as np

from . import discrepancy as dsc
from . import fixtures, packing, tiling
from .classifier import classify
from .hierarchy import BudgetExceededError, Hierarchy
from .ruleset import (
    RuleFileSyntaxError,
    RuleSet,
    RuleValidationError,
    parse_ruleset,
    substitution_matrix,
)
from .spectra import AnalysisError, analyze_matrix, analyze_ruleset, report_to_jsonable


class CliError(Exception):
    def __init__(self, code: str, msg: str):
        super().__init__(msg)
        self.code = code


def _rat(q) -> str:
    q = Fraction(q)
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def _parse_rat(s: str) -> Fraction:
    if "/" in s:
        p, q = s.split("/", 1)
        return Fraction(int(p), int(q))
    return Fraction(int(s))


def _load_input(args) -> tuple[RuleSet | None, list[list[int]], int, Fraction | None, tuple | None, str]:
    """Resolve --fixture | rule-file | --matrix into (ruleset?, matrix, d,
    inflation?, volumes?, note)."""
    if getattr(args, "matrix", None):
        if args.dimension is None or args.inflation is None:
            raise CliError("usage", "--matrix requires --dimension and --inflation")
        rows = [r for r in args.matrix.replace(" ", "").split(";") if r]
        A = [[int(x) for x in r.split(",")] for r in rows]
        if any(len(r) != len(A) for r in A):
            raise CliError("usage", "--matrix must be square (rows separated by ';')")
        infl = _parse_rat(args.inflation)
        return None, A, args.dimension, infl, None, ""
    name = getattr(args, "fixture", None)
    if name:
        if name in fixtures.FIXTURES:
            rs = fixtures.load_ruleset(name)
            note = fixtures.get_fixture(name).note
        else:
            path = Path(name)
            if not path.exists():
                raise CliError("unknown-fixture", f"no fixture or rule file named {name!r}")
            rs = parse_ruleset(path.read_text())
            note = ""
        return rs, substitution_matrix(rs), rs.dimension, rs.inflation, rs.volumes(), note
    raise CliError("usage", "one of --fixture/--matrix is required")


def _cmd_analyze(args) -> int:
    rs, A, d, infl, volumes, _ = _load_input(args)
    lam1 = infl**d if infl is not None else None
    report = analyze_matrix(A, volumes=volumes, lambda1=lam1)
    doc = report_to_jsonable(report)
    doc["dimension"] = d
    doc["inflation"] = _rat(infl) if infl is not None else None
    _emit_json(args, doc, "analysis.json")
    return 0


def _cmd_classify(args) -> int:
    rs, A, d, infl, volumes, note = _load_input(args)
    lam1 = infl**d if infl is not None else None
    report = analyze_matrix(A, volumes=volumes, lambda1=lam1)
    c = classify(report, d, note=note)
    doc = {
        "verdict": c.verdict,
        "case": c.case_tag,
        "certificate": c.certificate,
        "t": report.t,
        "k_t": report.k_t,
        "lambda_t": report.lambda_t.describe() if report.lambda_t else None,
        "alpha": _rat(report.alpha) if report.alpha is not None else None,
    }
    _emit_json(args, doc, "classification.json")
    return 0


def _require_geometric(rs: RuleSet | None):
    if rs is None or not rs.geometric:
        raise CliError("matrix-only", "this command needs a geometric rule set")


def _cmd_tile(args) -> int:
    rs, _, d, _, _, _ = _load_input(args)
    _require_geometric(rs)
    patch = tiling.supertile(rs, args.type, args.levels, budget=args.budget)
    if args.out:
        doc = {
            "root_type": patch.root_type,
            "level": patch.root_level,
            "count_vector": tiling.count_vector(patch),
            "tiles": [
                {
                    "type": t.type_id,
                    "origin": [_rat(c) for c in t.origin],
                    "path": list(t.path),
                }
                for t in patch.tiles
            ],
        }
        _write_text(args, args.out, json.dumps(doc, sort_keys=True, indent=2) + "\n")
    if args.svg:
        if d != 2:
            raise CliError("usage", "--svg requires a 2-D rule set")
        _write_text(args, args.svg, tiling.patch_to_svg(patch))
    if not args.out and not args.svg:
        print(json.dumps({"count_vector": tiling.count_vector(patch)}, sort_keys=True))
    return 0


def _csv_row(cols) -> str:
    return ",".join(str(c) for c in cols)


def _cmd_disc(args) -> int:
    rs, A, d, infl, volumes, _ = _load_input(args)
    lam1 = infl**d if infl is not None else None
    report = analyze_matrix(A, volumes=volumes, lambda1=lam1)
    rows = [_csv_row(["id", "points", "volume", "disc", "boundary", "ratio"])]
    if args.mode == "supertile":
        tids = [t.id for t in rs.tiles] if rs else [str(i) for i in range(len(A))]
        j = tids.index(args.type) if args.type else 0
        surf0 = rs.surfaces()[j] if rs and rs.geometric else None
        for m in range(0, args.m_max + 1):
            a = [int(x) for x in np.array(_mat_pow_col(A, m, j))]
            rep = dsc.count_report(a, report)
            boundary = ""
            ratio = ""
            if surf0 is not None:
                b = surf0 * infl ** (m * (d - 1))
                boundary = _rat(b)
                ratio = f"{float(abs(rep.disc) / b):.12g}"
            rows.append(_csv_row([m, rep.points, _rat(rep.volume), _rat(rep.disc), boundary, ratio]))
        fits, witness = dsc.growth_fit_all(A, report, max(10, args.m_max))
        print(
            json.dumps(
                {
                    "witness_type": witness.type_index,
                    "fitted_rate": round(witness.fitted_rate, 6),
                    "fitted_poly_degree": witness.fitted_poly_degree,
                    "degenerate": witness.degenerate,
                },
                sort_keys=True,
            )
        )
    elif args.mode == "windows":
        _require_geometric(rs)
        h = Hierarchy(rs, args.type or rs.tiles[0].id, args.levels, budget=args.budget)
        pairs = _windows_parallel(h, report.alpha, args.windows, args.seed, args.threads)
        for label, ratio in pairs:
            rows.append(_csv_row([label, "", "", "", "", f"{float(ratio):.12g}"]))
        print(json.dumps({"max_ratio": f"{float(max(r for _, r in pairs)):.12g}"}, sort_keys=True))
    else:  # vm
        if tuple(tuple(r) for r in A) != fixtures.get_fixture("s4-3d").matrix:
            raise CliError("usage", "vm mode reproduces the built-in 3-D fixture; use --fixture s4-3d")
        for m in range(1, args.m_max + 1):
            vr = dsc.vm_geometry(m, report, rs=rs)
            rep = vr.report
            rows.append(
                _csv_row(
                    [m, rep.points, _rat(rep.volume), _rat(rep.disc), _rat(rep.boundary), f"{float(rep.ratio):.12g}"]
                )
            )
    if args.csv:
        _write_text(args, args.csv, "\n".join(rows) + "\n")
    else:
        for r in rows:
            print(r)
    return 0


def _mat_pow_col(A, m, j):
    from .qlinalg import mat_pow

    P = mat_pow(A, m)
    return [P[i][j] for i in range(len(A))]


def _windows_parallel(h, alpha, n, seed, threads):
    rng = random.Random(seed)
    shape = dsc._unit_shape(h)
    windows = [dsc.random_window(shape, rng) for _ in range(n)]

    def ratio(iw):
        i, w = iw
        return (f"rand-{i}", dsc.laczkovich_ratio(h, alpha, w))

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as ex:
            return list(ex.map(ratio, enumerate(windows)))
    return [ratio(x) for x in enumerate(windows)]


def _cmd_pack(args) -> int:
    rs, A, d, infl, volumes, _ = _load_input(args)
    _require_geometric(rs)
    fx_eps = None
    if args.fixture in fixtures.FIXTURES:
        fx_eps = fixtures.get_fixture(args.fixture).packing_epsilon
    eps = fx_eps if args.epsilon == "auto" else _parse_rat(args.epsilon)
    if eps is None:
        eps = Fraction(1, 16)
    cfg = packing.PackingConfig.for_ruleset(rs, epsilon=eps)
    root_type = args.type or rs.tiles[0].id
    h = Hierarchy(rs, root_type, args.level, budget=args.budget)
    rng = random.Random(args.seed)
    rows = [_csv_row(["sample", "level", "count", "bound-ratio"])]
    exprs = {}
    for s in range(args.samples):
        V = packing.random_aligned_region(h, 0, rng)
        if not V.any():
            continue
        res = packing.economic_pack(h, V, cfg=cfg)
        bnd = packing.boundary_in_interior(h, V, h.node_lo[0], h.node_hi[0])
        for lv in sorted(res.per_level_counts):
            cnt = res.per_level_counts[lv]
            if bnd > 0:
                ratio = Fraction(cnt) * infl ** (lv * (d - 1)) / bnd
                rows.append(_csv_row([s, lv, cnt, f"{float(ratio):.12g}"]))
            else:
                rows.append(_csv_row([s, lv, cnt, ""]))
        if args.expr_json:
            exprs[str(s)] = res.expr.to_jsonable(h)
    if args.csv:
        _write_text(args, args.csv, "\n".join(rows) + "\n")
    else:
        for r in rows:
            print(r)
    if args.expr_json:
        _write_text(args, args.expr_json, json.dumps(exprs, sort_keys=True, indent=2) + "\n")
    return 0


def _cmd_example_vm(args) -> int:
    rs = fixtures.load_ruleset("s4-3d")
    report = analyze_ruleset(rs)
    m = args.m
    algebraic = dsc.vm_disc_paper(m)
    closed = dsc.vm_disc_closed_form(m)
    vr = dsc.vm_geometry(m, report, rs=rs)
    doc = {
        "m": m,
        "schedule_disc": _rat(algebraic),
        "closed_form": _rat(closed),
        "closed_form_exact_match": algebraic == closed,
        "geometry_disc": _rat(abs(vr.report.disc)),
        "geometry_boundary": _rat(vr.report.boundary),
        "geometry_ratio": f"{float(vr.report.ratio):.12g}",
        "schedule_vs_geometry_difference": _rat(abs(vr.report.disc) - algebraic),
    }
    _emit_json(args, doc, "example-vm.json")
    return 0


def _emit_json(args, doc, default_name: str):
    text = json.dumps(doc, sort_keys=True, indent=2) + "\n"
    out_dir = getattr(args, "out_dir", None)
    if out_dir:
        path = Path(out_dir) / default_name
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(text)
    sys.stdout.write(text)


def _write_text(args, name: str, text: str):
    path = Path(name)
    if getattr(args, "out_dir", None) and not path.is_absolute():
        path = Path(args.out_dir) / path
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="subtiling",
        description="Exact spectral analysis and bounded-displacement classification of box-substitution tilings",
    )
    ap.add_argument("--threads", type=int, default=1, help="worker pool size (default 1 for reproducible runs)")
    ap.add_argument("--seed", type=int, default=0, help="seed for all randomized sampling")
    ap.add_argument("--out-dir", default=None, help="directory for emitted artifacts")
    sub = ap.add_subparsers(dest="command", required=True)

    def add_input(p, matrix_ok=True):
        p.add_argument("--fixture", help="built-in fixture name or rule-file path")
        if matrix_ok:
            p.add_argument("--matrix", help='row-major integer matrix, e.g. "6,1;4,6"')
            p.add_argument("--dimension", type=int, help="ambient dimension d (with --matrix)")
            p.add_argument("--inflation", help="inflation constant, integer or p/q (with --matrix)")

    p = sub.add_parser("analyze", help="emit the spectral report as deterministic JSON")
    add_input(p)
    p.set_defaults(func=_cmd_analyze)

    p = sub.add_parser("classify", help="bounded-displacement verdict")
    add_input(p)
    p.set_defaults(func=_cmd_classify)

    p = sub.add_parser("tile", help="generate a supertile patch")
    add_input(p, matrix_ok=False)
    p.add_argument("--type", required=True, help="root tile type id")
    p.add_argument("--levels", type=int, required=True, help="number of substitution levels")
    p.add_argument("--out", help="patch JSON output path")
    p.add_argument("--svg", help="SVG output path (d = 2 only)")
    p.add_argument("--budget", type=int, default=10**7, help="tile budget")
    p.set_defaults(func=_cmd_tile)

    p = sub.add_parser("disc", help="discrepancy experiments")
    add_input(p)
    p.add_argument("--mode", choices=["supertile", "windows", "vm"], default="supertile")
    p.add_argument("--type", help="tile type (supertile root / windows root)")
    p.add_argument("--m-max", dest="m_max", type=int, default=12)
    p.add_argument("--levels", type=int, default=5, help="supertile level for windows mode")
    p.add_argument("--windows", type=int, default=200, help="window count for windows mode")
    p.add_argument("--csv", help="CSV output path")
    p.add_argument("--budget", type=int, default=10**7)
    p.set_defaults(func=_cmd_disc)

    p = sub.add_parser("pack", help="economic packing experiments")
    add_input(p, matrix_ok=False)
    p.add_argument("--type", help="root tile type (default: first tile)")
    p.add_argument("--level", type=int, required=True)
    p.add_argument("--samples", type=int, default=20)
    p.add_argument("--epsilon", default="auto", help='boundary threshold, "p/q" or "auto"')
    p.add_argument("--csv", help="CSV output path")
    p.add_argument("--expr-json", dest="expr_json", help="dump packing expressions as nested JSON")
    p.add_argument("--budget", type=int, default=10**7)
    p.set_defaults(func=_cmd_pack)

    p = sub.add_parser("example-vm", help="eroded-supertile family: schedule identity vs geometry")
    p.add_argument("--m", type=int, required=True)
    p.set_defaults(func=_cmd_example_vm)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        return args.func(args)
    except CliError as e:
        print(f"error: {e.code}: {e}", file=sys.stderr)
        return 2 if e.code == "usage" else 1
    except (AnalysisError, RuleFileSyntaxError, RuleValidationError, BudgetExceededError) as e:
        code = getattr(e, "code", None) or getattr(e, "kind", None) or "invalid-input"
        print(f"error: {code}: {e}", file=sys.stderr)
        return 1
    except packing.PackingPreconditionError as e:
        print(f"error: {e.code}: {e}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
