"""Command line surface tying the modules together.

Subcommands: solve, spots, corona, heesch, cluster, render, verify-all.

Exit codes: 0 success, 1 verification failure, 2 bad input or domain
error, 3 search budget exhausted.  Angles are printed in degrees to two
decimals; JSON artifacts carry full double precision and are written
with sorted keys so identical runs emit identical bytes.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from pathlib import Path

from . import catalog, corona, geom, render, solver, spots

EXIT_OK = 0
EXIT_VERIFY = 1
EXIT_INPUT = 2
EXIT_BUDGET = 3

# user-facing names for the placement models
MODE_NAMES = {"eec": corona.EEC_ONLY, "eec+collinear": corona.EEC_PLUS_COLLINEAR}


def _params(args) -> dict:
    params = {}
    if getattr(args, "n", None) is not None:
        params["n"] = args.n
    if getattr(args, "m", None) is not None:
        params["m"] = args.m
    return params


def _solve_tile(args) -> solver.Pentagon:
    return solver.solve_category(args.category, _params(args))


def _mode(args) -> str:
    return MODE_NAMES[args.mode]


def _deg2(v: float) -> str:
    s = "%.2f" % float(v)
    return s.rstrip("0").rstrip(".") or "0"


def _dump_json(obj, path=None) -> None:
    text = json.dumps(obj, indent=2, sort_keys=True) + "\n"
    if path is None:
        sys.stdout.write(text)
    else:
        Path(path).write_text(text, encoding="utf-8", newline="\n")


def cmd_solve(args) -> int:
    p = _solve_tile(args)
    print(", ".join(_deg2(a) for a in p.angles_deg))
    _dump_json(solver.pentagon_json(p), args.out)
    return EXIT_OK


def cmd_spots(args) -> int:
    p = _solve_tile(args)
    rows = [{"multiset": s.label, "sum_deg": round(s.sum_deg, 7),
             "class": s.kind, "witness": s.witness_str()}
            for s in spots.enumerate_spots(p, tol=args.tolerance)]
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=("multiset", "sum_deg", "class",
                                        "witness"), lineterminator="\n")
    w.writeheader()
    w.writerows(rows)
    if args.out:
        Path(args.out).write_text(buf.getvalue(), encoding="utf-8",
                                  newline="\n")
    else:
        sys.stdout.write(buf.getvalue())
    rep = spots.verify_remarks(args.category, _params(args))
    print("recorded labels matched: %d" % len(rep["matched"]))
    for c in rep["contradicting"]:
        print("CONTRADICTION %s recorded %s: %s"
              % (c["label"], c["recorded"], c["problem"]))
    if rep["missing_from_remarks"]:
        print("enumerated but unrecorded: %s"
              % ", ".join(rep["missing_from_remarks"]))
    return EXIT_OK if rep["ok"] else EXIT_VERIFY


def cmd_corona(args) -> int:
    p = _solve_tile(args)
    variants = corona.first_corona_census(
        p, mode=_mode(args), search_budget=args.budget,
        reflections=not args.no_reflections)
    print("%d completed first corona(s), mode %s" % (len(variants), args.mode))
    for i, pat in enumerate(variants):
        print("  variant %d: %d tiles" % (i + 1, len(pat.layers[0])))
    if args.out:
        _dump_json({"mode": args.mode,
                    "variants": [v.to_json() for v in variants]}, args.out)
    return EXIT_OK


def cmd_heesch(args) -> int:
    p = _solve_tile(args)
    rep = corona.heesch_bound(
        p, mode=_mode(args), layer_limit=args.layers,
        search_budget=args.budget, reflections=not args.no_reflections)
    print("layers_completed: %d" % rep.layers_completed)
    print("status: %s" % rep.status)
    if rep.certificate:
        gaps = ", ".join("%.6f" % c["gap_deg"] for c in rep.certificate)
        print("dead spot gap(s): %s" % gaps)
    if rep.caveat:
        print("caveat: %s" % rep.caveat)
    if args.out:
        _dump_json(rep.to_json(), args.out)
    return EXIT_OK


def cmd_cluster(args) -> int:
    p = _solve_tile(args)
    found = corona.find_surroundable_cluster(
        p, size=3, mode=_mode(args), search_budget=args.budget,
        reflections=not args.no_reflections)
    if found is None:
        print("no 3-tile cluster surrounded exactly once was found")
        return EXIT_VERIFY
    placements, rep = found
    print("3-tile cluster surrounded once, then %s" % rep.status)
    if args.out:
        _dump_json({"cluster": [pl.to_json() for pl in placements],
                    "report": rep.to_json()}, args.out)
    return EXIT_OK


def cmd_render(args) -> int:
    try:
        data = json.loads(Path(args.patch).read_text(encoding="utf-8"))
        pat = corona.Patch.from_json(data)
        svg = render.render_patch(pat)
    except (OSError, ValueError, KeyError, TypeError, IndexError,
            corona.CoronaError) as e:
        sys.stderr.write("malformed patch: %s\n" % e)
        return EXIT_INPUT
    Path(args.out).write_text(svg, encoding="utf-8", newline="\n")
    return EXIT_OK


def _verify_tables(outdir: Path, tol: float) -> bool:
    rows_out = []
    all_ok = True
    for row in catalog.reference_rows():
        p = solver.solve_category(row.category, row.params)
        errs = [abs(a - e) for a, e in zip(p.angles_deg, row.angles_deg)]
        ok = max(errs) <= tol
        all_ok &= ok
        rows_out.append({
            "category": row.category, "params": dict(row.params),
            "angles_deg": [float(a) for a in p.angles_deg],
            "printed_deg": [float(e) for e in row.angles_deg],
            "max_err_deg": round(max(errs), 9), "ok": ok})
    _dump_json({"tolerance_deg": tol, "rows": rows_out, "ok": all_ok},
               outdir / "solutions.json")
    return all_ok


def _verify_spots(outdir: Path) -> bool:
    reports = []
    all_ok = True
    for row in catalog.reference_rows():
        rep = spots.verify_remarks(row.category, row.params)
        if row.arrangements is not None:
            p = solver.solve_category(row.category, row.params)
            bad = [s for s in row.arrangements.values()
                   if not spots.arrangement_realizable(p, s)]
            rep["unrealizable_arrangements"] = bad
            rep["ok"] = rep["ok"] and not bad
        all_ok &= rep["ok"]
        reports.append(rep)
    _dump_json({"reports": reports, "ok": all_ok}, outdir / "spots.json")
    return all_ok


def _verify_type7(outdir: Path) -> bool:
    t7 = solver.type7_uniqueness_check()
    ok = bool(t7["always_two"])
    _dump_json(t7, outdir / "type7.json")
    return ok


def _verify_heesch(outdir: Path, budget: int) -> bool:
    results = []
    all_ok = True
    cat1_report = None
    for row in catalog.reference_rows():
        p = solver.solve_category(row.category, row.params)
        if math.isinf(row.heesch):
            rep = corona.heesch_bound(p, layer_limit=2, search_budget=budget)
            ok = (rep.layers_completed == 2
                  and rep.status == corona.LAYER_LIMIT_REACHED)
        else:
            rep = corona.heesch_bound(p, search_budget=budget)
            ok = (rep.layers_completed == 1
                  and rep.status in (corona.DEAD_SPOT_CERTIFICATE,
                                     corona.SEARCH_EXHAUSTED))
        all_ok &= ok
        results.append({
            "category": row.category, "params": dict(row.params),
            "printed_heesch": "inf" if math.isinf(row.heesch) else row.heesch,
            "layers_completed": rep.layers_completed,
            "status": rep.status, "stats": rep.stats, "ok": ok})
        if row.category == 1:
            cat1_report = rep
    _dump_json({"results": results, "ok": all_ok}, outdir / "heesch.json")
    if cat1_report is not None:
        _dump_json(cat1_report.to_json(), outdir / "heesch_cat1.json")
        _dump_json(cat1_report.patch.to_json(), outdir / "patch_cat1.json")
        render.write_svg(cat1_report.patch, outdir / "patch_cat1.svg")
    return all_ok


def cmd_verify_all(args) -> int:
    outdir = Path(args.out or "verify-artifacts")
    outdir.mkdir(parents=True, exist_ok=True)
    _dump_json(catalog.catalog_json(), outdir / "catalog.json")
    checks = {
        "tables": _verify_tables(outdir, args.tolerance),
        "spots": _verify_spots(outdir),
        "type7": _verify_type7(outdir),
        "heesch": _verify_heesch(outdir, args.budget),
    }
    for name in sorted(checks):
        print("%-8s %s" % (name, "PASS" if checks[name] else "FAIL"))
    ok = all(checks.values())
    _dump_json({"checks": checks, "ok": ok}, outdir / "summary.json")
    print("verify-all: %s" % ("PASS" if ok else "FAIL"))
    return EXIT_OK if ok else EXIT_VERIFY


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="pentaheesch",
        description="Convex-pentagon corona search and catalog checks.")
    sub = ap.add_subparsers(dest="command", required=True)

    def tile_args(sp):
        sp.add_argument("category", type=int, help="catalog category id")
        sp.add_argument("--n", type=int, default=None)
        sp.add_argument("--m", type=int, default=None)

    def search_args(sp):
        sp.add_argument("--mode", choices=sorted(MODE_NAMES), default="eec")
        sp.add_argument("--budget", type=int, default=corona.DEFAULT_BUDGET)
        sp.add_argument("--no-reflections", action="store_true")

    sp = sub.add_parser("solve", help="solve a category row, print angles")
    tile_args(sp)
    sp.add_argument("--out", default=None)
    sp.set_defaults(func=cmd_solve)

    sp = sub.add_parser("spots", help="classify full-turn spots, check remarks")
    tile_args(sp)
    sp.add_argument("--out", default=None)
    sp.add_argument("--tolerance", type=float, default=spots.SPOT_TOL)
    sp.set_defaults(func=cmd_spots)

    sp = sub.add_parser("corona", help="census of completed first coronas")
    tile_args(sp)
    search_args(sp)
    sp.add_argument("--out", default=None)
    sp.set_defaults(func=cmd_corona)

    sp = sub.add_parser("heesch", help="bound the Heesch number by search")
    tile_args(sp)
    search_args(sp)
    sp.add_argument("--layers", type=int, default=corona.DEFAULT_LAYER_LIMIT)
    sp.add_argument("--out", default=None)
    sp.set_defaults(func=cmd_heesch)

    sp = sub.add_parser("cluster", help="find a 3-tile cluster surrounded "
                                        "once but not twice")
    tile_args(sp)
    search_args(sp)
    sp.add_argument("--out", default=None)
    sp.set_defaults(func=cmd_cluster)

    sp = sub.add_parser("render", help="patch JSON to deterministic SVG")
    sp.add_argument("patch", help="path to patch JSON")
    sp.add_argument("--out", required=True)
    sp.set_defaults(func=cmd_render)

    sp = sub.add_parser("verify-all", help="full regression with artifacts")
    sp.add_argument("--out", default=None)
    sp.add_argument("--tolerance", type=float, default=0.01)
    sp.add_argument("--budget", type=int, default=corona.DEFAULT_BUDGET)
    sp.set_defaults(func=cmd_verify_all)

    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except corona.BudgetExceeded as e:
        sys.stderr.write("search budget exhausted\n")
        report = getattr(e, "report", None)
        if report is not None and getattr(args, "out", None):
            _dump_json(report, args.out)
        return EXIT_BUDGET
    except (catalog.UnknownCategory, catalog.ParamOutOfDomain,
            solver.SolverError, geom.GeometryError, corona.CoronaError) as e:
        sys.stderr.write("error: %s\n" % e)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
