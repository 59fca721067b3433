"""Command line entry point: ``cartan-courant validate|run|emit-h``.

Exit status is 0 when everything passes, 1 when a check fails and 2 when
the model file cannot be parsed or fails validation.
"""
from __future__ import annotations

import argparse
import sys
from itertools import combinations
from pathlib import Path

from .battery import DEFAULT_SEED, Battery
from .courant import (
    CourantAlgebroid,
    Limits,
    axioms_check,
    beta_check,
    bracket_forms_check,
    curvature_identity_check,
    dp_check,
    extract_h,
    first_pontryagin_formula_check,
    jacobiator_formula_check,
    lie_algebroid_check,
    pontryagin_check,
    skew_kappa_check,
    strong_criteria,
)
from .exactpoly import format_poly
from .lie2 import Lie2Algebra, lie2_identities, lie2_route_checks
from .modelfile import ModelFileError, ModelSpecFile, ModelValidationError, load_model, validate_model
from .report import CheckResult, Report

SUITES = ("algebra", "precourant", "pontryagin", "twisted", "identities", "lie2", "all")


def run_suite(spec: ModelSpecFile, suite: str, seed: int = DEFAULT_SEED, limits: Limits = Limits()) -> Report:
    if suite not in SUITES:
        raise ValueError(f"unknown suite {suite!r}")
    m = spec.model
    rep = Report(f"{spec.name}: {suite}")
    rep.meta.update({
        "model": spec.name,
        "suite": suite,
        "seed": seed,
        "chart_dim": m.n,
        "algebra_dim": m.d,
        "curvature": "synthetic" if m.synthetic else "gauge",
    })
    if spec.corrupt:
        rep.meta["corrupt"] = spec.corrupt
    courant_corrupt = spec.corrupt if spec.corrupt in CourantAlgebroid.CORRUPTIONS else None
    C = CourantAlgebroid(m, courant_corrupt)
    bat = Battery(m, seed)
    rep.meta["battery_sections"] = len(bat.sections)
    want = set(SUITES[:-1]) if suite == "all" else {suite}

    def section(name: str, part: Report):
        for c in part.checks:
            c.name = f"{name}.{c.name}"
            rep.add(c)

    if "algebra" in want:
        section("algebra", validate_model(spec))
    if "precourant" in want:
        section("precourant", bracket_forms_check(C, bat, limits))
        section("precourant", beta_check(C, bat, limits))
        section("precourant", lie_algebroid_check(m, bat, limits))
        section("precourant", axioms_check(C, bat, limits))
    if "pontryagin" in want:
        section("pontryagin", pontryagin_check(C, bat, limits))
        section("pontryagin", dp_check(C, bat, limits))
    if "twisted" in want:
        section("twisted", strong_criteria(C, bat, limits))
        H, hrep = extract_h(C, bat, limits)
        section("twisted", hrep)
        rep.meta["H"] = str(H)
    if "identities" in want:
        if m.synthetic:
            rep.add(CheckResult("identities.gauge_mode_only", "curvature identities need curvature computed from the gauge",
                                True, 0, note="skipped: synthetic curvature"))
        else:
            section("identities", jacobiator_formula_check(C, bat, limits))
            section("identities", curvature_identity_check(C, bat, limits))
            if m.n >= 4:
                section("identities", first_pontryagin_formula_check(C))
        section("identities", skew_kappa_check(C, bat, limits))
    if "lie2" in want:
        L = Lie2Algebra(C, l3_scale=2 if spec.corrupt == "double-l3" else 1)
        section("lie2", lie2_route_checks(L, bat, limits))
        section("lie2", lie2_identities(L, bat, limits))
    return rep


def h_file_text(spec: ModelSpecFile, H) -> str:
    m = spec.model
    lines = [f"# twisting 4-form of {spec.name}", f"coordinates: {' '.join(m.variables)}"]
    for idx in combinations(range(m.n), 4):
        names = " ".join(m.variables[i] for i in idx)
        lines.append(f"{names}: {format_poly(H[idx])}")
    return "\n".join(lines) + "\n"


def _load(path: str) -> ModelSpecFile | None:
    try:
        return load_model(path)
    except ModelFileError as exc:
        print(f"error: {exc}", file=sys.stderr)
    except ModelValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        sys.stderr.write(exc.report.to_text())
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
    return None


def cmd_validate(args) -> int:
    spec = _load(args.file)
    if spec is None:
        return 2
    rep = validate_model(spec)
    sys.stdout.write(rep.to_text())
    return 0


def cmd_run(args) -> int:
    spec = _load(args.file)
    if spec is None:
        return 2
    rep = run_suite(spec, args.suite, args.seed)
    sys.stdout.write(rep.to_text(args.timings))
    if args.json:
        Path(args.json).write_text(rep.to_json(args.timings), encoding="utf-8")
    return 0 if rep.passed else 1


def cmd_emit_h(args) -> int:
    spec = _load(args.file)
    if spec is None:
        return 2
    rep = run_suite(spec, "twisted", args.seed)
    bad = rep.failures()
    if bad:
        sys.stdout.write(rep.to_text())
        print(f"error: refusing to write H, {bad[0].name} failed", file=sys.stderr)
        return 1
    C = CourantAlgebroid(spec.model)
    Path(args.out).write_text(h_file_text(spec, C.h_form()), encoding="utf-8")
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="cartan-courant", description="Exact checks for Courant algebroids of Cartan geometries.")
    sub = p.add_subparsers(dest="command", required=True)

    v = sub.add_parser("validate", help="parse and validate a model file")
    v.add_argument("file")
    v.set_defaults(func=cmd_validate)

    r = sub.add_parser("run", help="run a verification suite")
    r.add_argument("file")
    r.add_argument("--suite", choices=SUITES, default="all")
    r.add_argument("--seed", type=int, default=DEFAULT_SEED)
    r.add_argument("--json", metavar="OUT", help="also write the report as JSON")
    r.add_argument("--timings", action="store_true", help="include per-check durations (breaks byte-identical output)")
    r.set_defaults(func=cmd_run)

    h = sub.add_parser("emit-h", help="write the twisting 4-form H")
    h.add_argument("file")
    h.add_argument("out")
    h.add_argument("--seed", type=int, default=DEFAULT_SEED)
    h.set_defaults(func=cmd_emit_h)
    return p


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
