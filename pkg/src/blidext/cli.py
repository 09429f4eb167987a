"""Command-line front end.

Subcommands: ``validate`` (geometry only), ``extend`` (batch
evaluation), ``check`` (the verification suite), ``plotdata`` (F along
a configured path).  Exit codes: 0 when all non-informational checks
pass, 1 on a check failure or geometry violation, 2 on config or
validation errors.  All file outputs are deterministic for a fixed
config and seed.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import replace
from pathlib import Path

import numpy as np

from .config import (
    ConfigError,
    Scenario,
    build_family,
    build_grid,
    build_operator,
    parse_config,
    probe_from,
    scenario_is_1d,
)
from .extension import (
    ContainmentError,
    ExtensionOperator,
    FamilyValidationError,
    batch_to_csv,
    evaluate_batch,
)
from .geometry import HalfSpaceSplit, validate_family
from .spaces import GridFunction, HVector
from .verify import (
    CheckReport,
    blid_law_check,
    bounded_scan,
    containment_check,
    oracle_1d,
    reports_to_csv,
    restriction_check,
    seam_probe,
    summarize,
    weight_partition_check,
    _family_scale,
)


def _load_scenario(args) -> Scenario:
    try:
        text = Path(args.config).read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config: {exc}") from None
    sc = parse_config(text)
    if args.seed is not None:
        sc = replace(sc, seed=args.seed)
    if args.samples is not None:
        sc = replace(sc, samples=args.samples)
    if args.mode is not None and args.mode != sc.mode[0]:
        if args.mode == "literal":
            sc = replace(sc, mode=("literal", 0.5, None))
        else:
            raise ConfigError(
                "cannot switch to clamp mode from the command line: "
                "the scenario carries no theta"
            )
    return sc


def _outdir(args) -> Path:
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    return out


def cmd_validate(args) -> int:
    sc = _load_scenario(args)
    out = _outdir(args)
    family = build_family(sc)
    if isinstance(family, HalfSpaceSplit):
        print("half-space split: nothing to validate, ok")
        return 0
    report = validate_family(family)
    if report.ok:
        print(f"family of {len(family)} segment(s): non-intercept validation ok")
        return 0
    path = out / "violations.csv"
    path.write_text(report.to_csv())
    for v in report.violations:
        print(
            f"violation: pair ({v.pair_i}, {v.pair_j}), reason {v.reason}, "
            f"witness t={v.witness_t:.17g}"
        )
    print(f"violation report written to {path}")
    return 1


def _samples_for(op: ExtensionOperator, sc: Scenario, samples_file: str | None):
    if samples_file is not None:
        rows = []
        for no, line in enumerate(Path(samples_file).read_text().splitlines(), 1):
            line = line.strip()
            if not line:
                continue
            try:
                rows.append([float(v) for v in line.split(",")])
            except ValueError:
                raise ConfigError(f"samples file line {no}: bad number") from None
        return [_wrap_sample(op, sc, row, no) for no, row in enumerate(rows, 1)]
    rng = np.random.default_rng(sc.seed)
    span = 3.0 * _family_scale(op)
    dim = sc.space[1] if sc.space[0] == "hilbert" else build_grid(sc).size
    return [
        _wrap_sample(op, sc, rng.uniform(-span, span, dim), i)
        for i in range(sc.samples)
    ]


def _wrap_sample(op: ExtensionOperator, sc: Scenario, row, no: int):
    if sc.space[0] == "hilbert":
        if len(row) != sc.space[1]:
            raise ConfigError(f"sample {no}: expected {sc.space[1]} coordinates")
        return HVector(row)
    grid = build_grid(sc)
    if len(row) != grid.size:
        raise ConfigError(f"sample {no}: expected {grid.size} values")
    return GridFunction(grid, row)


def cmd_extend(args) -> int:
    sc = _load_scenario(args)
    out = _outdir(args)
    op = build_operator(sc)
    xs = _samples_for(op, sc, args.samples_file)
    rows = evaluate_batch(op, xs)
    path = out / "evaluation.csv"
    path.write_text(batch_to_csv(op, rows))
    print(f"evaluated {len(rows)} samples -> {path}")
    return 0


def _run_guarded(fn, name: str, seed: int) -> CheckReport:
    try:
        return fn()
    except ContainmentError as exc:
        return CheckReport(name, False, float("inf"), seed, str(exc))


def cmd_check(args) -> int:
    sc = _load_scenario(args)
    out = _outdir(args)
    op = build_operator(sc)
    probe = probe_from(sc)
    reports = []
    for H in op.blids:
        reports.append(_run_guarded(
            lambda H=H: blid_law_check(H, probe), "blid_law", sc.seed))
    reports.append(_run_guarded(
        lambda: containment_check(op, probe, samples=10 * probe.samples),
        "containment", sc.seed))
    reports.append(_run_guarded(
        lambda: restriction_check(op, probe), "restriction", sc.seed))
    reports.append(_run_guarded(
        lambda: weight_partition_check(op, probe, samples=10 * probe.samples),
        "weight_partition", sc.seed))
    reports.append(_run_guarded(
        lambda: bounded_scan(op, probe, samples_per_radius=probe.samples),
        "bounded_scan", sc.seed))
    try:
        reports.extend(seam_probe(op, probe))
    except ContainmentError as exc:
        reports.append(CheckReport("seam_probe", False, float("inf"), sc.seed, str(exc)))
    if scenario_is_1d(sc):
        reports.append(_run_guarded(lambda: oracle_1d(sc, probe), "oracle_1d", sc.seed))
    (out / "reports.csv").write_text(reports_to_csv(reports))
    summary = summarize(reports)
    (out / "summary.txt").write_text(summary)
    print(summary, end="")
    return 0 if not any(r.blocking for r in reports) else 1


def cmd_plotdata(args) -> int:
    sc = _load_scenario(args)
    if sc.path is None:
        raise ConfigError("plotdata needs a [path] section in the scenario")
    out = _outdir(args)
    op = build_operator(sc)
    from_spec, to_spec, npts = sc.path
    if sc.space[0] == "hilbert":
        a = HVector(from_spec.params)
        b = HVector(to_spec.params)
    else:
        grid = build_grid(sc)
        a = from_spec.to_gridfunction(grid)
        b = to_spec.to_gridfunction(grid)
    d = b - a
    lines = []
    nw = 0 if op.is_halfspace else op.n_segments
    header = ["s"] + [f"weight_{i + 1}" for i in range(nw)]
    ncomp = op.evaluate(a).components().size
    header += [f"F_{j + 1}" for j in range(ncomp)]
    lines.append(",".join(header))
    for s in np.linspace(0.0, 1.0, npts):
        x = a + s * d
        cells = [f"{s:.17g}"]
        if nw:
            cells += [f"{w:.17g}" for w in op.weights(x)]
        cells += [f"{c:.17g}" for c in op.evaluate(x).components()]
        lines.append(",".join(cells))
    path = out / "plotdata.csv"
    path.write_text("\n".join(lines) + "\n")
    print(f"path data ({npts} points) -> {path}")
    return 0


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="blidext",
        description="extension operators on discretized function spaces",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name, fn in (
        ("validate", cmd_validate),
        ("extend", cmd_extend),
        ("check", cmd_check),
        ("plotdata", cmd_plotdata),
    ):
        p = sub.add_parser(name)
        p.add_argument("--config", required=True, help="scenario file")
        p.add_argument("--out", default="out", help="output directory")
        p.add_argument("--seed", type=int, default=None, help="override the seed")
        p.add_argument("--samples", type=int, default=None,
                       help="override the sample count")
        p.add_argument("--mode", choices=("literal", "clamp"), default=None,
                       help="override the blid mode")
        if name == "extend":
            p.add_argument("--samples-file", default=None,
                           help="CSV of sample rows instead of generated samples")
        p.set_defaults(fn=fn)
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except (ConfigError, FamilyValidationError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
