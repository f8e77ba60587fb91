"""Command-line front end.

Subcommands: design (emit a geometry descriptor), analyze (co-array metrics
for one array), sweep (metrics across a range of sensor counts), music
(simulate and estimate), verify-lemmas (closed-form vs brute-force checks).
Exit codes: 0 success, 2 invalid input, 1 runtime failure.  Output files are
byte-identical across reruns of the same invocation.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Sequence

from . import coarray, coupling, estimation, geometry, presets, signal, verify

EXIT_OK = 0
EXIT_RUNTIME = 1
EXIT_USAGE = 2

GENERATED_FAMILIES = ("aulas", "saulas", "tsaulas", "cotsaulas", "ula")


def _json_dumps(payload) -> str:
    return json.dumps(payload, indent=2, sort_keys=True) + "\n"


def _emit(text: str, output: str | None) -> None:
    if output:
        with open(output, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--output", help="write results here instead of stdout")
    parser.add_argument(
        "--format", choices=("csv", "json"), default=None,
        help="output format where the command supports both",
    )
    parser.add_argument("--seed", type=int, default=None,
                        help="override the scenario RNG seed")


def _add_array_source(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--family", choices=GENERATED_FAMILIES + ("nested",))
    parser.add_argument("--n", type=int, help="sensor count for generated families")
    parser.add_argument("--n-dense", type=int, help="dense stage size (nested only)")
    parser.add_argument("--n-sparse", type=int, help="sparse stage size (nested only)")
    parser.add_argument("--file", help="JSON array descriptor path")


def _resolve_array(args) -> geometry.SensorArray:
    if (args.family is None) == (args.file is None):
        raise geometry.DesignError("give exactly one of --family or --file")
    if args.file is not None:
        return geometry.load_descriptor(args.file)
    if args.family == "nested":
        if args.n_dense is None or args.n_sparse is None:
            raise geometry.DesignError("nested arrays need --n-dense and --n-sparse")
        return geometry.design_nested(args.n_dense, args.n_sparse)
    if args.n is None:
        raise geometry.DesignError(f"family {args.family!r} needs --n")
    return geometry.design(args.family, args.n)


def cmd_design(args) -> int:
    array = _resolve_array(args)
    _emit(_json_dumps(array.to_dict()), args.output)
    return EXIT_OK


def _analysis_payload(array: geometry.SensorArray, model: coupling.CouplingModel):
    report = coarray.coarray_report(array)
    leakage = coupling.coupling_leakage(coupling.coupling_matrix(array, model))
    return report, leakage


def cmd_analyze(args) -> int:
    array = _resolve_array(args)
    model = coupling.get_preset(args.coupling)
    report, leakage = _analysis_payload(array, model)
    if (args.format or "csv") == "json":
        payload = report.to_dict()
        payload["coupling_leakage"] = leakage
        _emit(_json_dumps(payload), args.output)
    else:
        header = ",".join(coarray.REPORT_COLUMNS + ("l_c",))
        row = ",".join(str(c) for c in coarray.report_row(report)) + f",{leakage:.4f}"
        _emit(header + "\n" + row + "\n", args.output)
    return EXIT_OK


def cmd_sweep(args) -> int:
    families = [f.strip().lower() for f in args.families.split(",") if f.strip()]
    for fam in families:
        if fam not in GENERATED_FAMILIES:
            raise geometry.DesignError(
                f"unknown family {fam!r} (sweep supports {', '.join(GENERATED_FAMILIES)})"
            )
    if args.n_min > args.n_max:
        raise geometry.DesignError("--n-min must not exceed --n-max")
    model = coupling.get_preset(args.coupling)
    rows = []
    for n in range(args.n_min, args.n_max + 1):
        for fam in sorted(families):
            try:
                array = geometry.design(fam, n)
            except geometry.DesignError:
                continue  # family not defined at this sensor count
            report, leakage = _analysis_payload(array, model)
            rows.append((fam, n, report, leakage))
    if (args.format or "csv") == "json":
        payload = []
        for fam, n, report, leakage in rows:
            entry = report.to_dict()
            del entry["dc"], entry["sc"], entry["sdc"]
            entry["family"] = fam
            entry["coupling_leakage"] = leakage
            payload.append(entry)
        _emit(_json_dumps(payload), args.output)
    else:
        lines = ["family,n,udofs,cva,holes,se,l_c"]
        for fam, n, report, leakage in rows:
            lines.append(
                f"{fam},{n},{report.udofs},{report.cva},{report.hole_count},"
                f"{100.0 * report.spatial_efficiency:.2f},{leakage:.4f}"
            )
        _emit("\n".join(lines) + "\n", args.output)
    return EXIT_OK


def _resolve_scenario(args):
    """Scenario, MUSIC config and coupling model from flags."""
    if (args.scenario is None) == (args.preset is None):
        raise ValueError("give exactly one of --scenario or --preset")
    if args.preset is not None:
        preset = presets.get_scenario_preset(args.preset, seed=args.seed)
        scenario, music, model = preset.scenario, preset.music, preset.coupling
        if args.grid_step is not None:
            music = estimation.MusicConfig.for_step(music.num_sources, args.grid_step)
    else:
        scenario, model = signal.load_scenario(args.scenario)
        if args.seed is not None:
            scenario = signal.Scenario.from_dict(
                {**scenario.to_dict(), "seed": args.seed}
            )
        music = estimation.MusicConfig.for_step(
            scenario.num_sources, args.grid_step if args.grid_step else 0.01
        )
    if args.coupling is not None:
        model = coupling.get_preset(args.coupling)
    return scenario, music, model


def cmd_music(args) -> int:
    array = _resolve_array(args)
    scenario, music, model = _resolve_scenario(args)
    if estimation.required_subarray_length(array, music) <= music.num_sources:
        raise ValueError(
            f"insufficient uDOFs: array {array.name} cannot resolve "
            f"{music.num_sources} sources"
        )
    trials = args.trials
    if trials < 1:
        raise ValueError("--trials must be >= 1")

    if args.dump_snapshots:
        x = signal.simulate_snapshots(array, scenario, coupling=model, trial=0)
        signal.write_snapshots(args.dump_snapshots, x)

    first = estimation.estimate_doas(array, scenario, music, coupling=model, trial=0)
    summary = {
        "array": array.name,
        "n": array.n,
        "trials": trials,
        "estimates_deg": [round(float(e), 6) for e in first.estimates],
        "under_detected": first.under_detected,
        "rmse_deg": round(first.rmse_deg, 6),
        "config": {
            "num_sources": music.num_sources,
            "grid_start": music.grid_start,
            "grid_stop": music.grid_stop,
            "grid_points": music.grid_points,
            "seed": scenario.seed,
        },
    }
    if trials > 1:
        mc = estimation.monte_carlo(array, scenario, music, trials, coupling=model)
        summary["rmse_deg"] = round(mc.rmse_deg, 6)
        summary["detection_rate"] = mc.detection_rate

    spectrum_csv = estimation.spectrum_to_csv(first.angles, first.spectrum)
    if args.output:
        base = args.output
        with open(f"{base}.spectrum.csv", "w", encoding="utf-8", newline="") as fh:
            fh.write(spectrum_csv)
        with open(f"{base}.estimates.json", "w", encoding="utf-8", newline="") as fh:
            fh.write(_json_dumps(summary))
    else:
        sys.stdout.write(_json_dumps(summary))
    return EXIT_OK


def cmd_verify_lemmas(args) -> int:
    reports: list[verify.LemmaReport] = []
    for check, (lo, hi) in verify.LEMMA_RANGES.items():
        lo = max(lo, args.n_min) if check != "lemma3" else max(5, args.tsaulas_n_min)
        hi = min(hi, args.n_max)
        if lo <= hi:
            reports.extend(verify.run_lemma_sweep(check, range(lo, hi + 1)))
    failures = [r for r in reports if not r.passed]
    if (args.format or "csv") == "json":
        _emit(_json_dumps([r.to_dict() for r in reports]), args.output)
    else:
        lines = ["check,family,n,passed,failed_claims"]
        for r in reports:
            lines.append(
                f"{r.check},{r.family},{r.n},{str(r.passed).lower()},"
                + ";".join(r.failures())
            )
        lines.append(
            f"# {len(reports) - len(failures)}/{len(reports)} checks passed"
        )
        _emit("\n".join(lines) + "\n", args.output)
    return EXIT_OK if not failures else EXIT_RUNTIME


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="coarraylab",
        description="sparse-array co-array design, analysis and simulation",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_design = sub.add_parser("design", help="emit a geometry descriptor (JSON)")
    _add_common(p_design)
    _add_array_source(p_design)
    p_design.set_defaults(func=cmd_design)

    p_analyze = sub.add_parser("analyze", help="co-array metrics for one array")
    _add_common(p_analyze)
    _add_array_source(p_analyze)
    p_analyze.add_argument("--coupling", default="paper-v",
                           choices=coupling.preset_names())
    p_analyze.set_defaults(func=cmd_analyze)

    p_sweep = sub.add_parser("sweep", help="metrics across a sensor-count range")
    _add_common(p_sweep)
    p_sweep.add_argument("--families", required=True,
                         help="comma-separated family names")
    p_sweep.add_argument("--n-min", type=int, required=True)
    p_sweep.add_argument("--n-max", type=int, required=True)
    p_sweep.add_argument("--coupling", default="paper-v",
                         choices=coupling.preset_names())
    p_sweep.set_defaults(func=cmd_sweep)

    p_music = sub.add_parser("music", help="simulate snapshots and estimate DOAs")
    _add_common(p_music)
    _add_array_source(p_music)
    p_music.add_argument("--scenario", help="scenario JSON path")
    p_music.add_argument("--preset", choices=presets.preset_names(),
                         help="named reference scenario")
    p_music.add_argument("--coupling", choices=coupling.preset_names(),
                         default=None, help="override the coupling model")
    p_music.add_argument("--trials", type=int, default=1)
    p_music.add_argument("--grid-step", type=float, default=None,
                         help="search grid pitch in degrees")
    p_music.add_argument("--dump-snapshots",
                         help="also write trial-0 snapshots to this path")
    p_music.set_defaults(func=cmd_music)

    p_verify = sub.add_parser("verify-lemmas",
                              help="closed-form vs brute-force co-array checks")
    _add_common(p_verify)
    p_verify.add_argument("--n-min", type=int, default=9)
    p_verify.add_argument("--n-max", type=int, default=64)
    p_verify.add_argument("--tsaulas-n-min", type=int, default=5)
    p_verify.set_defaults(func=cmd_verify_lemmas)

    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, OSError, json.JSONDecodeError) as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_USAGE
    except Exception as err:  # pragma: no cover - defensive
        print(f"internal error: {err}", file=sys.stderr)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
