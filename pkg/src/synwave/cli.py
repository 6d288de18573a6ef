"""Command-line front door: ingestion, per-step commands, full pipeline.

Subcommands map one-to-one onto the analysis stages: ``entropy`` and
``synergy`` for categorical data, ``fit`` / ``cwt`` / ``adf`` / ``coint``
for numeric series, ``pipeline`` for the whole chain, and ``synth`` for
seeded generators. Exit codes: 0 success, 1 input or configuration
error, 2 pipeline completed but failed validation.

Every artifact embeds the exact configuration (including the seed), so
re-running an identical command reproduces byte-identical files.
"""
from __future__ import annotations

import argparse
import json
import math
import os
import sys
import warnings
from dataclasses import dataclass, asdict
from pathlib import Path

import numpy as np

from . import infotheory, lcwt, models, stats, synth
from .fit import TimeSeries, fit_soliton_chain, ols

OUT_DIR_ENV = "SYNWAVE_OUT_DIR"

EXIT_OK = 0
EXIT_INPUT_ERROR = 1
EXIT_VALIDATION_FAILED = 2


@dataclass
class PipelineConfig:
    """Everything a pipeline run depends on, recorded into every output."""

    input_path: str
    out_dir: str
    components: int = 3
    scales: int = lcwt.DEFAULT_NUM_SCALES
    max_waves: int = lcwt.DEFAULT_MAX_WAVES
    energy_stop: float = lcwt.DEFAULT_ENERGY_STOP
    lags: str = "auto"
    kind: str = "constant"
    seed: int = 0
    fill: bool = False
    svg: bool = False
    value_column: str | None = None
    time_column: str | None = None
    positive_role: str = "historical"

    def to_dict(self) -> dict:
        return asdict(self)


def _fmt(value) -> str:
    """Console formatting: 6 significant digits for floats."""
    if isinstance(value, float):
        return f"{value:.6g}"
    return str(value)


def _sanitize(obj):
    """JSON-safe copy: numpy scalars unwrapped, non-finite floats stringified."""
    if isinstance(obj, dict):
        return {k: _sanitize(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_sanitize(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [_sanitize(v) for v in obj.tolist()]
    if isinstance(obj, (np.floating, np.integer)):
        obj = obj.item()
    if isinstance(obj, float) and not math.isfinite(obj):
        return repr(obj)
    return obj


def write_json(path, payload: dict) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(_sanitize(payload), fh, indent=2, sort_keys=True)
        fh.write("\n")


def write_line_plot(path, times, curves, width: int = 720,
                    height: int = 360, comments=()) -> None:
    """Static SVG polylines; ``curves`` maps label -> (values, color)."""
    times = np.asarray(times, dtype=float)
    all_values = np.concatenate([np.asarray(v) for v, _ in curves.values()])
    lo, hi = float(all_values.min()), float(all_values.max())
    if hi == lo:
        hi = lo + 1.0
    t0, t1 = float(times[0]), float(times[-1])
    t_span = t1 - t0 if t1 > t0 else 1.0

    def sx(t):
        return 40.0 + (t - t0) / t_span * (width - 60.0)

    def sy(v):
        return height - 30.0 - (v - lo) / (hi - lo) * (height - 50.0)

    parts = [f"<!-- {line} -->" for line in comments]
    parts.extend([
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" '
        f'height="{height}" viewBox="0 0 {width} {height}">',
        f'<rect width="{width}" height="{height}" fill="white"/>',
    ])
    for label_index, (label, (values, color)) in enumerate(sorted(curves.items())):
        pts = " ".join(f"{sx(t):.2f},{sy(v):.2f}"
                       for t, v in zip(times, np.asarray(values, dtype=float)))
        parts.append(f'<polyline points="{pts}" fill="none" '
                     f'stroke="{color}" stroke-width="1.5"/>')
        parts.append(f'<text x="50" y="{20 + 14 * label_index}" '
                     f'fill="{color}" font-size="12">{label}</text>')
    parts.append("</svg>")
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("\n".join(parts) + "\n")


def _config_comments(config: dict) -> list[str]:
    return [f"{key}: {config[key]}" for key in sorted(config)]


def _read_csv_rows(path) -> tuple[list[str], list[list[str]]]:
    header = None
    rows = []
    try:
        with open(path, "r", encoding="utf-8") as fh:
            for raw in fh:
                line = raw.strip()
                if not line or line.startswith("#"):
                    continue
                cells = [c.strip() for c in line.split(",")]
                if header is None:
                    header = cells
                else:
                    rows.append(cells)
    except OSError as exc:
        raise ValueError(f"cannot read {path}: {exc}") from exc
    if header is None:
        raise ValueError(f"{path} is empty")
    return header, rows


def ingest_timeseries(path, value_column: str | None = None,
                      time_column: str | None = None,
                      fill: bool = False) -> TimeSeries:
    """Load one numeric column as a TimeSeries.

    Without a time column the index runs 0..n-1. Missing cells are an
    error unless ``fill`` is set, in which case they are linearly
    interpolated and a warning is emitted.
    """
    header, rows = _read_csv_rows(path)
    if not rows:
        raise ValueError(f"{path} has no data rows")

    def column_index(name, default):
        if name is None:
            return default
        if name not in header:
            raise ValueError(f"column {name!r} not in header {header}")
        return header.index(name)

    v_idx = column_index(value_column, len(header) - 1)
    values = np.empty(len(rows))
    missing = []
    for i, row in enumerate(rows):
        if v_idx >= len(row):
            raise ValueError(f"row {i + 1} has no column {v_idx}")
        cell = row[v_idx]
        if cell == "" or cell.lower() == "nan":
            values[i] = np.nan
            missing.append(i)
            continue
        try:
            values[i] = float(cell)
        except ValueError as exc:
            raise ValueError(
                f"non-numeric cell {cell!r} at row {i + 1}") from exc
    if missing:
        if not fill:
            raise ValueError(
                f"{len(missing)} missing values (rows {missing[:5]}...); "
                "pass --fill to interpolate")
        good = np.flatnonzero(~np.isnan(values))
        if good.size == 0:
            raise ValueError("no numeric values to interpolate from")
        values = np.interp(np.arange(values.size), good, values[good])
        warnings.warn(f"filled {len(missing)} missing values by linear "
                      "interpolation", stacklevel=2)
    if time_column is None:
        times = np.arange(len(rows), dtype=float)
    else:
        t_idx = column_index(time_column, None)
        try:
            times = np.array([float(r[t_idx]) for r in rows])
        except ValueError as exc:
            raise ValueError("non-numeric time cell") from exc
        steps = np.diff(times)
        if times.size > 1 and (np.any(steps <= 0) or np.any(
                np.abs(steps - steps[0]) > 1e-9 * max(1.0, abs(steps[0])))):
            raise ValueError("explicit time column is not uniformly spaced")
    return TimeSeries(times, values)


def read_categorical_csv(path, columns=None) -> tuple[tuple[str, ...], list[tuple]]:
    """Load categorical observations, one tuple per row."""
    header, rows = _read_csv_rows(path)
    if not rows:
        raise ValueError(f"{path} has no data rows")
    if columns:
        for name in columns:
            if name not in header:
                raise ValueError(f"column {name!r} not in header {header}")
        idx = [header.index(c) for c in columns]
    else:
        columns = header
        idx = list(range(len(header)))
    observations = []
    for i, row in enumerate(rows):
        if len(row) < len(header):
            raise ValueError(f"ragged row {i + 1}")
        observations.append(tuple(row[j] for j in idx))
    return tuple(columns), observations


def _resolve_out_dir(arg_value) -> Path:
    out = arg_value or os.environ.get(OUT_DIR_ENV) or "."
    path = Path(out)
    path.mkdir(parents=True, exist_ok=True)
    return path


# ---------------------------------------------------------------------------
# subcommand handlers


def _cmd_synth(args) -> int:
    out_dir = _resolve_out_dir(args.out_dir)
    path = out_dir / f"{args.kind.replace('-', '_')}_{args.seed}.csv"
    synth.generate_synthetic(args.kind, args.seed, path, args.n)
    print(f"wrote {path}")
    return EXIT_OK


def _cmd_entropy(args) -> int:
    variables, rows = read_categorical_csv(args.input, args.subset or None)
    table = infotheory.from_observations(rows, variables)
    subsets = [variables]
    if len(variables) > 1:
        subsets = [variables] + [(v,) for v in variables]
    reports = [infotheory.information_report(table, s).to_dict()
               for s in subsets]
    out_dir = _resolve_out_dir(args.out_dir)
    payload = {
        "config": {"input": str(args.input), "subset": list(variables),
                   "seed": args.seed},
        "reports": reports,
    }
    path = out_dir / "entropy_report.json"
    write_json(path, payload)
    for report in reports:
        t = report["T"]
        r = report["R"]
        print(f"subset={','.join(report['subset'])} H={_fmt(report['H'])}"
              + (f" T={_fmt(t)} R={_fmt(r)}" if t is not None else ""))
    print(f"wrote {path}")
    return EXIT_OK


def _cmd_synergy(args) -> int:
    variables, rows = read_categorical_csv(args.input)
    subset = tuple(args.subset) if args.subset else variables
    series = infotheory.synergy_indicator(
        rows, variables, subset, args.window, args.stride)
    out_dir = _resolve_out_dir(args.out_dir)
    path = out_dir / "synergy.csv"
    config = {"input": str(args.input), "subset": list(subset),
              "window": args.window, "stride": args.stride, "seed": args.seed}
    with open(path, "w", encoding="utf-8") as fh:
        for line in _config_comments(config):
            fh.write(f"# {line}\n")
        fh.write("window_start,redundancy_bits\n")
        for start, value in zip(series.window_starts.tolist(),
                                series.redundancy_bits.tolist()):
            fh.write(f"{start},{value!r}\n")
    print(f"{series.window_starts.size} windows, "
          f"mean R={_fmt(float(series.redundancy_bits.mean()))}")
    print(f"wrote {path}")
    return EXIT_OK


def _fit_payload(series: TimeSeries, n_components: int, config: dict) -> dict:
    result = fit_soliton_chain(series, n_components)
    predictions = models.chain_eval(result.model, series.times)
    regression = ols(predictions, series.values)
    return {
        "config": config,
        "beta": result.model.beta,
        "components": [
            {"A": c.amplitude, "k": c.k, "center": c.center}
            for c in result.model.components
        ],
        "sse": result.sse,
        "iterations": result.iterations,
        "converged": result.converged,
        "standard_errors": result.standard_errors.tolist(),
        "regression": regression.to_dict(),
    }


def _cmd_fit(args) -> int:
    series = ingest_timeseries(args.input, args.value_column,
                               args.time_column, args.fill)
    config = {"input": str(args.input), "components": args.components,
              "seed": args.seed}
    payload = _fit_payload(series, args.components, config)
    out_dir = _resolve_out_dir(args.out_dir)
    path = out_dir / "fit_report.json"
    write_json(path, payload)
    print(f"beta={_fmt(payload['beta'])} sse={_fmt(payload['sse'])} "
          f"converged={payload['converged']}")
    for comp in payload["components"]:
        print(f"  A={_fmt(comp['A'])} k={_fmt(comp['k'])} "
              f"center={_fmt(comp['center'])}")
    print(f"R2={_fmt(payload['regression']['r2'])}")
    print(f"wrote {path}")
    return EXIT_OK


def _extraction_payload(series: TimeSeries, config: dict, scales: np.ndarray):
    extraction = lcwt.extract_waves(
        series, max_waves=config["max_waves"],
        energy_stop=config["energy_stop"], scales=scales)
    trains = lcwt.group_wave_trains(extraction.waves)
    payload = {
        "config": config,
        "waves": [w.to_dict() for w in extraction.waves],
        "trains": [t.to_dict() for t in trains],
        "low_confidence": extraction.low_confidence,
        "energy_history": list(extraction.energy_history),
    }
    return extraction, trains, payload


def _cmd_cwt(args) -> int:
    series = ingest_timeseries(args.input, args.value_column,
                               args.time_column, args.fill)
    scales = lcwt.default_scales(len(series), args.scales)
    config = {"input": str(args.input), "scales": args.scales,
              "max_waves": args.max_waves, "energy_stop": args.energy_stop,
              "seed": args.seed}
    out_dir = _resolve_out_dir(args.out_dir)
    scalogram = lcwt.cwt(series, scales)
    lcwt.scalogram_to_csv(scalogram, out_dir / "scalogram.csv",
                          _config_comments(config))
    if args.svg:
        lcwt.scalogram_to_svg(scalogram, out_dir / "scalogram.svg",
                              comments=_config_comments(config))
    extraction, _, payload = _extraction_payload(series, config, scales)
    write_json(out_dir / "wave_trains.json", payload)
    print(f"{len(extraction.waves)} waves retained, "
          f"low_confidence={extraction.low_confidence}")
    print(f"wrote {out_dir / 'scalogram.csv'} and "
          f"{out_dir / 'wave_trains.json'}")
    return EXIT_OK


def _cmd_adf(args) -> int:
    series = ingest_timeseries(args.input, args.value_column,
                               args.time_column, args.fill)
    lags = "auto" if args.lags == "auto" else int(args.lags)
    result = stats.adf_test(series, lags, args.kind)
    out_dir = _resolve_out_dir(args.out_dir)
    payload = {"config": {"input": str(args.input), "lags": args.lags,
                          "kind": args.kind, "seed": args.seed}}
    payload.update(result.to_dict())
    path = out_dir / "adf.json"
    write_json(path, payload)
    print(f"statistic={_fmt(result.statistic)} lags={result.lags_used} "
          f"reject_at={result.reject_at}")
    print(f"wrote {path}")
    return EXIT_OK


def _cmd_coint(args) -> int:
    y = ingest_timeseries(args.input, args.y_column, args.time_column,
                          args.fill)
    x = ingest_timeseries(args.input, args.x_column, args.time_column,
                          args.fill)
    result = stats.engle_granger(y, x)
    out_dir = _resolve_out_dir(args.out_dir)
    payload = {"config": {"input": str(args.input), "y": args.y_column,
                          "x": args.x_column, "seed": args.seed}}
    payload.update(result.to_dict())
    path = out_dir / "cointegration.json"
    write_json(path, payload)
    print(f"cointegrated_at={result.cointegrated_at} "
          f"stat={_fmt(result.residual_adf.statistic)}")
    print(f"wrote {path}")
    return EXIT_OK


def run_pipeline(config: PipelineConfig) -> int:
    """Fit, transform, extract, split, and validate one series end to end."""
    series = ingest_timeseries(config.input_path, config.value_column,
                               config.time_column, config.fill)
    out_dir = Path(config.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    conf = config.to_dict()

    # stage 1: pulse-chain fit and its regression diagnostics
    fit_payload = _fit_payload(series, config.components, conf)
    write_json(out_dir / "fit_report.json", fit_payload)
    write_json(out_dir / "regression_report.json",
               {"config": conf, **fit_payload["regression"]})

    # stage 2: scalogram and iterative wave extraction
    scales = lcwt.default_scales(len(series), config.scales)
    scalogram = lcwt.cwt(series, scales)
    lcwt.scalogram_to_csv(scalogram, out_dir / "scalogram.csv",
                          _config_comments(conf))
    if config.svg:
        lcwt.scalogram_to_svg(scalogram, out_dir / "scalogram.svg",
                              comments=_config_comments(conf))
    extraction, trains, wave_payload = _extraction_payload(
        series, {**conf, "max_waves": config.max_waves,
                 "energy_stop": config.energy_stop}, scales)
    write_json(out_dir / "wave_trains.json", wave_payload)
    if config.svg:
        model_values = models.chain_eval(
            models.SolitonChainModel(
                beta=fit_payload["beta"],
                components=tuple(
                    models.SolitonComponent(c["A"], c["k"], c["center"])
                    for c in fit_payload["components"])),
            series.times)
        write_line_plot(out_dir / "decomposition.svg", series.times, {
            "data": (series.values, "#888888"),
            "fitted chain": (model_values, "#d62728"),
            "extraction residual": (extraction.residual.values, "#1f77b4"),
        }, comments=_config_comments(conf))

    # stage 3: redundancy decomposition from the sign-grouped trains
    split = lcwt.redundancy_split(trains, len(series), series.times,
                                  config.positive_role)
    with open(out_dir / "redundancy.csv", "w", encoding="utf-8") as fh:
        for line in _config_comments(conf):
            fh.write(f"# {line}\n")
        fh.write(f"# positive_role: {split.positive_role}\n")
        fh.write("t,historical,synergetic,total\n")
        hist = split.historical.tolist()
        syn = split.synergetic.tolist()
        total = split.total.tolist()
        for i, t in enumerate(series.times.tolist()):
            fh.write(f"{t!r},{hist[i]!r},{syn[i]!r},{total[i]!r}\n")

    # stage 4: unit-root and cointegration validation of data vs model
    model = models.SolitonChainModel(
        beta=fit_payload["beta"],
        components=tuple(models.SolitonComponent(c["A"], c["k"], c["center"])
                         for c in fit_payload["components"]),
    )
    predictions = models.chain_eval(model, series.times)
    lags = "auto" if config.lags == "auto" else int(config.lags)
    adf_data = stats.adf_test(series, lags, config.kind)
    validation_error = None
    cointegration = None
    try:
        cointegration = stats.engle_granger(
            series, TimeSeries(series.times, predictions))
    except ValueError as exc:
        validation_error = str(exc)
    checks = {
        "waves_retained": len(extraction.waves) >= 1,
        "extraction_confident": not extraction.low_confidence,
        "cointegrated": (cointegration is not None
                         and cointegration.cointegrated_at is not None),
    }
    passed = all(checks.values())
    validation = {
        "config": conf,
        "adf_data": adf_data.to_dict(),
        "engle_granger": cointegration.to_dict() if cointegration else None,
        "engle_granger_error": validation_error,
        "waves_retained": len(extraction.waves),
        "low_confidence": extraction.low_confidence,
        "checks": checks,
        "passed": passed,
    }
    write_json(out_dir / "validation.json", validation)

    print(f"fit: beta={_fmt(fit_payload['beta'])} "
          f"R2={_fmt(fit_payload['regression']['r2'])}")
    print(f"extraction: {len(extraction.waves)} waves, "
          f"low_confidence={extraction.low_confidence}")
    print(f"validation: passed={passed}")
    return EXIT_OK if passed else EXIT_VALIDATION_FAILED


def _cmd_pipeline(args) -> int:
    config = PipelineConfig(
        input_path=str(args.input),
        out_dir=str(_resolve_out_dir(args.out_dir)),
        components=args.components,
        scales=args.scales,
        max_waves=args.max_waves,
        energy_stop=args.energy_stop,
        lags=args.lags,
        kind=args.kind,
        seed=args.seed,
        fill=args.fill,
        svg=args.svg,
        value_column=args.value_column,
        time_column=args.time_column,
        positive_role=args.positive_role,
    )
    return run_pipeline(config)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="synwave",
        description="Solitary-wave and information-redundancy analysis",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p, input_required=True):
        if input_required:
            p.add_argument("--input", required=True, help="input CSV path")
        p.add_argument("--out-dir", default=None,
                       help=f"output directory (default ${OUT_DIR_ENV} or .)")
        p.add_argument("--seed", type=int, default=0)

    def add_series_columns(p):
        p.add_argument("--value-column", default=None)
        p.add_argument("--time-column", default=None)
        p.add_argument("--fill", action="store_true",
                       help="linearly interpolate missing values")

    p = sub.add_parser("synth", help="write a seeded synthetic dataset")
    p.add_argument("--kind", required=True,
                   choices=("corn-like", "patent-like", "noise"))
    p.add_argument("--n", type=int, default=None)
    add_common(p, input_required=False)
    p.set_defaults(handler=_cmd_synth)

    p = sub.add_parser("entropy", help="entropy / information report")
    add_common(p)
    p.add_argument("--subset", nargs="*", default=None)
    p.set_defaults(handler=_cmd_entropy)

    p = sub.add_parser("synergy", help="sliding-window redundancy")
    add_common(p)
    p.add_argument("--subset", nargs="*", default=None)
    p.add_argument("--window", type=int, default=64)
    p.add_argument("--stride", type=int, default=1)
    p.set_defaults(handler=_cmd_synergy)

    p = sub.add_parser("fit", help="pulse-chain least squares")
    add_common(p)
    add_series_columns(p)
    p.add_argument("--components", type=int, default=3)
    p.set_defaults(handler=_cmd_fit)

    p = sub.add_parser("cwt", help="scalogram and wave extraction")
    add_common(p)
    add_series_columns(p)
    p.add_argument("--scales", type=int, default=lcwt.DEFAULT_NUM_SCALES)
    p.add_argument("--max-waves", type=int, default=lcwt.DEFAULT_MAX_WAVES)
    p.add_argument("--energy-stop", type=float,
                   default=lcwt.DEFAULT_ENERGY_STOP)
    p.add_argument("--svg", action="store_true")
    p.set_defaults(handler=_cmd_cwt)

    p = sub.add_parser("adf", help="unit-root test")
    add_common(p)
    add_series_columns(p)
    p.add_argument("--lags", default="auto")
    p.add_argument("--kind", default="constant",
                   choices=stats.REGRESSION_KINDS)
    p.set_defaults(handler=_cmd_adf)

    p = sub.add_parser("coint", help="two-step cointegration test")
    add_common(p)
    p.add_argument("--y-column", required=True)
    p.add_argument("--x-column", required=True)
    p.add_argument("--time-column", default=None)
    p.add_argument("--fill", action="store_true")
    p.set_defaults(handler=_cmd_coint)

    p = sub.add_parser("pipeline", help="full analysis chain")
    add_common(p)
    add_series_columns(p)
    p.add_argument("--components", type=int, default=3)
    p.add_argument("--scales", type=int, default=lcwt.DEFAULT_NUM_SCALES)
    p.add_argument("--max-waves", type=int, default=lcwt.DEFAULT_MAX_WAVES)
    p.add_argument("--energy-stop", type=float,
                   default=lcwt.DEFAULT_ENERGY_STOP)
    p.add_argument("--lags", default="auto")
    p.add_argument("--kind", default="constant",
                   choices=stats.REGRESSION_KINDS)
    p.add_argument("--svg", action="store_true")
    p.add_argument("--positive-role", default="historical",
                   choices=("historical", "synergetic"))
    p.set_defaults(handler=_cmd_pipeline)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits 2 on usage problems; those are input errors here
        code = exc.code if isinstance(exc.code, int) else EXIT_INPUT_ERROR
        return EXIT_INPUT_ERROR if code == 2 else code
    try:
        return args.handler(args)
    except ValueError as exc:
        print(f"{args.command}: {exc}", file=sys.stderr)
        return EXIT_INPUT_ERROR
    except OSError as exc:
        print(f"{args.command}: {exc}", file=sys.stderr)
        return EXIT_INPUT_ERROR


if __name__ == "__main__":
    sys.exit(main())
