"""Command-line front end: traces, method comparisons, sweeps, fidelity
studies and figure presets, all emitted as CSV.

Frequencies are entered in rad/us (displayed as MHz), times in us; the
``dt_times_Delta`` column carries the dimensionless time axis used by the
figure presets.  Exit codes: 0 success, 2 usage error, 3 numerical
failure.
"""

from __future__ import annotations

import argparse
import math
import sys
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .analysis import (METHODS, delta_resonant_ae, delta_resonant_lightshift,
                       amplitude_p, rabi_ae, rabi_exact_delta0, rabi_general,
                       trace_populations)
from .lippmann_schwinger import TimeGrid, required_intervals
from .model import RamanParams, h_ae
from .propagators import state_table

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_NUMERICAL = 3

SWEEP_AXES = ("delta", "delta-avg", "omega0", "omega1")
OBSERVABLES = ("rabi", "rabi-ae", "amplitude")
TRACE_HEADER = ("t", "dt_times_Delta", "p0", "p1", "pe", "norm", "method")


class UsageError(Exception):
    pass


def parse_complex_literal(text: str) -> complex:
    """Parse 'a+bi' (or plain real / pure imaginary) Rabi amplitudes."""
    cleaned = text.strip().replace(" ", "").replace("i", "j").replace("I", "j")
    try:
        return complex(cleaned)
    except ValueError:
        raise UsageError(f"malformed complex literal: {text!r}") from None


def _parse_float(key: str, text: str) -> float:
    try:
        return float(text)
    except ValueError:
        raise UsageError(f"malformed number for {key}: {text!r}") from None


def _parse_psi0(text: str) -> np.ndarray:
    parts = text.split(",")
    if len(parts) != 3:
        raise UsageError(f"--psi0 needs three comma-separated components: {text!r}")
    vec = np.array([parse_complex_literal(p) for p in parts])
    norm = np.linalg.norm(vec)
    if norm == 0:
        raise UsageError("--psi0 must be nonzero")
    return vec / norm


@dataclass
class RunConfig:
    scenario: str
    params: RamanParams | None = None
    methods: list[tuple[str, int]] = field(default_factory=list)
    psi0: np.ndarray = field(default_factory=lambda: np.array([1.0, 0, 0], complex))
    t_end: float | None = None
    points: int | None = None
    out: str | None = None
    figure_id: str | None = None
    sweep_axis: str | None = None
    sweep_from: float | None = None
    sweep_to: float | None = None
    observables: list[str] = field(default_factory=lambda: ["rabi", "amplitude"])
    omega_r_t_max: float = 7.0


# ----------------------------------------------------------------------
# argument and config-file parsing

_PARAM_KEYS = ("delta-avg", "delta", "omega0", "omega1", "t-end", "dt-end",
               "points", "method", "order", "psi0", "out", "id", "axis",
               "from", "to", "observable", "omega-r-t-max")


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ramanls",
        description="Simulate driven three-level Raman transitions and the "
                    "approximation ladder around them.",
    )
    sub = parser.add_subparsers(dest="scenario", required=True)

    def add_common(p):
        p.add_argument("--config", help="key = value file; flags take precedence")
        p.add_argument("--delta-avg", dest="delta_avg")
        p.add_argument("--delta")
        p.add_argument("--omega0")
        p.add_argument("--omega1")
        p.add_argument("--t-end", dest="t_end")
        p.add_argument("--dt-end", dest="dt_end")
        p.add_argument("--points")
        p.add_argument("--psi0")
        p.add_argument("--out")

    for name in ("evolve", "compare"):
        p = sub.add_parser(name)
        add_common(p)
        p.add_argument("--method")
        p.add_argument("--order")

    p = sub.add_parser("sweep")
    add_common(p)
    p.add_argument("--axis")
    p.add_argument("--from", dest="sweep_from")
    p.add_argument("--to", dest="sweep_to")
    p.add_argument("--observable")

    p = sub.add_parser("fidelity")
    add_common(p)
    p.add_argument("--omega-r-t-max", dest="omega_r_t_max")

    p = sub.add_parser("figure")
    add_common(p)
    p.add_argument("--id", dest="figure_id")
    return parser


def values_from_text(text: str) -> dict[str, str]:
    """Parse 'key = value' lines; '#' starts a comment."""
    out: dict[str, str] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise UsageError(f"config line {lineno} is not 'key = value': {raw!r}")
        key, value = (part.strip() for part in line.split("=", 1))
        if key not in _PARAM_KEYS:
            raise UsageError(f"unknown config key {key!r} on line {lineno}")
        out[key] = value
    return out


def _merge(flag_value, config: dict[str, str], key: str):
    return flag_value if flag_value is not None else config.get(key)


def parse_config(argv, config_text: str | None = None) -> RunConfig:
    """Parse argv (plus optional config text) into a validated RunConfig."""
    ns = _build_parser().parse_args(argv)
    cfg: dict[str, str] = {}
    if config_text is not None:
        cfg.update(values_from_text(config_text))
    if getattr(ns, "config", None):
        path = Path(ns.config)
        if not path.is_file():
            raise UsageError(f"config file not found: {ns.config}")
        cfg.update(values_from_text(path.read_text()))

    def take(attr, key=None):
        return _merge(getattr(ns, attr, None), cfg, key or attr.replace("_", "-"))

    rc = RunConfig(scenario=ns.scenario)

    if take("out") is not None:
        rc.out = take("out")
    if take("psi0") is not None:
        rc.psi0 = _parse_psi0(take("psi0"))

    delta_avg = take("delta_avg", "delta-avg")
    if rc.scenario != "figure":
        if delta_avg is None:
            raise UsageError("missing required --delta-avg")
        omega0 = take("omega0")
        omega1 = take("omega1")
        if omega0 is None or omega1 is None:
            raise UsageError("missing required --omega0/--omega1")
        delta = take("delta")
        try:
            rc.params = RamanParams(
                delta_avg=_parse_float("--delta-avg", delta_avg),
                delta_2ph=_parse_float("--delta", delta) if delta is not None else 0.0,
                omega0=parse_complex_literal(omega0),
                omega1=parse_complex_literal(omega1),
            )
        except ValueError as exc:
            raise UsageError(str(exc)) from None

    t_end = take("t_end", "t-end")
    dt_end = take("dt_end", "dt-end")
    if t_end is not None and dt_end is not None:
        raise UsageError("--t-end and --dt-end are mutually exclusive")
    if t_end is not None:
        rc.t_end = _parse_float("--t-end", t_end)
    elif dt_end is not None:
        if rc.params is None:
            raise UsageError("--dt-end needs --delta-avg")
        rc.t_end = _parse_float("--dt-end", dt_end) / abs(rc.params.delta_avg)
    if rc.t_end is not None and rc.t_end <= 0:
        raise UsageError("--t-end must be positive")

    points = take("points")
    if points is not None:
        try:
            rc.points = int(points)
        except ValueError:
            raise UsageError(f"malformed number for --points: {points!r}") from None

    if rc.scenario in ("evolve", "compare"):
        method = take("method")
        if method is None:
            raise UsageError("missing required --method")
        order_text = take("order")
        order = 0
        if order_text is not None:
            try:
                order = int(order_text)
            except ValueError:
                raise UsageError(f"malformed number for --order: {order_text!r}") from None
        names = [m.strip() for m in method.split(",") if m.strip()]
        for name in names:
            if name not in METHODS:
                raise UsageError(f"unknown method {name!r}; valid: {', '.join(METHODS)}")
        if rc.scenario == "evolve" and len(names) != 1:
            raise UsageError("evolve takes exactly one --method; use compare for lists")
        rc.methods = [(name, order) for name in names]
        if rc.t_end is None:
            raise UsageError("missing required --t-end or --dt-end")
    elif rc.scenario == "sweep":
        axis = take("axis")
        if axis not in SWEEP_AXES:
            raise UsageError(f"--axis must be one of {', '.join(SWEEP_AXES)}")
        rc.sweep_axis = axis
        a, b = take("sweep_from", "from"), take("sweep_to", "to")
        if a is None or b is None:
            raise UsageError("sweep needs --from and --to")
        rc.sweep_from = _parse_float("--from", a)
        rc.sweep_to = _parse_float("--to", b)
        if rc.points is None or rc.points < 2:
            raise UsageError("sweep needs --points >= 2")
        obs = take("observable")
        if obs is not None:
            rc.observables = [o.strip() for o in obs.split(",") if o.strip()]
        for o in rc.observables:
            if o not in OBSERVABLES:
                raise UsageError(f"unknown observable {o!r}; valid: {', '.join(OBSERVABLES)}")
    elif rc.scenario == "fidelity":
        limit = take("omega_r_t_max", "omega-r-t-max")
        if limit is not None:
            rc.omega_r_t_max = _parse_float("--omega-r-t-max", limit)
    elif rc.scenario == "figure":
        fid = take("figure_id", "id")
        if fid is None:
            raise UsageError("missing required --id")
        if fid not in PRESETS and fid not in PRESET_GROUPS:
            known = ", ".join(sorted(list(PRESETS) + list(PRESET_GROUPS)))
            raise UsageError(f"unknown figure id {fid!r}; valid: {known}")
        rc.figure_id = fid
    return rc


# ----------------------------------------------------------------------
# figure presets (parameters straight from the reproduced plots)

_FIG4_PARAMS = RamanParams(delta_avg=400.0, delta_2ph=-16.0,
                           omega0=200.0 + 0j, omega1=120.0 + 0j)


def _fig3_params(omega0: float, omega1: float) -> RamanParams:
    return RamanParams(delta_avg=400.0, delta_2ph=0.0,
                       omega0=complex(omega0), omega1=complex(omega1))


def _fig3_preset(omega0, omega1):
    params = _fig3_params(omega0, omega1)
    t_end = 2.0 * math.pi / rabi_exact_delta0(params)
    return {"params": params, "t_end": t_end,
            "methods": [("exact-new", 0), ("ae", 0)]}


PRESETS: dict[str, dict] = {
    "2": {"kind": "fidelity"},
    "3a": _fig3_preset(40.0, 40.0),
    "3b": _fig3_preset(40.0, 25.0),
    "3c": _fig3_preset(100.0, 100.0),
    "4a": {"params": _FIG4_PARAMS, "t_end": 100.0 / 400.0,
           "methods": [("exact-new", 0), ("ls-R", 0), ("ls-R", 1), ("ls-R", 2)]},
    "4b": {"params": _FIG4_PARAMS, "t_end": 100.0 / 400.0,
           "methods": [("exact-new", 0), ("ls-L", 0), ("ls-L", 1), ("ls-L", 2)]},
    "5": {"params": _FIG4_PARAMS, "t_end": 100.0 / 400.0,
          "methods": [("exact-new", 0), ("ls-S", 0), ("ls-S", 1), ("ls-S", 2)]},
    "6": {"params": _FIG4_PARAMS, "t_end": 100.0 / 400.0,
          "methods": [("exact-new", 0), ("ls-S", 0), ("ae", 0), ("m0eff", 0)]},
}

PRESET_GROUPS = {"3": ["3a", "3b", "3c"], "4": ["4a", "4b"]}


# ----------------------------------------------------------------------
# output

def _fmt(x: float) -> str:
    return f"{x:.17g}"


def _write_csv(path: Path, header, rows) -> None:
    with open(path, "w", newline="\n") as fh:
        fh.write(",".join(header) + "\n")
        for row in rows:
            fh.write(",".join(c if isinstance(c, str) else _fmt(c) for c in row))
            fh.write("\n")


def _grid_for(params: RamanParams, t_end: float, points: int | None,
              needs_ls: bool) -> TimeGrid:
    required = required_intervals(params, t_end)
    if points is None:
        n = required
    else:
        n = points + (points % 2)
        if needs_ls and n < required:
            print(f"notice: --points {points} too coarse for the integral "
                  f"hierarchy; raised to {required}", file=sys.stderr)
            n = required
    return TimeGrid(t_end=t_end, n=max(n, 2))


def _trace_rows(params: RamanParams, methods, psi0, grid: TimeGrid):
    rows = []
    for name, order in methods:
        trace = trace_populations(name, params, psi0, grid, order=order)
        for i, t in enumerate(trace.times):
            rows.append((t, t * params.delta_avg, trace.p0[i], trace.p1[i],
                         trace.pe[i], trace.norm[i], trace.label))
    return rows


def _fidelity_rows(delta_avg: float, omega1: float, ratios, omega_r_t_max: float,
                   points: int):
    """Exact-evolution fidelity between the two resonant-detuning choices."""
    rows = []
    psi0 = np.array([1.0, 0.0, 0.0], dtype=complex)
    for ratio in ratios:
        omega0 = ratio * omega1
        base = RamanParams(delta_avg=delta_avg, delta_2ph=0.0,
                           omega0=complex(omega0), omega1=complex(omega1))
        d_ae = delta_resonant_ae(base)
        d_ls, _ = delta_resonant_lightshift(base)
        pa = RamanParams(delta_avg, d_ae, complex(omega0), complex(omega1))
        pb = RamanParams(delta_avg, d_ls, complex(omega0), complex(omega1))
        omega_r = rabi_ae(pa)
        phase = np.linspace(0.0, omega_r_t_max, points)
        times = phase / omega_r
        sa = state_table(h_ae(pa), times, psi0)
        sb = state_table(h_ae(pb), times, psi0)
        overlap = np.abs(np.einsum("ta,ta->t", sa.conj(), sb))
        for x, f in zip(phase, overlap):
            rows.append((float(ratio), x, f))
    return rows


def _sweep_value(params: RamanParams, observable: str) -> float:
    if observable == "rabi":
        return rabi_general(params)
    if observable == "rabi-ae":
        return rabi_ae(params)
    return amplitude_p(params)


def _sweep_rows(config: RunConfig):
    base = config.params
    values = np.linspace(config.sweep_from, config.sweep_to, config.points)
    rows = []
    for v in values:
        v = float(v)
        if config.sweep_axis == "delta":
            p = RamanParams(base.delta_avg, v, base.omega0, base.omega1)
        elif config.sweep_axis == "delta-avg":
            p = RamanParams(v, base.delta_2ph, base.omega0, base.omega1)
        elif config.sweep_axis == "omega0":
            p = RamanParams(base.delta_avg, base.delta_2ph, complex(v), base.omega1)
        else:
            p = RamanParams(base.delta_avg, base.delta_2ph, base.omega0, complex(v))
        rows.append((v, *(_sweep_value(p, o) for o in config.observables)))
    return rows


def run(config: RunConfig) -> list[Path]:
    """Execute a RunConfig; returns the written paths.

    Any numerical rejection from the library surfaces as ValueError after
    partially written files have been removed.
    """
    written: list[Path] = []
    try:
        if config.scenario in ("evolve", "compare"):
            needs_ls = any(m.startswith("ls-") for m, _ in config.methods)
            grid = _grid_for(config.params, config.t_end, config.points, needs_ls)
            rows = _trace_rows(config.params, config.methods, config.psi0, grid)
            path = Path(config.out) if config.out else Path("trace.csv")
            written.append(path)
            _write_csv(path, TRACE_HEADER, rows)
        elif config.scenario == "sweep":
            rows = _sweep_rows(config)
            path = Path(config.out) if config.out else Path("sweep.csv")
            written.append(path)
            _write_csv(path, (config.sweep_axis, *config.observables), rows)
        elif config.scenario == "fidelity":
            p = config.params
            ratio = abs(p.omega0) / abs(p.omega1)
            rows = _fidelity_rows(p.delta_avg, abs(p.omega1), [ratio],
                                  config.omega_r_t_max, config.points or 701)
            path = Path(config.out) if config.out else Path("fidelity.csv")
            written.append(path)
            _write_csv(path, ("ratio", "omega_r_t", "fidelity"), rows)
        else:
            _run_figure(config, written)
    except Exception:
        for path in written:
            path.unlink(missing_ok=True)
        raise
    return written


def _run_figure(config: RunConfig, written: list[Path]) -> None:
    ids = PRESET_GROUPS.get(config.figure_id, [config.figure_id])
    multi = len(ids) > 1
    base = Path(config.out) if config.out else Path(".")
    for fid in ids:
        preset = PRESETS[fid]
        if multi or config.out is None or base.suffix != ".csv":
            base.mkdir(parents=True, exist_ok=True)
            path = base / f"fig{fid}.csv"
        else:
            path = base
        if preset.get("kind") == "fidelity":
            rows = _fidelity_rows(400.0, 40.0, [1.0, 3.0, 5.0], 7.0,
                                  config.points or 701)
            written.append(path)
            _write_csv(path, ("ratio", "omega_r_t", "fidelity"), rows)
        else:
            params = preset["params"]
            grid = _grid_for(params, preset["t_end"], config.points,
                             needs_ls=True)
            rows = _trace_rows(params, preset["methods"], config.psi0, grid)
            written.append(path)
            _write_csv(path, TRACE_HEADER, rows)


def main(argv=None) -> int:
    try:
        config = parse_config(argv, None)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        run(config)
    except (ValueError, ArithmeticError, np.linalg.LinAlgError) as exc:
        print(f"numerical failure in scenario {config.scenario}: {exc}",
              file=sys.stderr)
        return EXIT_NUMERICAL
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
