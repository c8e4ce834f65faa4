"""Command-line front end.

One scenario per invocation::

    cfor --mode table1 --out out/table1
    cfor --mode cfor --re inf --n 101 --dt 0.001 --t-final 2 --snapshots 0.2,0.5,1,1.5,2
    cfor --mode filters --sigma-lowpass 3.2 --out out/filters
    cfor --config scenario.txt --eta 0.05

``--config`` reads ``key=value`` lines using the long flag names with
dashes or underscores; flags given on the command line override it.
"""

from __future__ import annotations

import argparse
import logging
import math
import sys
from dataclasses import asdict, dataclass, fields
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

from .controller import CforController, calibrate_eta
from .diagnostics import fourier_image
from .exact import TABLE1_TIMES, ExactSolutionSpec, cole_exact, error_norms
from .grid import Grid
from .io import fmt, read_keyvalue, write_csv, write_keyvalue
from .kernels import KernelSpec, build_taps, frequency_response
from .solver import INVISCID, BlowUpError, ProblemSpec, RunTrace, run
from .wavelets import dwt_forward, odd_extension

log = logging.getLogger("cfor")

MODES = ("dsc", "cfor", "filters", "table1", "fourier")

# Accuracy-table values reported for the DSC scheme, (time, L_inf, L_1).
PUBLISHED_TABLE1 = (
    (0.4, 2.4e-03, 2.2e-04),
    (0.8, 3.3e-03, 2.9e-04),
    (1.2, 4.7e-04, 1.1e-05),
    (3.0, 7.6e-08, 1.1e-08),
    (10.0, 3.1e-11, 1.2e-11),
    (30.0, 1.4e-12, 8.6e-13),
    (60.0, 6.9e-14, 4.4e-14),
    (90.0, 3.6e-15, 2.3e-15),
)


class ConfigError(ValueError):
    pass


@dataclass
class RunConfig:
    mode: str = "dsc"
    reynolds: float = 100.0
    n_points: int = 41
    dt: float = 0.01
    t_final: float = 1.0
    w: int = 35
    sigma_ratio_deriv: float = 4.5
    sigma_ratio_lowpass: float = 3.2
    eta: Optional[float] = None  # None = calibrate
    scales: int = 3
    snapshot_times: tuple = ()
    output_dir: str = "cfor_out"
    conservative: bool = False
    verbose: bool = False

    def validate(self) -> "RunConfig":
        if self.mode not in MODES:
            raise ConfigError(f"mode must be one of {', '.join(MODES)}")
        for name in ("reynolds", "n_points", "dt", "w", "sigma_ratio_deriv",
                     "sigma_ratio_lowpass", "scales"):
            if not getattr(self, name) > 0:
                raise ConfigError(f"{name} must be positive")
        if self.t_final < 0:
            raise ConfigError("t_final must be non-negative")
        if self.eta is not None and not self.eta > 0:
            raise ConfigError("eta must be positive or 'auto'")
        if self.n_points < 3:
            raise ConfigError("n_points must be at least 3")
        if self.sigma_ratio_deriv < 1 or self.sigma_ratio_lowpass < 1:
            raise ConfigError("sigma ratios must be >= 1")
        if self.mode in ("dsc", "cfor", "fourier") and self.w >= self.n_points:
            raise ConfigError(f"stencil half-width {self.w} needs at least {self.w + 1} points")
        for t in self.snapshot_times:
            if t < 0 or t > self.t_final + 1e-12:
                raise ConfigError(f"snapshot time {t} outside [0, {self.t_final}]")
        return self

    # key=value round trip
    def to_text(self) -> str:
        lines = []
        for f in fields(self):
            v = getattr(self, f.name)
            if f.name == "reynolds":
                v = "inf" if math.isinf(v) else fmt(v)
            elif f.name == "eta":
                v = "auto" if v is None else fmt(v)
            elif f.name == "snapshot_times":
                v = ",".join(fmt(t) for t in v)
            else:
                v = fmt(v)
            lines.append(f"{f.name}={v}")
        return "\n".join(lines) + "\n"

    @classmethod
    def from_mapping(cls, mapping: dict, base: "RunConfig | None" = None) -> "RunConfig":
        cfg = base if base is not None else cls()
        values = asdict(cfg)
        for raw_key, raw in mapping.items():
            key = _ALIASES.get(raw_key.replace("-", "_"), raw_key.replace("-", "_"))
            if key not in values:
                raise ConfigError(f"unknown configuration key {raw_key!r}")
            values[key] = _parse_value(key, raw)
        return cls(**values)

    @classmethod
    def from_text(cls, text: str) -> "RunConfig":
        return cls.from_mapping(read_keyvalue(text))


_ALIASES = {
    "re": "reynolds",
    "n": "n_points",
    "sigma_deriv": "sigma_ratio_deriv",
    "sigma_lowpass": "sigma_ratio_lowpass",
    "snapshots": "snapshot_times",
    "out": "output_dir",
}


def _parse_value(key, raw):
    if not isinstance(raw, str):
        return raw
    raw = raw.strip()
    try:
        if key == "reynolds":
            return INVISCID if raw.lower() in ("inf", "infinity", "inviscid") else float(raw)
        if key == "eta":
            return None if raw.lower() == "auto" else float(raw)
        if key in ("n_points", "w", "scales"):
            return int(raw)
        if key in ("dt", "t_final", "sigma_ratio_deriv", "sigma_ratio_lowpass"):
            return float(raw)
        if key == "snapshot_times":
            return tuple(float(t) for t in raw.split(",") if t.strip())
        if key in ("conservative", "verbose"):
            return raw.lower() in ("1", "true", "yes", "on")
    except ValueError as exc:
        raise ConfigError(f"bad value for {key}: {raw!r}") from exc
    return raw


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="cfor",
        description="Burgers' equation with DSC filters and adaptive oscillation control.")
    p.add_argument("--config", help="key=value file; command-line flags override it")
    p.add_argument("--mode", choices=MODES)
    p.add_argument("--re", help="Reynolds number or 'inf'")
    p.add_argument("--n", help="number of grid points on [0, 1]")
    p.add_argument("--dt")
    p.add_argument("--t-final")
    p.add_argument("--w", help="stencil half-width")
    p.add_argument("--sigma-deriv", help="sigma/delta of the derivative filters")
    p.add_argument("--sigma-lowpass", help="sigma/delta of the smoothing filter")
    p.add_argument("--eta", help="alarm threshold or 'auto'")
    p.add_argument("--scales", help="wavelet scales in the high-pass measure")
    p.add_argument("--snapshots", help="comma-separated output times")
    p.add_argument("--out", help="output directory")
    p.add_argument("--conservative", action="store_const", const="true",
                   help="use the flux form d(u^2/2)/dx for advection")
    p.add_argument("-v", "--verbose", action="store_const", const="true")
    return p


def config_from_args(argv: Sequence[str] | None = None) -> RunConfig:
    args = build_parser().parse_args(argv)
    cfg = RunConfig()
    if args.config:
        cfg = RunConfig.from_mapping(read_keyvalue(Path(args.config)), cfg)
    given = {k: v for k, v in vars(args).items() if v is not None and k != "config"}
    cfg = RunConfig.from_mapping(given, cfg)
    cfg = _apply_mode_defaults(cfg, given, bool(args.config))
    return cfg.validate()


# profile times shown for the shock-forming runs
PROFILE_TIMES = (0.2, 0.5, 1.0, 1.5, 2.0)


def _apply_mode_defaults(cfg, given, from_file):
    if cfg.mode == "table1" and not from_file:
        # the accuracy table always runs to t=90 with its eight snapshot times
        if "t_final" not in given and "t-final" not in given:
            cfg.t_final = TABLE1_TIMES[-1]
        if "snapshots" not in given:
            cfg.snapshot_times = TABLE1_TIMES
    if not cfg.snapshot_times and cfg.mode in ("dsc", "cfor"):
        times = [t for t in PROFILE_TIMES if t < cfg.t_final]
        cfg.snapshot_times = tuple(times) + (cfg.t_final,)
    elif not cfg.snapshot_times and cfg.mode == "fourier":
        cfg.snapshot_times = (cfg.t_final,)
    return cfg


def problem_from_config(cfg: RunConfig) -> ProblemSpec:
    return ProblemSpec(
        reynolds=cfg.reynolds,
        grid=Grid(cfg.n_points),
        dt=cfg.dt,
        t_final=cfg.t_final,
        half_width=cfg.w,
        sigma_ratio=cfg.sigma_ratio_deriv,
        conservative=cfg.conservative,
    )


def _controller(cfg: RunConfig, problem: ProblemSpec, eta: float) -> CforController:
    return CforController.for_grid(eta, problem.grid.spacing, cfg.sigma_ratio_lowpass,
                                   cfg.w, scales=cfg.scales)


def _exact_spec(reynolds):
    if math.isfinite(reynolds) and reynolds <= 500:
        return ExactSolutionSpec(reynolds)
    return None


def _write_snapshots(trace: RunTrace, out: Path, cfg: RunConfig, prefix="snapshot"):
    spec = _exact_spec(cfg.reynolds)
    for t_req, (t_act, fld) in sorted(trace.snapshots.items()):
        cols = [fld.x, fld.values]
        header = ["x", "u"]
        if spec is not None:
            ex = cole_exact(fld.x, t_act, spec)
            cols += [ex, fld.values - ex]
            header += ["u_exact", "error"]
        write_csv(out / f"{prefix}_t{t_req:g}.csv", header, cols)


def _write_measures(trace: RunTrace, out: Path):
    if trace.measures:
        write_csv(out / "measures.csv", ["t", "measure"], [trace.measure_times, trace.measures])


def _write_events(trace: RunTrace, out: Path):
    ev = np.array(trace.events, dtype=float).reshape(-1, 3)
    write_csv(out / "events.csv", ["t", "measure_before", "measure_after"], list(ev.T))


def _summary(trace: RunTrace, cfg: RunConfig, extra=None):
    rec = {"mode": cfg.mode}
    rec.update(trace.summary())
    rec["sigma_lowpass"] = cfg.sigma_ratio_lowpass
    rec["scales"] = cfg.scales
    if extra:
        rec.update(extra)
    return rec


def _run_traced(problem, controller, cfg, out, prefix="snapshot"):
    """Run, writing snapshots/measures/events even when the run blows up."""
    try:
        trace = run(problem, controller, cfg.snapshot_times)
        ok = True
    except BlowUpError as exc:
        trace = exc.trace
        ok = False
        log.error("%s", exc)
    _write_snapshots(trace, out, cfg, prefix)
    _write_measures(trace, out)
    return trace, ok


def run_dsc(cfg: RunConfig, out: Path) -> int:
    problem = problem_from_config(cfg)
    # an unreachable threshold records the measure without ever filtering
    probe = _controller(cfg, problem, math.inf)
    trace, ok = _run_traced(problem, probe, cfg, out)
    if trace.final is not None:
        ext = odd_extension(trace.final.u)
        dwt_forward(ext, scales=cfg.scales).to_csv(str(out / "wavelet"))
    write_keyvalue(out / "summary.txt", _summary(trace, cfg))
    return 0 if ok else 1


def _resolve_eta(cfg, problem):
    if cfg.eta is not None:
        return cfg.eta, None
    template = _controller(cfg, problem, 1.0)
    reference = ProblemSpec(100.0, problem.grid, problem.dt, problem.t_final,
                            problem.half_width, problem.sigma_ratio, problem.conservative)
    try:
        eta = calibrate_eta(problem, template, reference)
    except BlowUpError as exc:
        raise ConfigError(f"eta calibration run (Re=100) blew up: {exc}; "
                          "reduce --dt or pass --eta explicitly") from exc
    log.info("calibrated eta = %g", eta)
    return eta, reference


def run_cfor(cfg: RunConfig, out: Path) -> int:
    problem = problem_from_config(cfg)
    eta, _ = _resolve_eta(cfg, problem)
    controller = _controller(cfg, problem, eta)
    trace, ok = _run_traced(problem, controller, cfg, out)
    _write_events(trace, out)
    write_keyvalue(out / "summary.txt",
                   _summary(trace, cfg, {"eta": eta, "eta_source": "auto" if cfg.eta is None
                                         else "given"}))
    return 0 if ok else 1


def run_filters(cfg: RunConfig, out: Path, n_samples: int = 512) -> int:
    """Taps and normalized frequency responses of the three conjugated filters.

    All three share ``sigma_lowpass``, as in the usual presentation of the
    filter family at a single regularization width.
    """
    delta = 1.0 / (cfg.n_points - 1)
    spec = KernelSpec(delta, cfg.sigma_ratio_lowpass, cfg.w, 0)
    sets = {
        "lowpass": build_taps(spec, "half_grid"),
        "highpass1": build_taps(spec.with_order(1)),
        "highpass2": build_taps(spec.with_order(2)),
    }
    for name, taps in sets.items():
        taps.to_csv(out / f"taps_{name}.csv")
        resp = frequency_response(taps, n_samples, normalize=True)
        write_csv(out / f"response_{name}.csv", ["omega", "magnitude"],
                  [resp.omega * delta / np.pi, resp.magnitude])
    write_keyvalue(out / "summary.txt", {"mode": cfg.mode, "sigma_ratio": cfg.sigma_ratio_lowpass,
                                         "w": cfg.w, "n_samples": n_samples,
                                         "omega_units": "pi/delta"})
    return 0


def run_table1(cfg: RunConfig, out: Path) -> int:
    problem = problem_from_config(cfg)
    spec = ExactSolutionSpec(cfg.reynolds)
    try:
        trace = run(problem, None, cfg.snapshot_times)
        ok = True
    except BlowUpError as exc:
        trace, ok = exc.trace, False
    rows = []
    for t_req, (t_act, fld) in sorted(trace.snapshots.items()):
        rows.append(error_norms(fld, t_act, spec))
    cols = [[r.t for r in rows], [r.l_inf for r in rows], [r.l_1 for r in rows]]
    header = ["time", "l_inf", "l_1"]
    if cfg.verbose:
        header.append("l_1_sum")
        cols.append([r.l_1_sum for r in rows])
    write_csv(out / "table1.csv", header, cols)
    _write_snapshots(trace, out, cfg)
    write_keyvalue(out / "summary.txt", _summary(trace, cfg))
    print(format_table1(rows))
    return 0 if ok else 1


def format_table1(rows) -> str:
    published = {t: (li, l1) for t, li, l1 in PUBLISHED_TABLE1}
    lines = [f"{'time':>6}  {'L_inf':>10}  {'L_1':>10}    {'ref L_inf':>9}  {'ref L_1':>9}"]
    for r in rows:
        ref = published.get(round(r.t, 6))
        tail = f"    {ref[0]:9.1e}  {ref[1]:9.1e}" if ref else ""
        lines.append(f"{r.t:6.1f}  {r.l_inf:10.2e}  {r.l_1:10.2e}{tail}")
    return "\n".join(lines)


def run_fourier(cfg: RunConfig, out: Path) -> int:
    """Fourier images of the plain and the controlled solution at each snapshot."""
    problem = problem_from_config(cfg)
    status = 0
    try:
        plain = run(problem, None, cfg.snapshot_times)
    except BlowUpError as exc:
        plain, status = exc.trace, 1
    eta, _ = _resolve_eta(cfg, problem)
    try:
        controlled = run(problem, _controller(cfg, problem, eta), cfg.snapshot_times)
    except BlowUpError as exc:
        controlled, status = exc.trace, 1
    for label, trace in (("dsc", plain), ("cfor", controlled)):
        for t_req, (_, fld) in sorted(trace.snapshots.items()):
            emit_fourier_image(fld, out / f"fourier_{label}_t{t_req:g}.csv")
    write_keyvalue(out / "summary.txt", {"mode": cfg.mode, "eta": eta,
                                         "n_events": len(controlled.events),
                                         "omega_units": "pi/delta"})
    return status


def emit_fourier_image(fld, path) -> Path:
    """Normalized ``omega,magnitude`` CSV of the odd-extended field;
    ``omega`` is in units of ``pi/delta``."""
    img = fourier_image(fld)
    return write_csv(path, ["omega", "magnitude"], [img.omega, img.magnitude])


RUNNERS = {
    "dsc": run_dsc,
    "cfor": run_cfor,
    "filters": run_filters,
    "table1": run_table1,
    "fourier": run_fourier,
}


def run_scenario(cfg: RunConfig) -> int:
    cfg.validate()
    out = Path(cfg.output_dir)
    out.mkdir(parents=True, exist_ok=True)
    (out / "config.txt").write_text(cfg.to_text())
    return RUNNERS[cfg.mode](cfg, out)


def main(argv: Sequence[str] | None = None) -> int:
    try:
        cfg = config_from_args(argv)
    except ConfigError as exc:
        print(f"cfor: error: {exc}", file=sys.stderr)
        return 2
    logging.basicConfig(level=logging.INFO if cfg.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return run_scenario(cfg)
    except ConfigError as exc:
        print(f"cfor: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
