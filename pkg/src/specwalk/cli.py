"""Experiment orchestration and the command-line interface.

One invocation runs one experiment: build a graph (or pick an analytic
DOS), obtain the spectrum, evaluate the transport series on a time grid,
analyze decay laws, and write CSV artifacts plus a manifest with checksums
into the output directory. Fixed artifact names keep downstream plotting
scripts trivial: series.csv, spectrum.csv, degeneracies.csv, report.txt,
deltap.csv, manifest.txt.

Subcommands: run, spectrum, transport, fit, preset. Exit codes: 0 on
success, 1 on a parse/config error, 2 on a numerical failure.
"""

from __future__ import annotations

import argparse
import hashlib
import sys
import time
from dataclasses import dataclass, field, fields, replace
from pathlib import Path

import numpy as np

from . import __version__
from .continuum import (Lifshits, classical_return_continuum, parse_dos_spec,
                        quantum_return_bound_continuum)
from .errors import NumericalError, ParseError
from .graphs import laplacian, parse_graph_spec
from .scaling import (EfficiencyReport, detect_crossover,
                      efficiency_ratio_series, extract_envelope,
                      fit_power_law, fit_stretched_exp, ratio_csv,
                      report_text, saturation)
from .spectral import decompose, degeneracies_csv, spectrum_csv
from .transport import (TimeGrid, TransportSeries, chi_csv, chi_matrix,
                        classical_return, exact_average_return, linear_grid,
                        log_grid, merge_grids, quantum_return_bound,
                        series_csv)

DEFAULT_GRID_SPEC = "log:1e-2,1e4,600"


def parse_grid_spec(spec: str) -> TimeGrid:
    """Parse 'log:LO,HI,N' or 'linear:LO,HI,N', optionally joined with '+'.

    Log segments get t=0 prepended so normalization shows up in the series;
    joined segments are merged and deduplicated.
    """
    segments = []
    for part in spec.split("+"):
        kind, _, params = part.partition(":")
        kind = kind.strip().lower()
        try:
            lo, hi, num = (tok.strip() for tok in params.split(","))
            lo, hi, num = float(lo), float(hi), int(num)
        except ValueError as exc:
            raise ParseError(f"grid segment needs LO,HI,N: {part!r}", text=spec,
                             position=spec.find(part)) from exc
        if kind == "log":
            segments.append(log_grid(lo, hi, num))
        elif kind == "linear":
            segments.append(linear_grid(lo, hi, num))
        else:
            raise ParseError(f"unknown grid kind {kind!r}", text=spec,
                             position=spec.find(part))
    return segments[0] if len(segments) == 1 else merge_grids(*segments)


@dataclass(frozen=True)
class ExperimentConfig:
    """Everything a run depends on; exactly one of graph/dos must be set."""

    graph: str | None = None
    dos: str | None = None
    grid: str = DEFAULT_GRID_SPEC
    fit_window: tuple[float, float] = (1.0, 100.0)
    fit_window_quantum: tuple[float, float] | None = None
    envelope_width: int = 3
    tail_fraction: float = 0.1
    seed: int = 0
    vectors: bool = False
    chi: bool = False
    fit_model: str = "auto"
    out: str = "out"

    def validate(self):
        if (self.graph is None) == (self.dos is None):
            raise ParseError("config must set exactly one of graph/dos",
                             text=f"graph={self.graph!r} dos={self.dos!r}",
                             position=0)
        if self.fit_model not in ("auto", "power", "stretched"):
            raise ParseError(f"unknown fit model {self.fit_model!r}",
                             text=self.fit_model, position=0)

    def echo(self) -> dict[str, str]:
        out = {}
        for f in fields(self):
            val = getattr(self, f.name)
            if val is None:
                continue
            if isinstance(val, tuple):
                val = ",".join(repr(float(x)) for x in val)
            out[f.name] = str(val)
        return out


def _parse_window(text):
    lo, _, hi = text.partition(",")
    try:
        return (float(lo), float(hi))
    except ValueError as exc:
        raise ParseError(f"window needs LO,HI: {text!r}", text=text,
                         position=0) from exc


_BOOL_FIELDS = {"vectors", "chi"}
_INT_FIELDS = {"envelope_width", "seed"}
_FLOAT_FIELDS = {"tail_fraction"}
_WINDOW_FIELDS = {"fit_window", "fit_window_quantum"}


def read_config_file(path) -> dict:
    """Key = value lines; '#' starts a comment. Keys match config fields."""
    known = {f.name for f in fields(ExperimentConfig)}
    out = {}
    text = Path(path).read_text()
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, eq, val = line.partition("=")
        key, val = key.strip(), val.strip()
        if not eq or key not in known:
            raise ParseError(f"bad config line {lineno}: {raw!r}", text=raw,
                             position=0)
        if key in _BOOL_FIELDS:
            out[key] = val.lower() in ("1", "true", "yes", "on")
        elif key in _INT_FIELDS:
            out[key] = int(val)
        elif key in _FLOAT_FIELDS:
            out[key] = float(val)
        elif key in _WINDOW_FIELDS:
            out[key] = _parse_window(val)
        else:
            out[key] = val
    return out


# -- presets ------------------------------------------------------------------

PRESETS: dict[str, ExperimentConfig] = {
    # infinite 1D lattice, band-edge DOS: classical slope -1/2, quantum -1
    "fig1a": ExperimentConfig(
        dos="semicircle:nu=-0.5,lmax=4",
        grid="linear:0.05,220,2200",
        fit_window=(10.0, 100.0),
    ),
    # random-matrix semicircle: classical slope -3/2, quantum -3
    "fig1b": ExperimentConfig(
        dos="semicircle:nu=0.5,lmax=2",
        grid="linear:0.05,220,2200",
        fit_window=(10.0, 100.0),
    ),
    # finite ring of 200 nodes: 1D scaling at intermediate times, then saturation
    "fig2a": ExperimentConfig(
        graph="ring:200",
        grid="linear:0.05,250,5000+log:250,1e4,350",
        fit_window=(1.0, 100.0),
    ),
    # dendrimer generation 10: no classical scaling window, quantum localization
    "fig2b": ExperimentConfig(
        graph="dendrimer:10,3",
        grid=DEFAULT_GRID_SPEC,
        fit_window=(1.0, 100.0),
    ),
    # star of 10 nodes: quantum return parked near (N-2)^2/N^2
    "fig3": ExperimentConfig(
        graph="star:10",
        grid="linear:0.01,100,9900+log:100,1e4,200",
        fit_window=(1.0, 100.0),
        vectors=True,
    ),
}


def preset(name: str) -> ExperimentConfig:
    try:
        return PRESETS[name]
    except KeyError:
        raise ParseError(f"unknown preset {name!r}; have {sorted(PRESETS)}",
                         text=name, position=0) from None


# -- pipeline -----------------------------------------------------------------

@dataclass
class RunManifest:
    """Record of one run: config echo, artifact checksums, version, duration."""

    config: dict[str, str]
    files: dict[str, str] = field(default_factory=dict)
    version: str = __version__
    duration_s: float = 0.0

    def to_text(self) -> str:
        lines = [f"version = {self.version}",
                 f"duration_s = {repr(self.duration_s)}"]
        lines += [f"config.{k} = {v}" for k, v in sorted(self.config.items())]
        lines += [f"file.{name} = {digest}"
                  for name, digest in sorted(self.files.items())]
        return "\n".join(lines) + "\n"

    def verify(self, out_dir) -> bool:
        out_dir = Path(out_dir)
        return all((out_dir / name).is_file()
                   and _sha256(out_dir / name) == digest
                   for name, digest in self.files.items())


def _sha256(path) -> str:
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()


def _write(out_dir: Path, name: str, text: str, manifest: RunManifest):
    path = out_dir / name
    path.write_text(text)
    manifest.files[name] = _sha256(path)


def _quantum_envelope(series: TransportSeries, width: int):
    positive = series.times > 0
    return extract_envelope(series.times[positive],
                            series.alpha_bar_sq[positive], half_width=width)


def _analyze(series: TransportSeries, config: ExperimentConfig,
             stretched: bool) -> EfficiencyReport:
    env = _quantum_envelope(series, config.envelope_width)
    window_cl = config.fit_window
    window_qm = config.fit_window_quantum or window_cl
    positive = series.times > 0
    t, p = series.times[positive], series.p_bar[positive]
    fit = fit_stretched_exp if stretched else fit_power_law
    classical_fit = fit(t, p, window_cl)
    if len(env.times) >= 5:
        quantum_source = (env.times, env.values)
    else:
        # non-oscillatory series: the curve is its own envelope
        quantum_source = (t, series.alpha_bar_sq[positive])
    quantum_fit = fit(quantum_source[0], quantum_source[1], window_qm)
    ratio = efficiency_ratio_series(t, p, quantum_source)
    crossover = detect_crossover(ratio.times, ratio.values)
    return EfficiencyReport(
        classical_fit=classical_fit,
        quantum_fit=quantum_fit,
        ratio=ratio,
        saturation_classical=saturation(p, config.tail_fraction),
        saturation_quantum=saturation(series.alpha_bar_sq[positive],
                                      config.tail_fraction),
        crossover_time=crossover,
    )


def run_experiment(config: ExperimentConfig,
                   stages: tuple[str, ...] = ("series", "spectrum", "analysis"),
                   ) -> RunManifest:
    """Run the pipeline and write artifacts; returns the written manifest.

    `stages` selects what to compute: the spectrum/transport/fit
    subcommands are restrictions of the full run.
    """
    config.validate()
    started = time.monotonic()
    out_dir = Path(config.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    manifest = RunManifest(config=config.echo())
    grid = parse_grid_spec(config.grid)

    series = None
    stretched = config.fit_model == "stretched"
    if config.graph is not None:
        graph = parse_graph_spec(config.graph, default_seed=config.seed)
        spectrum = decompose(laplacian(graph),
                             with_vectors=config.vectors or config.chi)
        if "spectrum" in stages:
            _write(out_dir, "spectrum.csv", spectrum_csv(spectrum), manifest)
            _write(out_dir, "degeneracies.csv", degeneracies_csv(spectrum), manifest)
        if config.chi:
            _write(out_dir, "chi.csv", chi_csv(chi_matrix(spectrum)), manifest)
        if "series" in stages:
            pi = exact_average_return(spectrum, grid) if config.vectors else None
            series = TransportSeries(grid=grid,
                                     p_bar=classical_return(spectrum, grid),
                                     alpha_bar_sq=quantum_return_bound(spectrum, grid),
                                     pi_bar=pi)
    else:
        dos = parse_dos_spec(config.dos)
        if config.fit_model == "auto" and isinstance(dos, Lifshits):
            stretched = True
        if "series" in stages:
            series = TransportSeries(
                grid=grid,
                p_bar=classical_return_continuum(dos, grid),
                alpha_bar_sq=quantum_return_bound_continuum(dos, grid))

    if series is not None:
        _write(out_dir, "series.csv", series_csv(series), manifest)
        if "analysis" in stages:
            report = _analyze(series, config, stretched)
            _write(out_dir, "report.txt", report_text(report), manifest)
            if report.ratio is not None:
                _write(out_dir, "deltap.csv", ratio_csv(report.ratio), manifest)

    manifest.duration_s = time.monotonic() - started
    (out_dir / "manifest.txt").write_text(manifest.to_text())
    if not manifest.verify(out_dir):
        raise NumericalError("manifest verification failed after writing artifacts")
    return manifest


def analyze_series_file(path, config: ExperimentConfig) -> RunManifest:
    """The `fit` subcommand: decay analysis of an existing series CSV."""
    started = time.monotonic()
    raw = np.genfromtxt(path, delimiter=",", names=True)
    if raw.dtype.names is None or "t" not in raw.dtype.names:
        raise ParseError("series CSV needs a 't' column", text=str(path), position=0)
    names = raw.dtype.names
    grid = TimeGrid(np.atleast_1d(raw["t"]),
                    spacing="linear")
    series = TransportSeries(
        grid=grid,
        p_bar=np.atleast_1d(raw["p_bar"]),
        alpha_bar_sq=np.atleast_1d(raw["alpha_bar_sq"]),
        pi_bar=np.atleast_1d(raw["pi_bar"]) if "pi_bar" in names else None)
    out_dir = Path(config.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    manifest = RunManifest(config={**config.echo(), "series_file": str(path)})
    report = _analyze(series, config, stretched=config.fit_model == "stretched")
    _write(out_dir, "report.txt", report_text(report), manifest)
    if report.ratio is not None:
        _write(out_dir, "deltap.csv", ratio_csv(report.ratio), manifest)
    manifest.duration_s = time.monotonic() - started
    (out_dir / "manifest.txt").write_text(manifest.to_text())
    return manifest


# -- argument parsing ---------------------------------------------------------

def _add_common(sub, with_specs=True):
    if with_specs:
        sub.add_argument("--graph", help="graph spec, e.g. ring:200 or er:1000,0.1,seed=1")
        sub.add_argument("--dos", help="DOS spec, e.g. semicircle:nu=0.5,lmax=2")
    sub.add_argument("--out", help="output directory (default: out)")
    sub.add_argument("--grid", help=f"time grid spec (default: {DEFAULT_GRID_SPEC})")
    sub.add_argument("--fit-window", help="classical fit window LO,HI")
    sub.add_argument("--fit-window-quantum", help="quantum fit window LO,HI")
    sub.add_argument("--envelope-width", type=int, help="envelope half width (grid points)")
    sub.add_argument("--tail-fraction", type=float, help="tail fraction for saturation stats")
    sub.add_argument("--seed", type=int, help="default seed for seeded graph families")
    sub.add_argument("--vectors", action="store_true", default=None,
                     help="compute eigenvectors (enables exact quantum average)")
    sub.add_argument("--chi", action="store_true", default=None,
                     help="write the long-time average transition matrix")
    sub.add_argument("--fit-model", choices=("auto", "power", "stretched"))
    sub.add_argument("--config", help="key = value config file; flags override it")


def _config_from_args(args, base: ExperimentConfig | None = None) -> ExperimentConfig:
    cfg = base or ExperimentConfig()
    if getattr(args, "config", None):
        cfg = replace(cfg, **read_config_file(args.config))
    updates = {}
    for flag, key in [("graph", "graph"), ("dos", "dos"), ("out", "out"),
                      ("grid", "grid"), ("envelope_width", "envelope_width"),
                      ("tail_fraction", "tail_fraction"), ("seed", "seed"),
                      ("vectors", "vectors"), ("chi", "chi"),
                      ("fit_model", "fit_model")]:
        val = getattr(args, flag, None)
        if val is not None:
            updates[key] = val
    if getattr(args, "fit_window", None):
        updates["fit_window"] = _parse_window(args.fit_window)
    if getattr(args, "fit_window_quantum", None):
        updates["fit_window_quantum"] = _parse_window(args.fit_window_quantum)
    return replace(cfg, **updates)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="specwalk",
        description="Classical vs quantum transport efficiency from graph spectra")
    parser.add_argument("--version", action="version", version=__version__)
    subs = parser.add_subparsers(dest="command", required=True)

    run = subs.add_parser("run", help="full pipeline: series, spectrum, analysis")
    _add_common(run)

    spec = subs.add_parser("spectrum", help="eigenvalues and degeneracies only")
    _add_common(spec)

    trans = subs.add_parser("transport", help="transport series only")
    _add_common(trans)

    fit = subs.add_parser("fit", help="decay analysis of an existing series CSV")
    fit.add_argument("--series", required=True, help="path to a series CSV")
    _add_common(fit, with_specs=False)

    pre = subs.add_parser("preset", help="run a documented preset")
    pre.add_argument("name", help=f"one of {sorted(PRESETS)}")
    _add_common(pre)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "preset":
            cfg = _config_from_args(args, base=preset(args.name))
            run_experiment(cfg)
        elif args.command == "run":
            run_experiment(_config_from_args(args))
        elif args.command == "spectrum":
            cfg = _config_from_args(args)
            if cfg.graph is None:
                raise ParseError("spectrum needs --graph", text="", position=0)
            run_experiment(cfg, stages=("spectrum",))
        elif args.command == "transport":
            run_experiment(_config_from_args(args), stages=("series",))
        elif args.command == "fit":
            analyze_series_file(args.series, _config_from_args(args))
    except (ParseError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except NumericalError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
