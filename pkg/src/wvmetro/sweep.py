"""Parameter sweeps, figure presets, and delimited-file emission.

A sweep walks one axis parameter (post-selection angle, coupling strength,
noise strength, or combination weight), evaluates one or more declared
series at every point, and writes a CSV or JSON table.  Singular points are
emitted with a flag and empty value cells rather than dropped, so the
divergence structure of the balanced regime stays visible in the files.
Output is byte-identical for identical config and seed.
"""

from __future__ import annotations

import configparser
import io
import json
import math
import os
import tempfile
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from enum import Enum
from pathlib import Path

import numpy as np

from .errors import (
    ConfigError,
    DegenerateModification,
    OrthogonalPostSelection,
    SingularCombination,
    UnknownPreset,
)
from .estimators import (
    Scheme,
    expected_partition,
    fi_cm,
    fisher_information,
    snr_cm,
)
from .mc import (
    accepted_trial_means,
    conventional_trial_means,
    oracle_compare,
    run_ensemble,
)
from .noise import NoiseKind, NoiseSpec, branch_moments, noisy_dcsv, noisy_selection_probabilities
from .states import (
    Basis,
    Branch,
    SystemConfig,
    imaginary_weak_value_config,
    real_weak_value_config,
    weak_value,
)

TOOL_VERSION = "0.1.0"


class Mode(Enum):
    ANALYTIC = "analytic"
    MONTECARLO = "montecarlo"
    BOTH = "both"


class Quantity(Enum):
    AMPLIFICATION = "amplification"
    SNR = "snr"
    EFF_FI = "eff_fi"
    FI_TOT = "fi_tot"
    FI_WVA = "fi_wva"
    AAV = "aav"


AXIS_NAMES = ("theta", "phi", "g", "jp", "beta")
OVERRIDE_KEYS = ("angle", "g", "d", "noise_width", "beta")


@dataclass(frozen=True)
class Axis:
    """Swept parameter: name, inclusive range, and point count."""

    name: str
    start: float
    stop: float
    points: int

    def __post_init__(self) -> None:
        if self.name not in AXIS_NAMES:
            raise ConfigError(f"unknown axis {self.name!r}; expected one of {AXIS_NAMES}")
        if not (self.stop > self.start):
            raise ConfigError("axis range is empty")
        if self.points < 2:
            raise ConfigError("axis needs at least 2 points")

    def values(self) -> np.ndarray:
        return np.linspace(self.start, self.stop, self.points)


def open_axis(name: str, lo: float, hi: float, points: int) -> Axis:
    """Axis over the open interval (lo, hi): endpoints stepped inside."""
    step = (hi - lo) / (points + 1)
    return Axis(name=name, start=lo + step, stop=hi - step, points=points)


@dataclass(frozen=True)
class FixedParams:
    """Sweep parameters held fixed (unless the axis or a series overrides them)."""

    family: str = "real"          # real | imaginary post-selection family
    angle: float = math.pi / 4    # theta (real family) or phi (imaginary family)
    g: float = 0.01
    d: float = 1.0
    basis: Basis = Basis.X
    noise_kind: NoiseKind = NoiseKind.NONE
    noise_width: float = 0.0
    beta: float = 1.0

    def __post_init__(self) -> None:
        if self.family not in ("real", "imaginary"):
            raise ConfigError(f"unknown post-selection family {self.family!r}")


@dataclass(frozen=True)
class SeriesSpec:
    """One output column group: scheme, quantity, branch, parameter overrides."""

    label: str
    scheme: Scheme
    quantity: Quantity
    branch: Branch = Branch.PSA
    overrides: tuple[tuple[str, float], ...] = ()

    def __post_init__(self) -> None:
        for key, _ in self.overrides:
            if key not in OVERRIDE_KEYS:
                raise ConfigError(f"series override {key!r} not in {OVERRIDE_KEYS}")


@dataclass(frozen=True)
class SweepConfig:
    """Complete description of one sweep run."""

    axis: Axis
    fixed: FixedParams = FixedParams()
    series: tuple[SeriesSpec, ...] = (SeriesSpec("jwm_snr", Scheme.JWM, Quantity.SNR),)
    mode: Mode = Mode.ANALYTIC
    output: str = "sweep.csv"
    format: str = "csv"
    seed: int = 20260810
    trials: int = 200
    particles: int = 10000

    def __post_init__(self) -> None:
        if self.format not in ("csv", "json"):
            raise ConfigError(f"unknown output format {self.format!r}")
        if not self.series:
            raise ConfigError("a sweep needs at least one series")
        if self.trials < 2 or self.particles < 2:
            raise ConfigError("trials and particles must both be at least 2")

    @property
    def scheme(self) -> Scheme:
        return self.series[0].scheme


@dataclass(frozen=True, eq=False)
class SweepResult:
    """In-memory sweep table: column names, row cells (None = undefined)."""

    config: SweepConfig
    columns: list[str]
    rows: list[list]


# ---------------------------------------------------------------------------
# point evaluation


def _resolved_params(config: SweepConfig, axis_value: float,
                     series: SeriesSpec | None) -> dict[str, float]:
    fx = config.fixed
    params = {"angle": fx.angle, "g": fx.g, "d": fx.d,
              "noise_width": fx.noise_width, "beta": fx.beta}
    axis_key = {"theta": "angle", "phi": "angle", "g": "g",
                "jp": "noise_width", "beta": "beta"}[config.axis.name]
    params[axis_key] = axis_value
    if series is not None:
        for key, value in series.overrides:
            params[key] = value
    return params


def _point_config(config: SweepConfig, params: dict[str, float]) -> tuple[SystemConfig, NoiseSpec]:
    fx = config.fixed
    if fx.family == "real":
        cfg = real_weak_value_config(params["angle"], params["g"], params["d"])
    else:
        cfg = imaginary_weak_value_config(params["angle"], params["g"], params["d"])
    noise = NoiseSpec(fx.noise_kind, fx.basis,
                      params["noise_width"] if fx.noise_kind is not NoiseKind.NONE else 0.0)
    return cfg, noise


def _scale_reference(quantity: Quantity, cfg: SystemConfig, n_total: int) -> float:
    if quantity in (Quantity.SNR,):
        return snr_cm(cfg, n_total)
    if quantity in (Quantity.EFF_FI, Quantity.FI_TOT, Quantity.FI_WVA):
        return fi_cm(cfg, n_total)
    return cfg.meter.d


def _series_raw(config: SweepConfig, cfg: SystemConfig, noise: NoiseSpec,
                beta: float, series: SeriesSpec) -> float:
    n_total = config.particles
    basis = config.fixed.basis
    scheme, quantity = series.scheme, series.quantity
    if quantity is Quantity.AAV:
        sel = cfg.post if series.branch is Branch.PSA else cfg.rejected
        return cfg.meter.d * weak_value(cfg.pre, sel).real
    if quantity is Quantity.FI_TOT:
        if basis is not Basis.X:
            raise ConfigError("Fisher-information series require position readout")
        probs = noisy_selection_probabilities(cfg, noise)
        n1, n2 = expected_partition(cfg, n_total, probabilities=probs, rounded=False)
        return (n1 * fisher_information(cfg, Branch.PSA)
                + n2 * fisher_information(cfg, Branch.PSR))
    if quantity is Quantity.FI_WVA:
        if basis is not Basis.X:
            raise ConfigError("Fisher-information series require position readout")
        probs = noisy_selection_probabilities(cfg, noise)
        part = expected_partition(cfg, n_total, probabilities=probs, rounded=False)
        n_kept = part[0] if series.branch is Branch.PSA else part[1]
        return n_kept * fisher_information(cfg, series.branch)
    if scheme is Scheme.CM:
        if quantity is not Quantity.SNR:
            raise ConfigError("conventional series support the snr quantity only")
        return snr_cm(cfg, n_total)
    if scheme is Scheme.WVA:
        moments = branch_moments(cfg, series.branch, basis, noise)
        if quantity is Quantity.AMPLIFICATION:
            return moments.mean
        probs = noisy_selection_probabilities(cfg, noise)
        part = expected_partition(cfg, n_total, probabilities=probs, rounded=False)
        n_kept = part[0] if series.branch is Branch.PSA else part[1]
        snr_val = math.sqrt(n_kept) * abs(moments.mean) / math.sqrt(moments.variance)
        if quantity is Quantity.SNR:
            return snr_val
        return snr_val**2 / cfg.meter.d**2  # EFF_FI of the single-branch estimator
    est = noisy_dcsv(cfg, n_total, noise=noise, beta=beta, basis=basis)
    if quantity is Quantity.AMPLIFICATION:
        return est.signal
    if quantity is Quantity.SNR:
        return est.snr
    return est.eff_fi


def _delta_se_snr(mean: float, var: float, m_trials: int) -> float:
    se_mean = math.sqrt(var / m_trials)
    se_var = var * math.sqrt(2.0 / (m_trials - 1))
    return math.sqrt(se_mean**2 / var + mean**2 * se_var**2 / (4.0 * var**3))


def _series_mc(config: SweepConfig, cfg: SystemConfig, noise: NoiseSpec,
               beta: float, series: SeriesSpec, master_seed: int):
    """(empirical value, standard error) or (None, None) for analytic-only series."""
    n, m = config.particles, config.trials
    basis = config.fixed.basis
    quantity = series.quantity
    if quantity in (Quantity.FI_TOT, Quantity.FI_WVA, Quantity.AAV):
        return None, None
    if series.scheme is Scheme.CM:
        means = conventional_trial_means(cfg, n, m, master_seed, noise)
        mu, var = float(means.mean()), float(means.var(ddof=1))
        return abs(mu) / math.sqrt(var), _delta_se_snr(mu, var, m)
    if series.scheme is Scheme.WVA:
        means = accepted_trial_means(cfg, n, m, basis, noise, master_seed, series.branch)
        means = means[np.isfinite(means)]
        if means.size < 2:
            return None, None
        mu, var = float(means.mean()), float(means.var(ddof=1))
        if quantity is Quantity.AMPLIFICATION:
            return mu, math.sqrt(var / means.size)
        if var == 0.0:
            return None, None
        if quantity is Quantity.SNR:
            return abs(mu) / math.sqrt(var), _delta_se_snr(mu, var, means.size)
        eff = (mu / cfg.meter.d) ** 2 / var
        se = 2.0 * eff * _delta_se_snr(mu, var, means.size) / max(abs(mu) / math.sqrt(var), 1e-300)
        return eff, se
    stats = run_ensemble(cfg, n, m, basis, noise, beta, master_seed)
    m_valid = round(stats.trials * (1.0 - stats.singular_fraction))
    mu, var = stats.mean_dcsv, stats.var_dcsv
    if quantity is Quantity.AMPLIFICATION:
        return mu, math.sqrt(var / m_valid)
    if quantity is Quantity.SNR:
        return stats.empirical_snr, _delta_se_snr(mu, var, m_valid)
    snr_emp = max(stats.empirical_snr, 1e-300)
    return stats.empirical_eff_fi, 2.0 * stats.empirical_eff_fi * _delta_se_snr(mu, var, m_valid) / snr_emp


def _evaluate_point(config: SweepConfig, index: int, axis_value: float) -> list:
    base_cfg, base_noise = _point_config(config, _resolved_params(config, axis_value, None))
    try:
        p1, p2 = noisy_selection_probabilities(base_cfg, base_noise)
    except Exception:
        p1 = p2 = math.nan
    try:
        aw = weak_value(base_cfg.pre, base_cfg.post)
        aw_re, aw_im = aw.real, aw.imag
    except OrthogonalPostSelection:
        aw_re = aw_im = math.nan
    cells: list = [axis_value, p1, p2, aw_re, aw_im]
    singular = False
    values: list = []
    for series in config.series:
        params = _resolved_params(config, axis_value, series)
        cfg, noise = _point_config(config, params)
        beta = params["beta"]
        try:
            raw = _series_raw(config, cfg, noise, beta, series)
            scaled = raw / _scale_reference(series.quantity, cfg, config.particles)
        except (SingularCombination, OrthogonalPostSelection, DegenerateModification):
            raw = scaled = None
            singular = True
        values.append((series, cfg, noise, beta, raw, scaled))
    for series, cfg, noise, beta, raw, scaled in values:
        cells.extend([raw, scaled])
        if config.mode is not Mode.ANALYTIC:
            if raw is None:
                cells.extend([None, None])
            else:
                seed = _point_seed(config.seed, index)
                try:
                    mc, se = _series_mc(config, cfg, noise, beta, series, seed)
                except Exception:
                    mc, se = None, None
                cells.extend([mc, se])
    return [cells[0], cells[1], cells[2], cells[3], cells[4], singular] + cells[5:]


def _point_seed(master: int, index: int) -> int:
    seq = np.random.SeedSequence(entropy=master, spawn_key=(index,))
    return int(seq.generate_state(1, dtype=np.uint64)[0])


def result_columns(config: SweepConfig) -> list[str]:
    cols = [config.axis.name, "p_f", "p_fbar", "aw_re", "aw_im", "singular"]
    for series in config.series:
        cols.extend([f"{series.label}_raw", f"{series.label}_scaled"])
        if config.mode is not Mode.ANALYTIC:
            cols.extend([f"{series.label}_mc", f"{series.label}_mc_se"])
    return cols


def run_sweep(config: SweepConfig, threads: int | None = None) -> SweepResult:
    """Evaluate every axis point; rows come back in axis order.

    Monte Carlo points use independent seed streams derived from
    (seed, point index), so results do not depend on evaluation order or
    worker count.
    """
    axis_values = [float(v) for v in config.axis.values()]
    if threads is None:
        raw = os.environ.get("WVMETRO_THREADS", "")
        try:
            threads = int(raw) if raw else (os.cpu_count() or 1)
        except ValueError:
            threads = os.cpu_count() or 1
    if config.mode is not Mode.ANALYTIC and threads > 1 and len(axis_values) >= 4:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            rows = list(pool.map(lambda iv: _evaluate_point(config, iv[0], iv[1]),
                                 enumerate(axis_values)))
    else:
        rows = [_evaluate_point(config, i, v) for i, v in enumerate(axis_values)]
    return SweepResult(config=config, columns=result_columns(config), rows=rows)


# ---------------------------------------------------------------------------
# config file round-trip


def emit_config(config: SweepConfig) -> str:
    """Serialize a sweep config to the flat key=value format (canonical form)."""
    out = io.StringIO()
    out.write("[sweep]\n")
    out.write(f"mode = {config.mode.value}\n")
    out.write(f"axis = {config.axis.name}\n")
    out.write(f"start = {_fmt(config.axis.start)}\n")
    out.write(f"stop = {_fmt(config.axis.stop)}\n")
    out.write(f"points = {config.axis.points}\n")
    out.write(f"output = {config.output}\n")
    out.write(f"format = {config.format}\n")
    out.write(f"seed = {config.seed}\n")
    out.write(f"trials = {config.trials}\n")
    out.write(f"particles = {config.particles}\n")
    fx = config.fixed
    out.write("\n[fixed]\n")
    out.write(f"family = {fx.family}\n")
    out.write(f"angle = {_fmt(fx.angle)}\n")
    out.write(f"g = {_fmt(fx.g)}\n")
    out.write(f"d = {_fmt(fx.d)}\n")
    out.write(f"basis = {fx.basis.value}\n")
    out.write(f"noise = {fx.noise_kind.value}\n")
    out.write(f"noise_width = {_fmt(fx.noise_width)}\n")
    out.write(f"beta = {_fmt(fx.beta)}\n")
    out.write("\n[series]\n")
    for s in config.series:
        spec = f"{s.scheme.value}:{s.quantity.value}:{s.branch.value}"
        for key, value in s.overrides:
            spec += f" {key}={_fmt(value)}"
        out.write(f"{s.label} = {spec}\n")
    return out.getvalue()


def parse_config(text: str) -> SweepConfig:
    """Parse the flat key=value sweep format; raises ``ConfigError`` on problems."""
    parser = configparser.ConfigParser(inline_comment_prefixes=(";", "#"))
    try:
        parser.read_string(text)
    except configparser.Error as exc:
        raise ConfigError(f"cannot parse config: {exc}") from exc
    if "sweep" not in parser:
        raise ConfigError("missing [sweep] section")
    sw = parser["sweep"]
    try:
        axis = Axis(name=sw.get("axis", "theta"),
                    start=float(sw.get("start", "0.1")),
                    stop=float(sw.get("stop", "3.0")),
                    points=int(sw.get("points", "50")))
        mode = Mode(sw.get("mode", "analytic"))
        fmt = sw.get("format", "csv")
        fixed_sec = parser["fixed"] if "fixed" in parser else {}
        fixed = FixedParams(
            family=_get(fixed_sec, "family", "real"),
            angle=float(_get(fixed_sec, "angle", str(math.pi / 4))),
            g=float(_get(fixed_sec, "g", "0.01")),
            d=float(_get(fixed_sec, "d", "1.0")),
            basis=Basis(_get(fixed_sec, "basis", "x")),
            noise_kind=NoiseKind(_get(fixed_sec, "noise", "none")),
            noise_width=float(_get(fixed_sec, "noise_width", "0.0")),
            beta=float(_get(fixed_sec, "beta", "1.0")),
        )
        if "series" in parser and len(parser["series"]) > 0:
            series = tuple(_parse_series(label, spec)
                           for label, spec in parser["series"].items())
        else:
            scheme = Scheme(sw.get("scheme", "jwm"))
            quantity = Quantity(sw.get("quantity", "snr"))
            series = (SeriesSpec(f"{scheme.value}_{quantity.value}", scheme, quantity),)
        return SweepConfig(
            axis=axis, fixed=fixed, series=series, mode=mode,
            output=sw.get("output", "sweep.csv"), format=fmt,
            seed=int(sw.get("seed", "20260810")),
            trials=int(sw.get("trials", "200")),
            particles=int(sw.get("particles", "10000")),
        )
    except (ValueError, KeyError) as exc:
        raise ConfigError(f"invalid config value: {exc}") from exc


def _get(section, key: str, default: str) -> str:
    try:
        return section.get(key, default)
    except AttributeError:
        return default


def _parse_series(label: str, spec: str) -> SeriesSpec:
    parts = spec.split()
    if not parts:
        raise ConfigError(f"empty series spec for {label!r}")
    head = parts[0].split(":")
    if len(head) < 2:
        raise ConfigError(f"series {label!r} needs scheme:quantity")
    try:
        scheme = Scheme(head[0])
        quantity = Quantity(head[1])
        branch = Branch(head[2]) if len(head) > 2 else Branch.PSA
    except ValueError as exc:
        raise ConfigError(f"series {label!r}: {exc}") from exc
    overrides = []
    for token in parts[1:]:
        if "=" not in token:
            raise ConfigError(f"series {label!r}: bad override {token!r}")
        key, _, value = token.partition("=")
        try:
            overrides.append((key, float(value)))
        except ValueError as exc:
            raise ConfigError(f"series {label!r}: bad override {token!r}") from exc
    return SeriesSpec(label=label, scheme=scheme, quantity=quantity,
                      branch=branch, overrides=tuple(overrides))


def load_config(path: str | Path) -> SweepConfig:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path}: {exc}") from exc
    return parse_config(text)


# ---------------------------------------------------------------------------
# writers


def _fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "1" if value else "0"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    return "%.17g" % float(value)


def _meta_lines(config: SweepConfig) -> list[str]:
    lines = [f"# wvmetro {TOOL_VERSION}", f"# seed = {config.seed}"]
    lines.extend("# " + line for line in emit_config(config).splitlines())
    return lines


def _atomic_write(path: Path, data: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    handle = tempfile.NamedTemporaryFile(
        "w", dir=path.parent, prefix=path.name + ".", suffix=".tmp", delete=False)
    try:
        with handle:
            handle.write(data)
        os.replace(handle.name, path)
    except OSError:
        if os.path.exists(handle.name):
            os.unlink(handle.name)
        raise


def render_csv(result: SweepResult) -> str:
    lines = _meta_lines(result.config)
    lines.append(",".join(result.columns))
    for row in result.rows:
        lines.append(",".join(_fmt(cell) for cell in row))
    return "\n".join(lines) + "\n"


def render_json(result: SweepResult) -> str:
    meta = {
        "tool": "wvmetro",
        "version": TOOL_VERSION,
        "seed": result.config.seed,
        "config": emit_config(result.config),
    }
    cells = []
    for row in result.rows:
        cells.append("[" + ", ".join(
            "null" if c is None else
            ("true" if c is True else
             ("false" if c is False else _fmt_json_number(c)))
            for c in row) + "]")
    body = (
        "{\n"
        f'"meta": {json.dumps(meta, indent=2)},\n'
        f'"columns": {json.dumps(result.columns)},\n'
        '"rows": [\n' + ",\n".join(cells) + "\n]\n"
        "}\n"
    )
    return body


def _fmt_json_number(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    v = float(value)
    if math.isnan(v):
        return "null"
    return "%.17g" % v


def write_result(result: SweepResult, path: str | Path | None = None) -> Path:
    """Write the sweep table to its configured destination (atomically)."""
    target = Path(path) if path is not None else Path(result.config.output)
    text = render_csv(result) if result.config.format == "csv" else render_json(result)
    _atomic_write(target, text)
    return target


# ---------------------------------------------------------------------------
# comparison runs (analytic vs Monte Carlo per axis point)


COMPARE_COLUMNS = [
    "axis_value",
    "signal_analytic", "signal_empirical", "z_signal",
    "variance_analytic", "variance_empirical", "z_variance",
    "snr_analytic", "snr_empirical", "z_snr",
    "eff_fi_analytic", "eff_fi_empirical", "z_eff_fi",
    "singular_fraction", "passed",
]


def run_compare(config: SweepConfig) -> SweepResult:
    """Run the analytic-vs-empirical comparison at every axis point."""
    rows = []
    for i, value in enumerate(config.axis.values()):
        params = _resolved_params(config, float(value), None)
        cfg, noise = _point_config(config, params)
        try:
            report = oracle_compare(cfg, config.particles, config.trials,
                                    basis=config.fixed.basis, noise=noise,
                                    beta=params["beta"],
                                    master_seed=_point_seed(config.seed, i))
            d = report.as_dict()
            rows.append([float(value)] + [d[k] for k in COMPARE_COLUMNS[1:-1]]
                        + [bool(report.passed)])
        except (SingularCombination, OrthogonalPostSelection):
            rows.append([float(value)] + [None] * (len(COMPARE_COLUMNS) - 2) + [False])
    return SweepResult(config=config, columns=list(COMPARE_COLUMNS), rows=rows)


# ---------------------------------------------------------------------------
# figure presets


_G_LADDER = (1e-4, 1e-3, 1e-2, 1e-1, 0.5)
_JP_LADDER = (0.0, 0.05, 0.1, 0.2, 0.4)


def _g_label(g: float) -> str:
    return ("%.0e" % g).replace("e-0", "e-").replace("e+00", "")


def _series_per_g(scheme: Scheme, quantity: Quantity, stem: str,
                  branch: Branch = Branch.PSA) -> tuple[SeriesSpec, ...]:
    return tuple(
        SeriesSpec(f"{stem}_g{_g_label(g)}", scheme, quantity, branch, (("g", g),))
        for g in _G_LADDER
    )


def _preset_fig2a() -> SweepConfig:
    return SweepConfig(
        axis=open_axis("theta", 0.0, 2.0 * math.pi, 200),
        fixed=FixedParams(family="real"),
        series=_series_per_g(Scheme.JWM, Quantity.AMPLIFICATION, "jwm_amp"),
        output="fig2a.csv",
    )


def _preset_fig2b() -> SweepConfig:
    series = _series_per_g(Scheme.WVA, Quantity.AMPLIFICATION, "wva_amp")
    series += (SeriesSpec("aav_limit", Scheme.WVA, Quantity.AAV),)
    return SweepConfig(
        axis=open_axis("theta", 0.0, 2.0 * math.pi, 200),
        fixed=FixedParams(family="real"),
        series=series,
        output="fig2b.csv",
    )


def _preset_fig3a() -> SweepConfig:
    return SweepConfig(
        axis=open_axis("theta", 0.0, 2.0 * math.pi, 200),
        fixed=FixedParams(family="real"),
        series=_series_per_g(Scheme.JWM, Quantity.SNR, "jwm_snr"),
        output="fig3a.csv",
    )


def _preset_fig3b() -> SweepConfig:
    return SweepConfig(
        axis=open_axis("theta", 0.0, 2.0 * math.pi, 200),
        fixed=FixedParams(family="real"),
        series=_series_per_g(Scheme.WVA, Quantity.SNR, "wva_snr"),
        output="fig3b.csv",
    )


def _preset_fig4() -> SweepConfig:
    return SweepConfig(
        axis=open_axis("theta", 0.0, 2.0 * math.pi, 200),
        fixed=FixedParams(family="real", g=0.01),
        series=(
            SeriesSpec("eff_fi", Scheme.JWM, Quantity.EFF_FI),
            SeriesSpec("wva_fi", Scheme.WVA, Quantity.FI_WVA),
            SeriesSpec("fi_tot", Scheme.JWM, Quantity.FI_TOT),
        ),
        output="fig4.csv",
    )


def _preset_fig5() -> SweepConfig:
    return SweepConfig(
        axis=open_axis("phi", 0.0, 2.0 * math.pi, 400),
        fixed=FixedParams(family="imaginary", g=0.01, basis=Basis.P,
                          noise_kind=NoiseKind.P0, noise_width=0.1),
        series=(
            SeriesSpec("jwm_snr", Scheme.JWM, Quantity.SNR),
            SeriesSpec("wva_acc_snr", Scheme.WVA, Quantity.SNR, Branch.PSA),
            SeriesSpec("wva_rej_snr", Scheme.WVA, Quantity.SNR, Branch.PSR),
        ),
        output="fig5.csv",
    )


def _preset_fig6a() -> SweepConfig:
    series = tuple(
        SeriesSpec(f"jwm_snr_jp{jp:g}", Scheme.JWM, Quantity.SNR, Branch.PSA,
                   (("noise_width", jp),))
        for jp in _JP_LADDER
    )
    return SweepConfig(
        axis=open_axis("phi", 0.0, 2.0 * math.pi, 200),
        fixed=FixedParams(family="imaginary", g=0.01, basis=Basis.P,
                          noise_kind=NoiseKind.P0, noise_width=0.1),
        series=series,
        output="fig6a.csv",
    )


def _preset_fig6b() -> SweepConfig:
    series = tuple(
        SeriesSpec(f"jwm_snr_g{_g_label(g)}", Scheme.JWM, Quantity.SNR, Branch.PSA,
                   (("g", g),))
        for g in (1e-2, 1e-3, 1e-4)
    )
    return SweepConfig(
        axis=Axis("jp", 0.0, 1.0, 200),
        fixed=FixedParams(family="imaginary", angle=3.0 * math.pi / 4.0, g=0.01,
                          basis=Basis.P, noise_kind=NoiseKind.P0),
        series=series,
        output="fig6b.csv",
    )


_PRESETS = {
    "fig2a": _preset_fig2a,
    "fig2b": _preset_fig2b,
    "fig3a": _preset_fig3a,
    "fig3b": _preset_fig3b,
    "fig4": _preset_fig4,
    "fig5": _preset_fig5,
    "fig6a": _preset_fig6a,
    "fig6b": _preset_fig6b,
}


def preset_names() -> tuple[str, ...]:
    return tuple(sorted(_PRESETS))


def figure_preset(name: str) -> SweepConfig:
    """Sweep configuration reproducing the data behind one published panel."""
    try:
        builder = _PRESETS[name]
    except KeyError:
        raise UnknownPreset(
            f"unknown preset {name!r}; available: {', '.join(preset_names())}"
        ) from None
    return builder()
