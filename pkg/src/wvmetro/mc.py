"""Particle-level Monte Carlo engine and analytic-vs-empirical comparison.

Each trial simulates an N-particle experiment exactly as performed at the
bench: draw the post-selection outcome per particle, draw the readout from
the branch density via a tabulated inverse CDF, apply the noise draw, and
form the difference estimator from the *observed* counts.  Trial streams
are counter-based (keyed by master seed and trial index), so serial and
parallel execution produce bitwise-identical results.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .densities import GridSpec
from .errors import AllTrialsSingular
from .estimators import DcsvEstimate
from .noise import (
    NoiseKind,
    NoiseSpec,
    broadened_envelope_var,
    noisy_dcsv,
    noisy_pdf,
    noisy_selection_probabilities,
)
from .states import Basis, Branch, SystemConfig

SAMPLER_POINTS = 2**14
Z_THRESHOLD = 5.0


@dataclass(frozen=True, eq=False)
class SamplerTable:
    """Tabulated inverse-CDF sampler over a density grid.

    Flat CDF runs (zero-density cells) are dropped at build time so the
    inverse interpolation stays well defined; they carry no mass.
    """

    xs: np.ndarray
    cdf: np.ndarray

    def draw(self, unit: np.ndarray) -> np.ndarray:
        """Map uniform(0,1) variates through the inverse CDF."""
        return np.interp(unit, self.cdf, self.xs)


def build_sampler(pdf_xs: np.ndarray, pdf_vals: np.ndarray) -> SamplerTable:
    """Tabulate the inverse CDF of a non-negative density by trapezoid masses."""
    vals = np.clip(pdf_vals, 0.0, None)
    masses = 0.5 * (vals[1:] + vals[:-1]) * np.diff(pdf_xs)
    cdf = np.concatenate([[0.0], np.cumsum(masses)])
    cdf /= cdf[-1]
    keep = np.concatenate([[True], np.diff(cdf) > 0.0])
    return SamplerTable(xs=pdf_xs[keep], cdf=cdf[keep])


@dataclass(frozen=True)
class TrialResult:
    """Raw outcome of one N-particle experiment."""

    n1: int
    n2: int
    y1: float
    y2: float
    dcsv: float
    singular: bool


@dataclass(frozen=True)
class EnsembleStats:
    """Empirical statistics of the difference estimator over many trials."""

    trials: int
    mean_dcsv: float
    var_dcsv: float
    empirical_snr: float
    empirical_eff_fi: float
    singular_fraction: float


@dataclass(frozen=True)
class ComparisonReport:
    """Closed-form predictions against empirical estimates, with z-scores."""

    analytic: DcsvEstimate
    empirical: EnsembleStats
    z_signal: float
    z_variance: float
    z_snr: float
    z_eff_fi: float
    threshold: float
    passed: bool

    def as_dict(self) -> dict[str, float]:
        return {
            "signal_analytic": self.analytic.signal,
            "signal_empirical": self.empirical.mean_dcsv,
            "z_signal": self.z_signal,
            "variance_analytic": self.analytic.variance,
            "variance_empirical": self.empirical.var_dcsv,
            "z_variance": self.z_variance,
            "snr_analytic": self.analytic.snr,
            "snr_empirical": self.empirical.empirical_snr,
            "z_snr": self.z_snr,
            "eff_fi_analytic": self.analytic.eff_fi,
            "eff_fi_empirical": self.empirical.empirical_eff_fi,
            "z_eff_fi": self.z_eff_fi,
            "singular_fraction": self.empirical.singular_fraction,
            "passed": float(self.passed),
        }


def _trial_rng(master_seed: int, trial_index: int) -> np.random.Generator:
    """Independent counter-based stream for one trial."""
    seq = np.random.SeedSequence(entropy=master_seed, spawn_key=(trial_index,))
    return np.random.Generator(np.random.Philox(seq))


@lru_cache(maxsize=64)
def _branch_samplers(cfg: SystemConfig, basis: Basis, noise: NoiseSpec,
                     n_points: int = SAMPLER_POINTS):
    """(p_accept, sampler_accept, sampler_reject) with noise folded in.

    X-basis offsets are applied additively after the draw, so the tabulated
    density is the clean one; a position offset seen from the momentum basis
    is a pure phase and changes nothing; a momentum offset broadens the
    tabulated envelope (the per-particle offset integrated out exactly).
    """
    sample_noise = NoiseSpec.none(basis) if noise.kind is NoiseKind.X0 else noise
    tables = []
    for branch in (Branch.PSA, Branch.PSR):
        if basis is Basis.X:
            grid = GridSpec.for_x(cfg, n=n_points)
        else:
            var = (broadened_envelope_var(cfg, noise.width)
                   if noise.kind is NoiseKind.P0 else None)
            grid = GridSpec.for_p(cfg, n=n_points, envelope_var=var)
        pdf = noisy_pdf(cfg, branch, basis, sample_noise, grid=grid)
        tables.append(build_sampler(pdf.xs, pdf.vals))
    p_accept, _ = noisy_selection_probabilities(cfg, noise)
    return p_accept, tables[0], tables[1]


def sample_particle(cfg: SystemConfig, basis: Basis, noise: NoiseSpec,
                    rng: np.random.Generator) -> tuple[Branch, float]:
    """Draw one particle: post-selection outcome and readout value."""
    p_accept, table1, table2 = _branch_samplers(cfg, basis, noise)
    accepted = rng.random() < p_accept
    table = table1 if accepted else table2
    readout = float(table.draw(np.asarray(rng.random())))
    if basis is Basis.X and noise.kind is NoiseKind.X0 and noise.width > 0.0:
        readout += noise.width * rng.standard_normal()
    return (Branch.PSA if accepted else Branch.PSR), readout


def sample_readouts(cfg: SystemConfig, count: int, basis: Basis, noise: NoiseSpec,
                    seed: int) -> tuple[np.ndarray, np.ndarray]:
    """Vectorized particle draws, split into (accepted, rejected) readout arrays."""
    rng = _trial_rng(seed, 0)
    p_accept, table1, table2 = _branch_samplers(cfg, basis, noise)
    accept = rng.random(count) < p_accept
    unit = rng.random(count)
    readouts = np.empty(count)
    readouts[accept] = table1.draw(unit[accept])
    readouts[~accept] = table2.draw(unit[~accept])
    if basis is Basis.X and noise.kind is NoiseKind.X0 and noise.width > 0.0:
        readouts += noise.width * rng.standard_normal(count)
    return readouts[accept], readouts[~accept]


def run_trial(cfg: SystemConfig, n_particles: int, basis: Basis = Basis.X,
              noise: NoiseSpec | None = None, beta: float = 1.0,
              seed: int | None = None,
              rng: np.random.Generator | None = None) -> TrialResult:
    """Simulate one N-particle experiment and form the difference estimate.

    The beta weights use the observed counts, exactly as an experimenter
    would compute them.  A trial is singular only when n1 equals beta * n2
    exactly; near-singular trials are kept and inflate the spread honestly.
    """
    if n_particles < 2:
        raise ValueError("a trial needs at least two particles")
    noise = noise if noise is not None else NoiseSpec.none(basis)
    if rng is None:
        rng = _trial_rng(0 if seed is None else seed, 0)
    p_accept, table1, table2 = _branch_samplers(cfg, basis, noise)
    accept = rng.random(n_particles) < p_accept
    unit = rng.random(n_particles)
    readouts = np.empty(n_particles)
    readouts[accept] = table1.draw(unit[accept])
    readouts[~accept] = table2.draw(unit[~accept])
    if basis is Basis.X and noise.kind is NoiseKind.X0 and noise.width > 0.0:
        readouts += noise.width * rng.standard_normal(n_particles)
    n1 = int(np.count_nonzero(accept))
    n2 = n_particles - n1
    y1 = float(readouts[accept].mean()) if n1 > 0 else math.nan
    y2 = float(readouts[~accept].mean()) if n2 > 0 else math.nan
    denom = n1 - beta * n2
    singular = abs(denom) <= 1e-12 * n_particles
    if singular:
        dcsv = math.nan
    else:
        term1 = (n1 / denom) * y1 if n1 > 0 else 0.0
        term2 = (beta * n2 / denom) * y2 if n2 > 0 else 0.0
        dcsv = term1 - term2
    return TrialResult(n1=n1, n2=n2, y1=y1, y2=y2, dcsv=dcsv, singular=singular)


def _thread_count() -> int:
    raw = os.environ.get("WVMETRO_THREADS", "")
    try:
        n = int(raw)
    except ValueError:
        n = 0
    return n if n > 0 else (os.cpu_count() or 1)


def run_ensemble(cfg: SystemConfig, n_particles: int, trials: int,
                 basis: Basis = Basis.X, noise: NoiseSpec | None = None,
                 beta: float = 1.0, master_seed: int = 0,
                 threads: int | None = None) -> EnsembleStats:
    """Run ``trials`` independent experiments and summarize the estimator.

    Statistics are taken over non-singular trials only; the singular
    fraction is reported.  Results are bitwise-reproducible for a fixed
    master seed regardless of the worker count.
    """
    if trials < 2:
        raise ValueError("an ensemble needs at least two trials")
    noise = noise if noise is not None else NoiseSpec.none(basis)
    _branch_samplers(cfg, basis, noise)  # build tables once, outside the pool

    def one(index: int) -> TrialResult:
        return run_trial(cfg, n_particles, basis, noise, beta,
                         rng=_trial_rng(master_seed, index))

    workers = threads if threads is not None else _thread_count()
    if workers > 1 and trials >= 16:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(one, range(trials)))
    else:
        results = [one(i) for i in range(trials)]

    values = np.array([t.dcsv for t in results if not t.singular])
    singular_fraction = 1.0 - values.size / trials
    if values.size < 2:
        raise AllTrialsSingular(
            f"{values.size} non-singular trials of {trials}; statistics undefined")
    mean = float(values.mean())
    var = float(values.var(ddof=1))
    snr = abs(mean) / math.sqrt(var) if var > 0.0 else math.inf
    eff = (mean / cfg.meter.d) ** 2 / var if var > 0.0 else math.inf
    return EnsembleStats(trials=trials, mean_dcsv=mean, var_dcsv=var,
                         empirical_snr=snr, empirical_eff_fi=eff,
                         singular_fraction=singular_fraction)


def trial_counts(cfg: SystemConfig, n_particles: int, trials: int,
                 basis: Basis = Basis.X, noise: NoiseSpec | None = None,
                 master_seed: int = 0) -> np.ndarray:
    """Accepted-branch counts per trial, for count-statistics checks."""
    noise = noise if noise is not None else NoiseSpec.none(basis)
    counts = np.empty(trials, dtype=np.int64)
    for i in range(trials):
        counts[i] = run_trial(cfg, n_particles, basis, noise,
                              rng=_trial_rng(master_seed, i)).n1
    return counts


def accepted_trial_means(cfg: SystemConfig, n_particles: int, trials: int,
                         basis: Basis = Basis.X, noise: NoiseSpec | None = None,
                         master_seed: int = 0, branch: Branch = Branch.PSA) -> np.ndarray:
    """Per-trial group mean of one branch (the single-branch estimator)."""
    noise = noise if noise is not None else NoiseSpec.none(basis)
    out = np.empty(trials)
    for i in range(trials):
        trial = run_trial(cfg, n_particles, basis, noise,
                          rng=_trial_rng(master_seed, i))
        out[i] = trial.y1 if branch is Branch.PSA else trial.y2
    return out


def conventional_trial_means(cfg: SystemConfig, n_particles: int, trials: int,
                             master_seed: int = 0,
                             noise: NoiseSpec | None = None) -> np.ndarray:
    """Per-trial mean position of unconditioned readouts."""
    from .densities import pdf_x

    noise = noise if noise is not None else NoiseSpec.none(Basis.X)
    pdf = noisy_pdf(cfg, Branch.CONVENTIONAL, Basis.X,
                    NoiseSpec.none(Basis.X) if noise.kind is NoiseKind.X0 else noise)
    table = build_sampler(pdf.xs, pdf.vals)
    out = np.empty(trials)
    for i in range(trials):
        rng = _trial_rng(master_seed, i)
        draws = table.draw(rng.random(n_particles))
        if noise.kind is NoiseKind.X0 and noise.width > 0.0:
            draws = draws + noise.width * rng.standard_normal(n_particles)
        out[i] = draws.mean()
    return out


def oracle_compare(cfg: SystemConfig, n_particles: int, trials: int,
                   basis: Basis = Basis.X, noise: NoiseSpec | None = None,
                   beta: float = 1.0, master_seed: int = 0,
                   threshold: float = Z_THRESHOLD) -> ComparisonReport:
    """Hold the closed-form estimator quantities against a Monte Carlo run.

    z-scores use the sampling error of each empirical statistic (delta
    method for SNR and effective FI); the report passes when every quantity
    sits within ``threshold`` standard errors.
    """
    noise = noise if noise is not None else NoiseSpec.none(basis)
    analytic = noisy_dcsv(cfg, n_particles, noise=noise, beta=beta, basis=basis)
    empirical = run_ensemble(cfg, n_particles, trials, basis, noise, beta, master_seed)

    m_valid = round(empirical.trials * (1.0 - empirical.singular_fraction))
    se_mean = math.sqrt(analytic.variance / m_valid)
    se_var = analytic.variance * math.sqrt(2.0 / (m_valid - 1))
    z_signal = abs(empirical.mean_dcsv - analytic.signal) / se_mean
    z_variance = abs(empirical.var_dcsv - analytic.variance) / se_var

    mean, var = analytic.signal, analytic.variance
    se_snr = math.sqrt(se_mean**2 / var + mean**2 * se_var**2 / (4.0 * var**3))
    z_snr = abs(empirical.empirical_snr - analytic.snr) / se_snr
    d = cfg.meter.d
    se_eff = math.sqrt((2.0 * mean / (d**2 * var)) ** 2 * se_mean**2
                       + (mean**2 / (d**2 * var**2)) ** 2 * se_var**2)
    z_eff = abs(empirical.empirical_eff_fi - analytic.eff_fi) / se_eff

    zs = (z_signal, z_variance, z_snr, z_eff)
    return ComparisonReport(analytic=analytic, empirical=empirical,
                            z_signal=z_signal, z_variance=z_variance,
                            z_snr=z_snr, z_eff_fi=z_eff,
                            threshold=threshold,
                            passed=bool(all(z < threshold for z in zs)))
