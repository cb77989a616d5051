"""Closed-form metrology quantities: conditional moments, difference-combined
estimators, signal-to-noise ratios, and Fisher-information diagnostics.

Every closed form here has an independent quadrature oracle in
``densities`` (and a Monte Carlo oracle in ``mc``); the test suite holds
them against each other.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .densities import (
    GridSpec,
    PdfGrid,
    difference_pdf,
    momentum_envelope_var,
    momentum_weight,
    pdf_x,
    position_density,
)
from .errors import DegenerateModification, SingularCombination
from .states import (
    Branch,
    Basis,
    SystemConfig,
    branch_amplitudes,
    branch_weight,
    selection_probabilities,
)

SINGULAR_FRACTION_TOL = 1e-9
MODIFICATION_TOL = 1e-12
FI_STEP_SCALE = 1e-5


class Scheme(Enum):
    """Estimation strategy: conventional, single-branch, or joint difference."""

    CM = "cm"
    WVA = "wva"
    JWM = "jwm"


@dataclass(frozen=True)
class ConditionalMoments:
    """First two moments of a readout conditioned on a branch outcome."""

    mean: float
    second_moment: float
    variance: float
    branch: Branch

    def __post_init__(self) -> None:
        if self.variance < -1e-12:
            raise ValueError("conditional variance must be non-negative")


@dataclass(frozen=True)
class DcsvEstimate:
    """Signal, spread, and derived quality figures of the difference estimator."""

    signal: float
    variance: float
    snr: float
    eff_fi: float
    beta1: float
    beta2: float
    n1: float
    n2: float


@dataclass(frozen=True)
class FisherReport:
    """Per-branch and combined Fisher information, plus the signed-density diagnostic.

    ``generalized_f`` evaluates the Cauchy-Schwarz bound integrand with
    |P(x)|, which is only meaningful when ``positive_definite`` is true.
    """

    f1: float
    f2: float
    f_tot: float
    f_cm: float
    generalized_f: float
    positive_definite: bool


def modification_factor(cfg: SystemConfig, branch: Branch) -> float:
    """Finite-strength correction M = 1 + G(|A_w|^2 - 1) written via branch weights."""
    c1, c2 = branch_amplitudes(cfg, branch)
    sel_norm = abs(c1 + c2) ** 2
    if sel_norm <= MODIFICATION_TOL:
        raise DegenerateModification("selection overlap vanished; factor undefined")
    return branch_weight(cfg, branch) / sel_norm


def conditional_moments_x(cfg: SystemConfig, branch: Branch) -> ConditionalMoments:
    """Exact position moments of a branch at arbitrary coupling strength.

    Equivalent to the weak-value forms mean = d Re(A_w)/M and
    <x^2> = sigma^2 + d^2 (1+|A_w|^2)/(2M) wherever the weak value exists,
    but stays finite when the selection overlap vanishes.
    """
    m = cfg.meter
    c1, c2 = branch_amplitudes(cfg, branch)
    weight = branch_weight(cfg, branch)
    if weight <= MODIFICATION_TOL:
        raise DegenerateModification("empty branch: conditional moments undefined")
    pops = abs(c1) ** 2 + abs(c2) ** 2
    mean = m.d * (abs(c1) ** 2 - abs(c2) ** 2) / weight
    second = m.sigma**2 + m.d**2 * pops / weight
    return ConditionalMoments(mean=mean, second_moment=second,
                              variance=second - mean**2, branch=branch)


def conditional_mean_x(cfg: SystemConfig, branch: Branch) -> float:
    """Branch-conditioned position mean d Re(A_w) / M."""
    return conditional_moments_x(cfg, branch).mean


def conditional_variance_x(cfg: SystemConfig, branch: Branch) -> float:
    """Branch-conditioned position variance at arbitrary coupling strength."""
    return conditional_moments_x(cfg, branch).variance


def conditional_moments_p(cfg: SystemConfig, branch: Branch,
                          envelope_var: float | None = None) -> ConditionalMoments:
    """Exact momentum moments of a branch.

    ``envelope_var`` is the variance of the momentum envelope; the noiseless
    value is 1/(4 sigma^2) and momentum jitter adds to it.
    """
    d = cfg.meter.d
    var = envelope_var if envelope_var is not None else momentum_envelope_var(cfg)
    c1, c2 = branch_amplitudes(cfg, branch)
    weight = momentum_weight(c1, c2, d, var)
    if weight <= MODIFICATION_TOL:
        raise DegenerateModification("empty branch: conditional moments undefined")
    cross = c1 * c2.conjugate()
    damping = math.exp(-2.0 * d**2 * var)
    pops = abs(c1) ** 2 + abs(c2) ** 2
    mean = 2.0 * cross.imag * (2.0 * d * var) * damping / weight
    second = (pops * var + 2.0 * cross.real * damping * (var - 4.0 * d**2 * var**2)) / weight
    return ConditionalMoments(mean=mean, second_moment=second,
                              variance=second - mean**2, branch=branch)


def quadrature_moments(pdf: PdfGrid, branch: Branch) -> ConditionalMoments:
    """Trapezoid-rule moments of a tabulated density (independent oracle)."""
    mean = pdf.mean()
    second = pdf.second_moment()
    return ConditionalMoments(mean=mean, second_moment=second,
                              variance=second - mean**2, branch=branch)


def expected_partition(cfg: SystemConfig, n_total: int,
                       probabilities: tuple[float, float] | None = None,
                       rounded: bool = True) -> tuple[float, float]:
    """Expected (N1, N2) split of ``n_total`` particles over the two branches.

    ``rounded`` mimics an integer-count experiment; the exact split keeps
    analytic curves free of count quantization.
    """
    p1, p2 = probabilities if probabilities is not None else selection_probabilities(cfg)
    if rounded:
        n1 = float(round(n_total * p1))
        return n1, float(n_total) - n1
    return n_total * p1, n_total * p2


def dcsv_combine(m1: ConditionalMoments, m2: ConditionalMoments,
                 n1: float, n2: float, beta: float, d: float) -> DcsvEstimate:
    """Combine branch moments into the difference estimator.

    The weights are beta1 = n1/(n1 - beta n2) and beta2 = beta n2/(n1 - beta n2);
    the sign of the denominator is preserved.  Group sizes may be expected
    (real-valued) counts; raises ``SingularCombination`` when the weighted
    counts cancel.
    """
    if n1 < 0.0 or n2 < 0.0 or (n1 == 0.0 and n2 == 0.0):
        raise ValueError("group sizes must be non-negative and not both zero")
    denom = n1 - beta * n2
    if abs(denom) / (n1 + n2) <= SINGULAR_FRACTION_TOL:
        raise SingularCombination(
            f"|n1 - beta n2| / (n1 + n2) = {abs(denom) / (n1 + n2):.3e} below guard"
        )
    beta1 = n1 / denom
    beta2 = beta * n2 / denom
    signal = beta1 * m1.mean - beta2 * m2.mean
    variance = 0.0
    if n1 > 0.0:
        variance += beta1**2 * m1.variance / n1
    if n2 > 0.0:
        variance += beta2**2 * m2.variance / n2
    snr = abs(signal) / math.sqrt(variance) if variance > 0.0 else math.inf
    eff = (signal / d) ** 2 / variance if variance > 0.0 else math.inf
    return DcsvEstimate(signal=signal, variance=variance, snr=snr, eff_fi=eff,
                        beta1=beta1, beta2=beta2, n1=n1, n2=n2)


def dcsv_balanced_limit(m1: ConditionalMoments, m2: ConditionalMoments,
                        n1: float, n2: float, d: float) -> tuple[float, float]:
    """(snr, eff_fi) limit of the combination as beta -> n1/n2.

    Signal and variance diverge together at the balance point; their ratio
    stays finite: snr -> |m1 - m2| / sqrt(v1/n1 + v2/n2).
    """
    spread = m1.variance / n1 + m2.variance / n2
    snr = abs(m1.mean - m2.mean) / math.sqrt(spread)
    return snr, snr**2 / d**2


def analytic_dcsv(cfg: SystemConfig, n_total: int,
                  partition: tuple[float, float] | None = None,
                  beta: float = 1.0, basis: Basis = Basis.X) -> DcsvEstimate:
    """Difference estimator from closed-form moments with an expected partition."""
    if partition is None:
        partition = expected_partition(cfg, n_total, rounded=False)
    if basis is Basis.X:
        m1 = conditional_moments_x(cfg, Branch.PSA)
        m2 = conditional_moments_x(cfg, Branch.PSR)
    else:
        m1 = conditional_moments_p(cfg, Branch.PSA)
        m2 = conditional_moments_p(cfg, Branch.PSR)
    return dcsv_combine(m1, m2, partition[0], partition[1], beta, cfg.meter.d)


def snr_cm(cfg: SystemConfig, n_total: int) -> float:
    """Conventional-measurement reference sqrt(N) d / sigma."""
    return math.sqrt(n_total) * cfg.meter.d / cfg.meter.sigma


def fi_cm(cfg: SystemConfig, n_total: int) -> float:
    """Conventional-measurement Fisher information N / sigma^2."""
    return n_total / cfg.meter.sigma**2


def snr(scheme: Scheme, cfg: SystemConfig, n_total: int,
        partition: tuple[float, float] | None = None, beta: float = 1.0,
        basis: Basis = Basis.X) -> float:
    """Signal-to-noise ratio of the chosen scheme for an N-particle experiment."""
    if scheme is Scheme.CM:
        if basis is not Basis.X:
            raise ValueError("the unconditioned momentum mean carries no signal")
        return snr_cm(cfg, n_total)
    if partition is None:
        partition = expected_partition(cfg, n_total, rounded=False)
    if scheme is Scheme.WVA:
        moments = (conditional_moments_x(cfg, Branch.PSA) if basis is Basis.X
                   else conditional_moments_p(cfg, Branch.PSA))
        return math.sqrt(partition[0]) * abs(moments.mean) / math.sqrt(moments.variance)
    return analytic_dcsv(cfg, n_total, partition, beta, basis).snr


def effective_fi(cfg: SystemConfig, n_total: int,
                 partition: tuple[float, float] | None = None,
                 beta: float = 1.0, basis: Basis = Basis.X) -> float:
    """(E[x_hat]/d)^2 / D[x_hat]: the precision actually delivered by the estimator."""
    return analytic_dcsv(cfg, n_total, partition, beta, basis).eff_fi


def _normalized_position_density(cfg: SystemConfig, branch: Branch, d_value: float,
                                 xs: np.ndarray) -> np.ndarray:
    """Branch density re-evaluated at a shifted parameter with the width held fixed."""
    sigma = cfg.meter.sigma
    if branch is Branch.CONVENTIONAL:
        w1, w2 = abs(cfg.pre.a1) ** 2, abs(cfg.pre.a2) ** 2
        return w1 * position_density(1.0, 0.0, d_value, sigma, xs) \
            + w2 * position_density(0.0, 1.0, d_value, sigma, xs)
    c1, c2 = branch_amplitudes(cfg, branch)
    unnorm = position_density(c1, c2, d_value, sigma, xs)
    cross = 2.0 * (c1.conjugate() * c2).real * math.exp(-(d_value**2) / (2.0 * sigma**2))
    weight = abs(c1) ** 2 + abs(c2) ** 2 + cross
    return unnorm / weight


def _parameter_derivative(density_at, d0: float, h: float) -> np.ndarray:
    """Central difference in the shift parameter with one Richardson refinement."""
    coarse = (density_at(d0 + h) - density_at(d0 - h)) / (2.0 * h)
    fine = (density_at(d0 + h / 2.0) - density_at(d0 - h / 2.0)) / h
    return (4.0 * fine - coarse) / 3.0


def _unnormalized_position_density(cfg: SystemConfig, branch: Branch, d_value: float,
                                   xs: np.ndarray) -> np.ndarray:
    """Branch density carrying its selection weight, at a shifted parameter."""
    if branch is Branch.CONVENTIONAL:
        return _normalized_position_density(cfg, branch, d_value, xs)
    c1, c2 = branch_amplitudes(cfg, branch)
    return position_density(c1, c2, d_value, cfg.meter.sigma, xs)


def fisher_information(cfg: SystemConfig, branch: Branch,
                       grid: GridSpec | None = None,
                       step_scale: float = FI_STEP_SCALE,
                       include_selection: bool = True) -> float:
    """Per-particle Fisher information of a branch's readout record.

    With ``include_selection`` (the default) the branch density keeps its
    selection weight, so the information carried by the parameter
    dependence of the acceptance probability is counted:
    F_b = F_conditional + (d ln p_b / d shift)^2.  Weighting these by the
    branch counts reproduces the full information of the labeled data.
    With the flag off only the normalized conditional shape contributes.

    The derivative is taken in the pointer shift with the wavepacket width
    held fixed, using a Richardson-refined central difference of relative
    step ``step_scale``.
    """
    if grid is None:
        grid = GridSpec.for_x(cfg)
    xs = grid.points()
    d0 = cfg.meter.d
    h = step_scale * cfg.meter.sigma
    if include_selection:
        density_at = lambda dv: _unnormalized_position_density(cfg, branch, dv, xs)
        weight = 1.0 if branch is Branch.CONVENTIONAL else branch_weight(cfg, branch)
    else:
        density_at = lambda dv: _normalized_position_density(cfg, branch, dv, xs)
        weight = 1.0
    deriv = _parameter_derivative(density_at, d0, h)
    base = density_at(d0)
    integrand = deriv**2 / np.clip(base, 1e-300, None)
    return float(np.trapezoid(integrand, xs)) / weight


def fisher_report(cfg: SystemConfig, n_total: int,
                  partition: tuple[float, float] | None = None,
                  beta: float = 1.0, grid: GridSpec | None = None) -> FisherReport:
    """Branch and combined Fisher information plus the signed-density diagnostic.

    ``generalized_f`` is computed on the difference density with |P(x)| in
    the denominator; when the combination is singular it is reported as NaN
    with ``positive_definite`` left true.
    """
    if grid is None:
        grid = GridSpec.for_x(cfg)
    if partition is None:
        partition = expected_partition(cfg, n_total, rounded=True)
    f1 = fisher_information(cfg, Branch.PSA, grid)
    f2 = fisher_information(cfg, Branch.PSR, grid)
    f_tot = partition[0] * f1 + partition[1] * f2
    f_cm = 1.0 / cfg.meter.sigma**2
    xs = grid.points()
    d0 = cfg.meter.d
    h = FI_STEP_SCALE * cfg.meter.sigma
    try:
        base = difference_pdf(cfg, beta, grid).vals

        def signed_at(dv: float) -> np.ndarray:
            shifted = SystemConfig(cfg.pre, cfg.post,
                                   type(cfg.meter)(d=dv, g=(dv / (2.0 * cfg.meter.sigma))**2))
            return difference_pdf(shifted, beta, grid).vals

        deriv = _parameter_derivative(signed_at, d0, h)
        floor = 1e-12 * float(np.max(np.abs(base)))
        gen_f = float(np.trapezoid(deriv**2 / np.clip(np.abs(base), floor, None), xs))
        positive = bool(np.min(base) >= -1e-12)
    except SingularCombination:
        gen_f = math.nan
        positive = True
    return FisherReport(f1=f1, f2=f2, f_tot=f_tot, f_cm=f_cm,
                        generalized_f=gen_f, positive_definite=positive)
