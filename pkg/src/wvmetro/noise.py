"""Technical-noise models for position and momentum readouts.

Three scenarios are covered: a random position offset of the readout
(x-basis), the same offset seen from the momentum basis (where it drops out
as a pure phase), and a random momentum offset of the wavepacket envelope
(which both broadens and, below a critical strength, amplifies the momentum
signal).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np
from scipy import optimize

from .densities import GridSpec, PdfGrid, momentum_envelope_var, pdf_p, pdf_x, _gauss
from .estimators import (
    ConditionalMoments,
    DcsvEstimate,
    analytic_dcsv,
    conditional_moments_p,
    conditional_moments_x,
    dcsv_combine,
    expected_partition,
)
from .states import Basis, Branch, SystemConfig, branch_amplitudes, selection_probabilities


class NoiseKind(Enum):
    NONE = "none"
    X0 = "x0"
    P0 = "p0"


@dataclass(frozen=True)
class NoiseSpec:
    """Gaussian technical noise: kind, readout basis, and distribution width.

    Width units follow the basis: length for X0, inverse length for P0.
    Width zero reproduces the noiseless model exactly; P0 is only defined
    for momentum readout.
    """

    kind: NoiseKind = NoiseKind.NONE
    basis: Basis = Basis.X
    width: float = 0.0

    def __post_init__(self) -> None:
        if self.width < 0.0 or not math.isfinite(self.width):
            raise ValueError("noise width must be finite and non-negative")
        if self.kind is NoiseKind.P0 and self.basis is not Basis.P:
            raise ValueError("momentum-offset noise applies to momentum readout only")

    @classmethod
    def none(cls, basis: Basis = Basis.X) -> "NoiseSpec":
        return cls(NoiseKind.NONE, basis, 0.0)

    @classmethod
    def x0(cls, width: float, basis: Basis = Basis.X) -> "NoiseSpec":
        return cls(NoiseKind.X0, basis, width)

    @classmethod
    def p0(cls, width: float) -> "NoiseSpec":
        return cls(NoiseKind.P0, Basis.P, width)


NoisyMoments = ConditionalMoments


def broadened_envelope_var(cfg: SystemConfig, jp: float) -> float:
    """Effective momentum envelope variance 1/(4 sigma^2) + Jp^2."""
    return momentum_envelope_var(cfg) + jp**2


def noisy_moments_x(cfg: SystemConfig, branch: Branch, j: float) -> ConditionalMoments:
    """Position moments with a Gaussian readout offset of width ``j``.

    The offset leaves the mean untouched and adds j^2 to the second moment
    and the variance.
    """
    base = conditional_moments_x(cfg, branch)
    return ConditionalMoments(mean=base.mean,
                              second_moment=base.second_moment + j**2,
                              variance=base.variance + j**2,
                              branch=branch)


def noisy_moments_p_x0(cfg: SystemConfig, branch: Branch, j: float) -> ConditionalMoments:
    """Momentum moments under a position offset: identical for every ``j``.

    The offset enters the momentum wavefunction as a pure phase, so the
    momentum statistics are exactly those of the noiseless model.
    """
    del j
    return conditional_moments_p(cfg, branch)


def noisy_moments_p_p0(cfg: SystemConfig, branch: Branch, jp: float) -> ConditionalMoments:
    """Momentum moments under a Gaussian momentum offset of width ``jp``."""
    return conditional_moments_p(cfg, branch, envelope_var=broadened_envelope_var(cfg, jp))


def branch_moments(cfg: SystemConfig, branch: Branch, basis: Basis,
                   noise: NoiseSpec | None = None) -> ConditionalMoments:
    """Conditional readout moments for any basis/noise combination."""
    noise = noise if noise is not None else NoiseSpec.none(basis)
    if noise.basis is not basis:
        raise ValueError("noise basis does not match the readout basis")
    if basis is Basis.X:
        if noise.kind is NoiseKind.X0:
            return noisy_moments_x(cfg, branch, noise.width)
        return conditional_moments_x(cfg, branch)
    if noise.kind is NoiseKind.P0:
        return noisy_moments_p_p0(cfg, branch, noise.width)
    return conditional_moments_p(cfg, branch)


def noisy_selection_probabilities(cfg: SystemConfig,
                                  noise: NoiseSpec | None = None) -> tuple[float, float]:
    """Branch probabilities including the noise back-action on post-selection.

    Position offsets never move the branch split.  A momentum offset
    recenters the envelope before the coupling, which does shift the split:
    the packet overlap e^{-2g} is replaced by e^{-2 d^2 (1/(4 sigma^2)+Jp^2)}.
    """
    if noise is None or noise.kind is not NoiseKind.P0 or noise.width == 0.0:
        return selection_probabilities(cfg)
    var = broadened_envelope_var(cfg, noise.width)
    damping = math.exp(-2.0 * cfg.meter.d**2 * var)
    probs = []
    for branch in (Branch.PSA, Branch.PSR):
        c1, c2 = branch_amplitudes(cfg, branch)
        probs.append(abs(c1) ** 2 + abs(c2) ** 2
                     + 2.0 * (c1.conjugate() * c2).real * damping)
    return probs[0], probs[1]


def noisy_pdf(cfg: SystemConfig, branch: Branch, basis: Basis,
              noise: NoiseSpec | None = None, grid: GridSpec | None = None) -> PdfGrid:
    """Normalized readout density under the given noise model.

    X-basis offsets convolve each Gaussian component with the noise kernel;
    momentum offsets broaden the envelope while leaving the interference
    factor untouched; position offsets seen from the momentum basis change
    nothing.
    """
    noise = noise if noise is not None else NoiseSpec.none(basis)
    if noise.basis is not basis:
        raise ValueError("noise basis does not match the readout basis")
    if basis is Basis.P:
        var = (broadened_envelope_var(cfg, noise.width)
               if noise.kind is NoiseKind.P0 else None)
        return pdf_p(cfg, branch, grid=grid, envelope_var=var)
    if noise.kind is not NoiseKind.X0 or noise.width == 0.0:
        return pdf_x(cfg, branch, grid=grid)
    return _convolved_pdf_x(cfg, branch, noise.width, grid)


def _convolved_pdf_x(cfg: SystemConfig, branch: Branch, j: float,
                     grid: GridSpec | None) -> PdfGrid:
    """Closed-form convolution of the branch density with a Gaussian of width j."""
    if grid is None:
        grid = GridSpec.for_x(cfg, extra_width=j)
    m = cfg.meter
    xs = grid.points()
    wide = m.sigma**2 + j**2
    if branch is Branch.CONVENTIONAL:
        w1, w2 = abs(cfg.pre.a1) ** 2, abs(cfg.pre.a2) ** 2
        vals = w1 * _gauss(xs, +m.d, wide) + w2 * _gauss(xs, -m.d, wide)
        return PdfGrid(xs=xs, vals=vals, normalization=1.0)
    c1, c2 = branch_amplitudes(cfg, branch)
    cross = 2.0 * (c1.conjugate() * c2).real * m.packet_overlap
    weight = abs(c1) ** 2 + abs(c2) ** 2 + cross
    vals = (abs(c1) ** 2 * _gauss(xs, +m.d, wide)
            + abs(c2) ** 2 * _gauss(xs, -m.d, wide)
            + cross * _gauss(xs, 0.0, wide)) / weight
    return PdfGrid(xs=xs, vals=vals, normalization=1.0)


def noisy_dcsv(cfg: SystemConfig, n_total: int,
               partition: tuple[float, float] | None = None,
               noise: NoiseSpec | None = None, beta: float = 1.0,
               basis: Basis = Basis.X) -> DcsvEstimate:
    """Difference estimator from noisy branch moments with an expected partition."""
    noise = noise if noise is not None else NoiseSpec.none(basis)
    if noise.kind is NoiseKind.NONE:
        return analytic_dcsv(cfg, n_total, partition, beta, basis)
    if partition is None:
        probs = noisy_selection_probabilities(cfg, noise)
        partition = expected_partition(cfg, n_total, probabilities=probs, rounded=False)
    m1 = branch_moments(cfg, Branch.PSA, basis, noise)
    m2 = branch_moments(cfg, Branch.PSR, basis, noise)
    return dcsv_combine(m1, m2, partition[0], partition[1], beta, cfg.meter.d)


def noisy_snr_jwm(cfg: SystemConfig, n_total: int,
                  partition: tuple[float, float] | None = None,
                  noise: NoiseSpec | None = None, beta: float = 1.0,
                  basis: Basis = Basis.X) -> float:
    """Joint-scheme SNR with technical noise folded into the branch moments."""
    return noisy_dcsv(cfg, n_total, partition, noise, beta, basis).snr


def find_critical_jp(cfg: SystemConfig, n_total: int = 10_000, beta: float = 1.0,
                     jp_hi: float = 1.5, n_scan: int = 96) -> tuple[float, float]:
    """Locate the noise strength that maximizes the momentum-readout SNR.

    A coarse scan brackets the maximum and a golden-section refinement pins
    it down; there is no closed form for the critical strength.
    Returns (jp_star, snr_at_maximum).
    """

    def snr_at(jp: float) -> float:
        spec = NoiseSpec.p0(jp) if jp > 0.0 else NoiseSpec.none(Basis.P)
        return noisy_snr_jwm(cfg, n_total, noise=spec, beta=beta, basis=Basis.P)

    jps = np.linspace(0.0, jp_hi, n_scan)
    values = np.array([snr_at(float(jp)) for jp in jps])
    k = int(np.argmax(values))
    if k == 0 or k == n_scan - 1:
        return float(jps[k]), float(values[k])
    bracket = (float(jps[k - 1]), float(jps[k]), float(jps[k + 1]))
    result = optimize.minimize_scalar(lambda jp: -snr_at(jp), bracket=bracket,
                                      method="golden", options={"xtol": 1e-10})
    return float(result.x), float(-result.fun)
