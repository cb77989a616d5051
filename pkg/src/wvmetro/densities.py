"""Tabulated readout densities and quadrature moment helpers.

All densities are returned on explicit grids so that quadrature results can
serve as an independent oracle for every closed-form moment elsewhere in the
package.  Branch densities are normalized to one; the signed difference
density is normalized to one as well but may take negative values.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import GridTooNarrow, SingularCombination
from .states import Branch, SystemConfig, branch_amplitudes, branch_weight

DEFAULT_GRID_POINTS = 4096
TAIL_MASS_BUDGET = 1e-9
SINGULAR_WEIGHT_TOL = 1e-9


@dataclass(frozen=True, eq=False)
class GridSpec:
    """Uniform evaluation grid [lo, hi] with ``n`` points."""

    lo: float
    hi: float
    n: int = DEFAULT_GRID_POINTS

    def __post_init__(self) -> None:
        if not (self.hi > self.lo):
            raise ValueError("grid upper edge must exceed lower edge")
        if self.n < 16:
            raise ValueError("grid needs at least 16 points")

    def points(self) -> np.ndarray:
        return np.linspace(self.lo, self.hi, self.n)

    @classmethod
    def for_x(cls, cfg: SystemConfig, n: int = DEFAULT_GRID_POINTS,
              extra_width: float = 0.0) -> "GridSpec":
        """Default position grid: +-(d + 10 * effective width)."""
        m = cfg.meter
        width = math.hypot(m.sigma, extra_width)
        half = m.d + 10.0 * width
        return cls(-half, half, n)

    @classmethod
    def for_p(cls, cfg: SystemConfig, n: int = DEFAULT_GRID_POINTS,
              envelope_var: float | None = None) -> "GridSpec":
        """Default momentum grid: +-10 envelope standard deviations."""
        var = envelope_var if envelope_var is not None else momentum_envelope_var(cfg)
        half = 10.0 * math.sqrt(var)
        return cls(-half, half, n)


@dataclass(frozen=True, eq=False)
class PdfGrid:
    """Density values on a strictly increasing grid.

    ``vals`` may be signed (difference densities); the trapezoid integral
    equals ``normalization``.
    """

    xs: np.ndarray
    vals: np.ndarray
    normalization: float = 1.0

    def integral(self) -> float:
        return float(np.trapezoid(self.vals, self.xs))

    def mean(self) -> float:
        return float(np.trapezoid(self.xs * self.vals, self.xs)) / self.normalization

    def second_moment(self) -> float:
        return float(np.trapezoid(self.xs**2 * self.vals, self.xs)) / self.normalization

    def variance(self) -> float:
        return self.second_moment() - self.mean() ** 2


def momentum_envelope_var(cfg: SystemConfig) -> float:
    """Variance 1/(4 sigma^2) of the momentum envelope of the meter packet."""
    return 1.0 / (4.0 * cfg.meter.sigma**2)


def _gauss(xs: np.ndarray, mu: float, var: float) -> np.ndarray:
    return np.exp(-((xs - mu) ** 2) / (2.0 * var)) / math.sqrt(2.0 * math.pi * var)


def _gauss_tail(lo: float, hi: float, mu: float, var: float) -> float:
    sd = math.sqrt(var)
    upper = 0.5 * math.erfc((hi - mu) / (sd * math.sqrt(2.0)))
    lower = 0.5 * math.erfc((mu - lo) / (sd * math.sqrt(2.0)))
    return upper + lower


def _check_tails(components: list[tuple[float, float, float]], grid: GridSpec,
                 norm: float) -> None:
    """Bound the absolute mass outside [lo, hi] by a sum of Gaussian tails."""
    tail = sum(abs(w) * _gauss_tail(grid.lo, grid.hi, mu, var)
               for w, mu, var in components)
    if tail / norm > TAIL_MASS_BUDGET:
        raise GridTooNarrow(
            f"tail mass {tail / norm:.3e} outside [{grid.lo:g}, {grid.hi:g}] "
            f"exceeds budget {TAIL_MASS_BUDGET:.0e}"
        )


def _position_components(c1: complex, c2: complex, d: float,
                         sigma: float) -> list[tuple[float, float, float]]:
    """(weight, center, variance) triples of the unnormalized branch density."""
    var = sigma**2
    cross = 2.0 * (c1.conjugate() * c2).real * math.exp(-(d**2) / (2.0 * var))
    return [
        (abs(c1) ** 2, +d, var),
        (abs(c2) ** 2, -d, var),
        (cross, 0.0, var),
    ]


def position_density(c1: complex, c2: complex, d: float, sigma: float,
                     xs: np.ndarray) -> np.ndarray:
    """Unnormalized position density |c1 Phi_+(x) + c2 Phi_-(x)|^2."""
    out = np.zeros_like(xs)
    for w, mu, var in _position_components(c1, c2, d, sigma):
        if w != 0.0:
            out += w * _gauss(xs, mu, var)
    return out


def momentum_density(c1: complex, c2: complex, d: float, envelope_var: float,
                     xs: np.ndarray) -> np.ndarray:
    """Unnormalized momentum density: Gaussian envelope times interference factor."""
    cross = c1 * c2.conjugate()
    interference = (
        abs(c1) ** 2 + abs(c2) ** 2
        + 2.0 * (cross.real * np.cos(2.0 * d * xs) + cross.imag * np.sin(2.0 * d * xs))
    )
    return _gauss(xs, 0.0, envelope_var) * interference


def momentum_weight(c1: complex, c2: complex, d: float, envelope_var: float) -> float:
    """Integral of the unnormalized momentum density."""
    damping = math.exp(-2.0 * d**2 * envelope_var)
    return abs(c1) ** 2 + abs(c2) ** 2 + 2.0 * (c1 * c2.conjugate()).real * damping


def pdf_x(cfg: SystemConfig, branch: Branch, grid: GridSpec | None = None) -> PdfGrid:
    """Normalized position readout density for a branch (or the unconditioned mixture).

    Raises ``GridTooNarrow`` if the supplied grid leaves more than 1e-9 of
    absolute mass outside its range.
    """
    if grid is None:
        grid = GridSpec.for_x(cfg)
    m = cfg.meter
    xs = grid.points()
    if branch is Branch.CONVENTIONAL:
        w1, w2 = abs(cfg.pre.a1) ** 2, abs(cfg.pre.a2) ** 2
        comps = [(w1, +m.d, m.sigma**2), (w2, -m.d, m.sigma**2)]
        _check_tails(comps, grid, 1.0)
        vals = w1 * _gauss(xs, +m.d, m.sigma**2) + w2 * _gauss(xs, -m.d, m.sigma**2)
        return PdfGrid(xs=xs, vals=vals, normalization=1.0)
    c1, c2 = branch_amplitudes(cfg, branch)
    weight = branch_weight(cfg, branch)
    _check_tails(_position_components(c1, c2, m.d, m.sigma), grid, weight)
    vals = position_density(c1, c2, m.d, m.sigma, xs) / weight
    return PdfGrid(xs=xs, vals=vals, normalization=1.0)


def pdf_p(cfg: SystemConfig, branch: Branch, grid: GridSpec | None = None,
          envelope_var: float | None = None) -> PdfGrid:
    """Normalized momentum readout density for a branch.

    ``envelope_var`` widens the Gaussian envelope beyond the noiseless
    1/(4 sigma^2); the noise models use this to fold in momentum jitter.
    """
    if branch is Branch.CONVENTIONAL:
        raise ValueError("momentum readout requires post-selection")
    var = envelope_var if envelope_var is not None else momentum_envelope_var(cfg)
    if grid is None:
        grid = GridSpec.for_p(cfg, envelope_var=var)
    c1, c2 = branch_amplitudes(cfg, branch)
    weight = momentum_weight(c1, c2, cfg.meter.d, var)
    bound = (abs(c1) + abs(c2)) ** 2
    _check_tails([(bound, 0.0, var)], grid, weight)
    xs = grid.points()
    vals = momentum_density(c1, c2, cfg.meter.d, var, xs) / weight
    return PdfGrid(xs=xs, vals=vals, normalization=1.0)


def difference_pdf(cfg: SystemConfig, beta: float = 1.0,
                   grid: GridSpec | None = None) -> PdfGrid:
    """Signed, normalized difference of the accepted and rejected densities.

    The combination (p_f P1 - beta p_fbar P2) / (p_f - beta p_fbar) diverges
    when the weights cancel; ``SingularCombination`` is raised instead of
    returning infinities.
    """
    if grid is None:
        grid = GridSpec.for_x(cfg)
    p1 = branch_weight(cfg, Branch.PSA)
    p2 = branch_weight(cfg, Branch.PSR)
    denom = p1 - beta * p2
    if abs(denom) <= SINGULAR_WEIGHT_TOL:
        raise SingularCombination(
            f"|p_f - beta p_fbar| = {abs(denom):.3e} is below {SINGULAR_WEIGHT_TOL:.0e}"
        )
    m = cfg.meter
    ca = branch_amplitudes(cfg, Branch.PSA)
    cb = branch_amplitudes(cfg, Branch.PSR)
    comps = _position_components(*ca, m.d, m.sigma) + [
        (-beta * w, mu, var) for w, mu, var in _position_components(*cb, m.d, m.sigma)
    ]
    _check_tails(comps, grid, abs(denom))
    xs = grid.points()
    vals = (
        position_density(*ca, m.d, m.sigma, xs)
        - beta * position_density(*cb, m.d, m.sigma, xs)
    ) / denom
    return PdfGrid(xs=xs, vals=vals, normalization=1.0)
