"""Two-state system, Gaussian meter geometry, and post-selection statistics.

Conventions: the observable is fixed to the sigma_z eigenbasis {|1>, |2>}
with eigenvalues +1 and -1, and the meter wavepacket acquires a shift of
+d (resp. -d) on the |1> (resp. |2>) component.  The coupling strength is
parameterized by the dimensionless g = (d / 2 sigma)^2.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from enum import Enum

from .errors import OrthogonalPostSelection

ORTHOGONALITY_TOL = 1e-14


class Branch(Enum):
    """Readout class: accepted (PSA), rejected (PSR), or no post-selection."""

    PSA = "psa"
    PSR = "psr"
    CONVENTIONAL = "conventional"


class Basis(Enum):
    """Meter readout basis: pointer position (x) or its conjugate momentum (p)."""

    X = "x"
    P = "p"


@dataclass(frozen=True)
class SpinState:
    """Normalized amplitude pair on the measurement eigenbasis.

    Construction normalizes the amplitudes and records the factor that was
    divided out in ``applied_norm``.  Non-finite or all-zero inputs are
    rejected.
    """

    a1: complex
    a2: complex
    applied_norm: float = field(init=False, compare=False, repr=False, default=1.0)

    def __post_init__(self) -> None:
        a1, a2 = complex(self.a1), complex(self.a2)
        if not (cmath.isfinite(a1) and cmath.isfinite(a2)):
            raise ValueError("state amplitudes must be finite")
        norm = math.sqrt(abs(a1) ** 2 + abs(a2) ** 2)
        if norm == 0.0:
            raise ValueError("state amplitudes cannot both vanish")
        object.__setattr__(self, "a1", a1 / norm)
        object.__setattr__(self, "a2", a2 / norm)
        object.__setattr__(self, "applied_norm", norm)

    @classmethod
    def equal_superposition(cls) -> "SpinState":
        """(|1> + |2>) / sqrt(2), the standard symmetric input state."""
        return cls(1.0, 1.0)

    @classmethod
    def polar(cls, theta: float) -> "SpinState":
        """Real rotation cos(theta/2)|1> + sin(theta/2)|2>."""
        return cls(math.cos(theta / 2.0), math.sin(theta / 2.0))

    @classmethod
    def relative_phase(cls, phi: float) -> "SpinState":
        """Equal-weight state (|1> + e^{-i phi}|2>)/sqrt(2)."""
        return cls(1.0, cmath.exp(-1j * phi))


def overlap(bra: SpinState, ket: SpinState) -> complex:
    """Inner product <bra|ket>."""
    return bra.a1.conjugate() * ket.a1 + bra.a2.conjugate() * ket.a2


def complement(post: SpinState) -> SpinState:
    """State orthogonal to ``post``, phase-fixed so its first nonzero amplitude is real >= 0."""
    raw1 = post.a2.conjugate()
    raw2 = -post.a1.conjugate()
    pivot = raw1 if abs(raw1) > 1e-15 else raw2
    phase = pivot.conjugate() / abs(pivot)
    return SpinState(raw1 * phase, raw2 * phase)


def weak_value(pre: SpinState, post: SpinState) -> complex:
    """Weak value of sigma_z between ``pre`` and ``post``.

    Raises ``OrthogonalPostSelection`` when |<post|pre>| <= 1e-14, where the
    ratio is undefined.
    """
    denom = overlap(post, pre)
    if abs(denom) <= ORTHOGONALITY_TOL:
        raise OrthogonalPostSelection(
            f"|<post|pre>| = {abs(denom):.3e} is below {ORTHOGONALITY_TOL:.0e}"
        )
    numer = post.a1.conjugate() * pre.a1 - post.a2.conjugate() * pre.a2
    return numer / denom


@dataclass(frozen=True)
class MeterConfig:
    """Pointer shift ``d`` (the estimated parameter) and coupling strength ``g``.

    The wavepacket width follows from sigma = d / (2 sqrt(g)); the overlap
    of the two shifted packets is exp(-2 g).
    """

    d: float = 1.0
    g: float = 0.01

    def __post_init__(self) -> None:
        if not (math.isfinite(self.d) and self.d > 0.0):
            raise ValueError("pointer shift d must be positive and finite")
        if not (math.isfinite(self.g) and self.g >= 0.0):
            raise ValueError("measurement strength g must be non-negative and finite")

    @property
    def sigma(self) -> float:
        """Wavepacket width in position; infinite in the zero-coupling limit."""
        if self.g == 0.0:
            return math.inf
        return self.d / (2.0 * math.sqrt(self.g))

    @property
    def packet_overlap(self) -> float:
        """Overlap <Phi_1|Phi_2> = exp(-2g) of the shifted wavepackets."""
        return math.exp(-2.0 * self.g)


@dataclass(frozen=True)
class SystemConfig:
    """Pre-selection, post-selection, and meter for one experiment."""

    pre: SpinState
    post: SpinState
    meter: MeterConfig

    @property
    def rejected(self) -> SpinState:
        """The post-selection complement used for the rejected branch."""
        return complement(self.post)


def real_weak_value_config(theta: float, g: float, d: float = 1.0) -> SystemConfig:
    """Symmetric input with real rotated post-selection: purely real weak values."""
    return SystemConfig(
        pre=SpinState.equal_superposition(),
        post=SpinState.polar(theta),
        meter=MeterConfig(d=d, g=g),
    )


def imaginary_weak_value_config(phi: float, g: float, d: float = 1.0) -> SystemConfig:
    """Symmetric input with relative-phase post-selection: purely imaginary weak values."""
    return SystemConfig(
        pre=SpinState.equal_superposition(),
        post=SpinState.relative_phase(phi),
        meter=MeterConfig(d=d, g=g),
    )


def branch_amplitudes(cfg: SystemConfig, branch: Branch) -> tuple[complex, complex]:
    """Meter superposition coefficients (c1, c2) conditioned on the branch outcome."""
    if branch is Branch.PSA:
        sel = cfg.post
    elif branch is Branch.PSR:
        sel = cfg.rejected
    else:
        raise ValueError("branch amplitudes are defined for PSA and PSR only")
    return (
        sel.a1.conjugate() * cfg.pre.a1,
        sel.a2.conjugate() * cfg.pre.a2,
    )


def branch_weight(cfg: SystemConfig, branch: Branch) -> float:
    """Probability of the branch outcome at the configured coupling strength."""
    c1, c2 = branch_amplitudes(cfg, branch)
    cross = (c1.conjugate() * c2).real
    return abs(c1) ** 2 + abs(c2) ** 2 + 2.0 * cross * cfg.meter.packet_overlap


def selection_probabilities(cfg: SystemConfig) -> tuple[float, float]:
    """(p_accept, p_reject); the pair sums to one by completeness."""
    return branch_weight(cfg, Branch.PSA), branch_weight(cfg, Branch.PSR)
