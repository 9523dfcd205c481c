"""Deficiency indices, deficiency vectors and boundary-condition families.

Removing one point from the plane leaves the free Hamiltonian merely
symmetric in the channels with Bessel order |theta + m| < 1: one channel
(m = 0) when theta = 0, two channels (m = 0 and m = -1) when theta is in
(0, 1).  The self-adjoint realizations are labelled by one phase eta in the
first case and by a pair (rho, eta) in the second; time reversal survives
only in the sectors theta = 0 and theta = 1/2 and forces rho = eta in the
latter.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Callable, Union

from .angular import AngularSector, Channel
from .specfun import bessel_k


class ExtensionError(ValueError):
    """Base class for boundary-condition bookkeeping failures."""


class NonDeficientChannelError(ExtensionError):
    """Channel is essentially self-adjoint; it has no deficiency vector."""


class VariantMismatchError(ExtensionError):
    """Extension-parameter variant does not match the sector."""


class BoundaryConditionError(ExtensionError):
    """Supplied regular part violates chi(0) = chi'(0) = 0."""


class InadmissibleSectorError(ExtensionError):
    """Time reversal cannot be defined in this sector."""


class ConstraintViolationError(ExtensionError):
    """Time reversal at theta = 1/2 requires rho = eta."""


@dataclass(frozen=True)
class PhysicalConfig:
    """Physical constants: hbar, mass M, and the energy scale kappa.

    Defaults are the natural units hbar = 1, M = 1/2, kappa = 1, in which
    hbar^2 / 2M = 1 and the reference wavenumber k0 is 1.
    """

    hbar: float = 1.0
    mass: float = 0.5
    kappa: float = 1.0

    def __post_init__(self) -> None:
        for name in ("hbar", "mass", "kappa"):
            if getattr(self, name) <= 0.0:
                raise ValueError(f"{name} must be strictly positive")

    @property
    def k0(self) -> float:
        """Reference wavenumber sqrt(2 M kappa) / hbar."""
        return math.sqrt(2.0 * self.mass * self.kappa) / self.hbar

    def deficiency_argument(self, sign: int) -> complex:
        """Radial argument scale of the deficiency vector for H f = +-i kappa f.

        sign=+1 uses sqrt(-i) = e^{-i pi/4}, sign=-1 its conjugate; the
        principal branch keeps Re > 0 so the profiles decay at infinity.
        """
        if sign not in (+1, -1):
            raise ValueError("sign must be +1 or -1")
        return self.k0 * cmath.exp(-1j * sign * math.pi / 4.0)

    def wavenumber(self, energy: float) -> float:
        """Decay constant sqrt(2 M |E|) / hbar of a negative-energy state."""
        return math.sqrt(2.0 * self.mass * abs(energy)) / self.hbar


@dataclass(frozen=True)
class DeficiencyIndex:
    n_plus: int
    n_minus: int

    def __post_init__(self) -> None:
        if self.n_plus < 0 or self.n_minus < 0:
            raise ValueError("deficiency indices are non-negative")
        if self.n_plus != self.n_minus:
            # the radial operator is real, so the indices always coincide
            raise ValueError("unequal deficiency indices are not produced here")

    def __str__(self) -> str:
        return f"({self.n_plus},{self.n_minus})"


def _check_angle(name: str, value: float) -> None:
    if not -math.pi <= value < math.pi:
        raise ValueError(f"{name} = {value} outside [-pi, pi)")


@dataclass(frozen=True)
class Theta0Params:
    """One-phase family of the theta = 0 sector."""

    eta: float

    def __post_init__(self) -> None:
        _check_angle("eta", self.eta)


@dataclass(frozen=True)
class ThetaGeneralParams:
    """Diagonal two-phase family of a theta in (0, 1) sector.

    rho governs the m = 0 channel, eta the m = -1 channel.  The full
    unitary between deficiency spaces is reduced to this diagonal form by
    rotational invariance of the domain; non-diagonal choices are not
    represented spectrally here.
    """

    rho: float
    eta: float

    def __post_init__(self) -> None:
        _check_angle("rho", self.rho)
        _check_angle("eta", self.eta)


@dataclass(frozen=True)
class TimeReversalHalfParams:
    """theta = 1/2 family with time reversal imposed: the single phase eta
    stands for the constrained pair rho = eta."""

    eta: float

    def __post_init__(self) -> None:
        _check_angle("eta", self.eta)


ExtensionParams = Union[Theta0Params, ThetaGeneralParams, TimeReversalHalfParams]


def classify_channel(channel: Channel) -> DeficiencyIndex:
    """Per-channel deficiency index: (1,1) iff the candidate deficiency
    profile K_{|theta+m|} is square integrable near the puncture, which
    happens exactly for m = 0 (any theta) and m = -1 with theta > 0."""
    theta_zero = channel.sector.is_zero()
    if channel.m == 0:
        return DeficiencyIndex(1, 1)
    if channel.m == -1 and not theta_zero:
        return DeficiencyIndex(1, 1)
    return DeficiencyIndex(0, 0)


def global_deficiency(sector: AngularSector) -> DeficiencyIndex:
    """Sum of the per-channel indices: (1,1) at theta = 0, else (2,2)."""
    if sector.is_zero():
        return DeficiencyIndex(1, 1)
    return DeficiencyIndex(2, 2)


def deficient_channels(sector: AngularSector) -> list[Channel]:
    channels = [Channel(sector, 0)]
    if not sector.is_zero():
        channels.append(Channel(sector, -1))
    return channels


@dataclass
class DeficiencyVector:
    """Normalized solution of H f = sign * i kappa f in one channel.

    The radial profile is prefactor * K_nu(a r) with a the deficiency
    argument; the prefactor makes the norm under int_0^inf r dr equal one.
    """

    channel: Channel
    sign: int
    prefactor: float
    config: PhysicalConfig

    @property
    def nu(self) -> float:
        return self.channel.nu

    @property
    def decay_rate(self) -> float:
        # Re(a) = k0 / sqrt(2): sets the quadrature scale for norms
        return self.config.k0 / math.sqrt(2.0)

    def radial(self, r: float) -> complex:
        a = self.config.deficiency_argument(self.sign)
        return self.prefactor * bessel_k(self.nu, a * r)

    def evaluate(self, r: float, phi: float = 0.0) -> complex:
        return self.radial(r) * cmath.exp(1j * self.channel.exponent * phi)


def deficiency_vector(
    channel: Channel, sign: int, config: PhysicalConfig
) -> DeficiencyVector:
    """Construct the normalized deficiency vector of a deficient channel.

    Prefactors: (2/hbar) sqrt(2 M kappa / pi) at (0,0);
    the same with an extra cos(theta*pi/2) inside the root at (theta,0)
    and sin(theta*pi/2) at (theta,-1).
    """
    if classify_channel(channel) != DeficiencyIndex(1, 1):
        raise NonDeficientChannelError(
            f"channel (theta={channel.sector.theta}, m={channel.m}) is "
            "essentially self-adjoint"
        )
    theta = channel.sector.theta
    if channel.m == 0:
        trig = math.cos(0.5 * theta * math.pi)
    else:
        trig = math.sin(0.5 * theta * math.pi)
    prefactor = (2.0 / config.hbar) * math.sqrt(
        2.0 * config.mass * config.kappa * trig / math.pi
    )
    return DeficiencyVector(channel=channel, sign=sign, prefactor=prefactor, config=config)


ChiFunction = Callable[[float, float], complex]


@dataclass
class DomainElement:
    """A vector of the self-adjoint domain: regular part plus the phased
    deficiency combination fixed by the extension parameters."""

    sector: AngularSector
    params: ExtensionParams
    coefficients: tuple[complex, ...]
    chi: ChiFunction | None
    config: PhysicalConfig

    def evaluate(self, r: float, phi: float) -> complex:
        value = self.chi(r, phi) if self.chi is not None else 0.0j
        a_plus = self.config.deficiency_argument(+1)
        a_minus = self.config.deficiency_argument(-1)
        if isinstance(self.params, Theta0Params):
            (c,) = self.coefficients
            value += c * (
                bessel_k(0.0, a_plus * r)
                + cmath.exp(1j * self.params.eta) * bessel_k(0.0, a_minus * r)
            )
            return value
        theta = self.sector.theta
        if isinstance(self.params, TimeReversalHalfParams):
            rho = eta = self.params.eta
        else:
            rho, eta = self.params.rho, self.params.eta
        a_coeff, b_coeff = self.coefficients
        value += (
            a_coeff
            * cmath.exp(1j * theta * phi)
            * (
                bessel_k(theta, a_plus * r)
                + cmath.exp(1j * rho) * bessel_k(theta, a_minus * r)
            )
        )
        value += (
            b_coeff
            * cmath.exp(1j * (theta - 1.0) * phi)
            * (
                bessel_k(1.0 - theta, a_plus * r)
                + cmath.exp(1j * eta) * bessel_k(1.0 - theta, a_minus * r)
            )
        )
        return value


def _check_regular_part(chi: ChiFunction) -> None:
    # chi must vanish with vanishing slope at the puncture
    scale = max(abs(chi(1.0, 0.0)), 1.0)
    r0, r1 = 1e-6, 2e-6
    v0, v1 = chi(r0, 0.0), chi(r1, 0.0)
    slope = (v1 - v0) / (r1 - r0)
    if abs(v0) > 1e-5 * scale or abs(slope) > 1e-2 * scale:
        raise BoundaryConditionError(
            "regular part does not satisfy chi(0) = chi'(0) = 0 within tolerance"
        )


def domain_element(
    sector: AngularSector,
    params: ExtensionParams,
    coefficients: complex | tuple[complex, complex],
    chi: ChiFunction | None,
    config: PhysicalConfig | None = None,
) -> DomainElement:
    """Assemble a domain vector from a regular part and the deficiency
    combination selected by the extension parameters.

    theta = 0 takes a single coefficient, theta in (0, 1) a pair (A, B).
    """
    config = config or PhysicalConfig()
    if isinstance(params, Theta0Params):
        if not sector.is_zero():
            raise VariantMismatchError("one-phase family requires theta = 0")
        coeffs = (complex(coefficients),) if not isinstance(coefficients, tuple) else (
            complex(coefficients[0]),
        )
    elif isinstance(params, TimeReversalHalfParams):
        if not sector.is_half():
            raise VariantMismatchError("time-reversal family requires theta = 1/2")
        a_c, b_c = coefficients
        coeffs = (complex(a_c), complex(b_c))
    else:
        if sector.is_zero():
            raise VariantMismatchError("two-phase family requires theta in (0, 1)")
        a_c, b_c = coefficients
        coeffs = (complex(a_c), complex(b_c))
    if chi is not None:
        _check_regular_part(chi)
    return DomainElement(
        sector=sector, params=params, coefficients=coeffs, chi=chi, config=config
    )


def time_reversal_admissible(sector: AngularSector) -> bool:
    """Antiunitary conjugation maps the winding phase theta to -theta, so it
    acts within a single sector only for theta = 0 and theta = 1/2."""
    return sector.is_zero() or sector.is_half()


def apply_time_reversal(
    sector: AngularSector, params: ExtensionParams
) -> ExtensionParams:
    """Impose time reversal on an extension family.

    theta = 0 domains are invariant as they stand; at theta = 1/2 the pair
    (rho, eta) is admitted only when rho = eta and collapses to the
    one-phase constrained family.  Idempotent.
    """
    if not time_reversal_admissible(sector):
        raise InadmissibleSectorError(
            f"time reversal undefined for theta = {sector.theta}"
        )
    if isinstance(params, Theta0Params):
        if not sector.is_zero():
            raise VariantMismatchError("one-phase family requires theta = 0")
        return params
    if isinstance(params, TimeReversalHalfParams):
        if not sector.is_half():
            raise VariantMismatchError("constrained family requires theta = 1/2")
        return params
    if not sector.is_half():
        raise InadmissibleSectorError(
            "two-phase family under time reversal requires theta = 1/2"
        )
    if params.rho != params.eta and abs(params.rho - params.eta) > 1e-12:
        raise ConstraintViolationError(
            f"time reversal at theta = 1/2 needs rho = eta, got "
            f"rho={params.rho}, eta={params.eta}"
        )
    return TimeReversalHalfParams(eta=params.eta)
