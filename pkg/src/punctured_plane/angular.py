"""Quasi-periodic angular sectors on the circle and the operators acting there.

A sector is labelled by theta in [0, 1): its functions pick up a phase
e^{i 2 pi theta} when the angle winds once around the removed point.  Every
operator of interest (rotation, the angular-momentum generator, the squared
angular derivative, the phase ladder) is diagonal or a shift in the basis
e^{i (m + theta) phi}, so functions are stored as finite coefficient maps
over the integer label m and the operator algebra is exact.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from fractions import Fraction

THETA_TOL = 1e-12


class SectorMismatchError(ValueError):
    """Operands live in different quasi-periodicity sectors."""


@dataclass(frozen=True)
class AngularSector:
    """Quasi-periodicity parameter theta in [0,1) plus the projective
    representation parameter lam of the rotation action.

    theta_exact keeps the rational form when one was supplied (e.g. from
    "1/2" on the command line) so that the measure-zero comparisons
    theta == 0 and theta == 1/2 can be made exactly.
    """

    theta: float
    lam: float = 0.0
    theta_exact: Fraction | None = field(default=None, compare=False)

    def __post_init__(self) -> None:
        if not 0.0 <= self.theta < 1.0:
            raise ValueError(f"theta = {self.theta} outside [0, 1)")
        if self.theta_exact is not None and float(self.theta_exact) != self.theta:
            raise ValueError("theta_exact inconsistent with theta")

    @classmethod
    def from_value(cls, value: float | str | Fraction, lam: float = 0.0) -> "AngularSector":
        """Build a sector from a float, a Fraction, or a 'p/q' / decimal string."""
        if isinstance(value, Fraction):
            return cls(theta=float(value), lam=lam, theta_exact=value)
        if isinstance(value, str):
            text = value.strip()
            try:
                frac = Fraction(text)  # handles "p/q", decimals and integers
            except (ValueError, ZeroDivisionError):
                return cls(theta=float(text), lam=lam)
            return cls(theta=float(frac), lam=lam, theta_exact=frac)
        value = float(value)
        if value in (0.0, 0.5):
            return cls(theta=value, lam=lam, theta_exact=Fraction(value))
        return cls(theta=value, lam=lam)

    def is_zero(self) -> bool:
        if self.theta_exact is not None:
            return self.theta_exact == 0
        return abs(self.theta) < THETA_TOL

    def is_half(self) -> bool:
        if self.theta_exact is not None:
            return self.theta_exact == Fraction(1, 2)
        return abs(self.theta - 0.5) < THETA_TOL


@dataclass(frozen=True)
class Channel:
    """One angular-momentum sector (theta, m) of the radial problem."""

    sector: AngularSector
    m: int

    @property
    def nu(self) -> float:
        """Bessel order |theta + m| of the channel's radial equation."""
        return abs(self.sector.theta + self.m)

    @property
    def exponent(self) -> float:
        """Signed angular exponent theta + m of e^{i (theta+m) phi}."""
        return self.sector.theta + self.m


@dataclass
class AngularFunction:
    """Finite expansion f(phi) = sum_m c_m e^{i (m + theta) phi}."""

    coefficients: dict[int, complex]
    sector: AngularSector

    def copy(self) -> "AngularFunction":
        return AngularFunction(dict(self.coefficients), self.sector)


def basis_function(sector: AngularSector, m: int) -> AngularFunction:
    return AngularFunction({m: 1.0 + 0.0j}, sector)


def evaluate(f: AngularFunction, phi: float) -> complex:
    theta = f.sector.theta
    return sum(
        c * cmath.exp(1j * (m + theta) * phi) for m, c in f.coefficients.items()
    )


def rotate(f: AngularFunction, alpha: float) -> AngularFunction:
    """Rotation by alpha: f(phi) -> e^{i lam alpha} f(phi + alpha).

    Diagonal on the basis: c_m -> e^{i lam alpha} e^{i (m+theta) alpha} c_m.
    Norm preserving, sector preserving.
    """
    sector = f.sector
    overall = cmath.exp(1j * sector.lam * alpha)
    rotated = {
        m: overall * cmath.exp(1j * (m + sector.theta) * alpha) * c
        for m, c in f.coefficients.items()
    }
    return AngularFunction(rotated, sector)


def fractional_shift(sector: AngularSector) -> float:
    """The fractional part eps = frac(lam + theta), always in [0, 1).
    For lam = 0 this is theta itself."""
    combined = sector.lam + sector.theta
    eps = combined - math.floor(combined)
    if eps >= 1.0:  # rounding seam for combined just below an integer
        eps = math.nextafter(1.0, 0.0)
    return eps


def j_lambda_eigenvalue(sector: AngularSector, l: int) -> float:
    """Angular-momentum generator eigenvalue mu = eps + l with
    eps = fractional_shift(sector); the sum itself can round back onto an
    integer when eps sits within half an ulp of 1."""
    return fractional_shift(sector) + l


def d2_eigenvalue(channel: Channel) -> float:
    """Eigenvalue (theta + m)^2 of -d^2/dphi^2 on the channel."""
    return channel.exponent**2


def v_tau_map(theta: float, tau: float) -> float:
    """Sector label produced by the unitary multiplication map of weight tau:
    theta -> theta - tau + h(tau - theta) with Heaviside h, h(0) = 0.

    Equivalently (theta - tau) mod 1.  Note the bookkeeping asymmetry:
    multiplying by e^{i tau phi} raises the winding phase of a function by
    tau, while this label map lowers theta by tau; this module implements
    the lowering convention for the sector label.
    """
    if not 0.0 < tau < 1.0:
        raise ValueError(f"tau = {tau} outside (0, 1)")
    if not 0.0 <= theta < 1.0:
        raise ValueError(f"theta = {theta} outside [0, 1)")
    heaviside = 1.0 if tau - theta > 0.0 else 0.0
    result = theta - tau + heaviside
    # guard the closed edge: the image must stay in [0, 1)
    if result >= 1.0:
        result -= 1.0
    if result < 0.0:
        result += 1.0
    return result


def ladder_shift(channel: Channel) -> Channel:
    """Multiplication by e^{i phi}: shifts the channel label m -> m + 1,
    lowering the generator eigenvalue of the image by one."""
    return Channel(channel.sector, channel.m + 1)


def ladder_shift_adjoint(channel: Channel) -> Channel:
    """Adjoint shift m -> m - 1; round-trips with ladder_shift."""
    return Channel(channel.sector, channel.m - 1)


def angle_reduce(phi: float) -> float:
    """Reduce an angle to the fundamental window [0, 2 pi)."""
    two_pi = 2.0 * math.pi
    reduced = phi - two_pi * math.floor(phi / two_pi)
    if reduced >= two_pi:  # floor roundoff at the seam
        reduced -= two_pi
    return reduced


def inner_product(f: AngularFunction, g: AngularFunction) -> complex:
    """Scalar product (1/2pi) int_0^{2pi} f* g, which is sum_m c_m^* d_m
    on basis expansions.  Distinct sectors are orthogonal and rejected."""
    fs, gs = f.sector, g.sector
    same = (
        fs.theta_exact == gs.theta_exact
        if fs.theta_exact is not None and gs.theta_exact is not None
        else abs(fs.theta - gs.theta) < THETA_TOL
    )
    if not same:
        raise SectorMismatchError(
            f"sectors theta={fs.theta} and theta={gs.theta} are orthogonal"
        )
    return sum(
        c.conjugate() * g.coefficients.get(m, 0.0j)
        for m, c in f.coefficients.items()
    )


def norm(f: AngularFunction) -> float:
    return math.sqrt(inner_product(f, f).real)
