"""Bound states of the extension families: energies, windows, wavefunctions.

Each deficient channel of Bessel order nu in [0, 1) contributes at most one
negative-energy state.  Matching the decaying solution K_nu(c r) against the
phased deficiency combination at the puncture gives

    c^{2 nu} = k0^{2 nu} * cos(phi/2 + nu pi/4) / cos(phi/2 - nu pi/4)

with phi the channel's extension phase, hence

    E = -kappa * [cos(phi/2 + nu pi/4) / cos(phi/2 - nu pi/4)]^{1/nu},

existing exactly while both cosines are positive.  The nu -> 0 limit turns
the power law into E = -kappa exp(-(pi/2) tan(phi/2)) with one state for
every phi except the singular phi = -pi.  At theta = 1/2 time reversal locks
the two channels to a common phase and the level is doubly degenerate.

All energies are proportional to kappa; hbar and M enter only through the
decay constant c = sqrt(2 M |E|) / hbar.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

from .angular import AngularSector, Channel
from .extensions import (
    ExtensionParams,
    PhysicalConfig,
    Theta0Params,
    ThetaGeneralParams,
    TimeReversalHalfParams,
    VariantMismatchError,
)
from .specfun import bessel_k

_ETA_SINGULAR_TOL = 1e-9
_HALF_NU_TOL = 1e-12


class NoFiniteBoundStateError(ValueError):
    """The theta = 0 family has no finite-energy bound state at eta = -pi."""


@dataclass
class BoundState:
    """One negative-energy level.

    match_constant is the coefficient tying the bound profile to the
    deficiency combination at the puncture; degeneracy 2 occurs only for
    the time-reversal-constrained theta = 1/2 family, where partner_channel
    carries the second angular factor of the degenerate pair.
    """

    energy: float
    channel: Channel
    match_constant: complex
    degeneracy: int = 1
    partner_channel: Channel | None = None

    def __post_init__(self) -> None:
        if not self.energy < 0.0:
            raise ValueError(f"bound-state energy must be negative, got {self.energy}")
        if self.degeneracy not in (1, 2):
            raise ValueError("degeneracy must be 1 or 2")

    def energy_over_kappa(self, config: PhysicalConfig) -> float:
        return self.energy / config.kappa


@dataclass
class RadialProfile:
    """Normalized radial factor of a bound state: int_0^inf r |psi|^2 dr = 1.

    norm_constant^2 = 2 sin(nu pi) c^2 / (pi nu) for nu in (0, 1) and
    2 c^2 in the nu -> 0 limit.  At nu = 1/2 the MacDonald function
    collapses to an exponential and the profile is evaluated in closed form
    sqrt(2 c) e^{-c r} / sqrt(r).
    """

    norm_constant: float
    nu: float
    wavenumber: float
    angular_exponent: float

    @property
    def decay_rate(self) -> float:
        return self.wavenumber

    def evaluate(self, r: float) -> complex:
        c = self.wavenumber
        if abs(self.nu - 0.5) < _HALF_NU_TOL:
            return complex(math.sqrt(2.0 * c) * math.exp(-c * r) / math.sqrt(r))
        return self.norm_constant * bessel_k(self.nu, c * r)

    def evaluate_full(self, r: float, phi: float) -> complex:
        return self.evaluate(r) * cmath.exp(1j * self.angular_exponent * phi)


def _exp_or_inf(argument: float) -> float:
    """exp() that saturates at +inf instead of raising; energies beyond the
    double range are reported as -inf rather than refused."""
    if argument > 709.0:
        return math.inf
    return math.exp(argument)


def energy_theta0(eta: float, config: PhysicalConfig) -> BoundState:
    """The single bound state of the theta = 0 family:
    E = -kappa exp(-(pi/2) tan(eta/2)), match constant 1/(1 + e^{i eta}).

    Raises NoFiniteBoundStateError within 1e-9 of the singular eta = -pi.
    """
    if not -math.pi <= eta < math.pi:
        raise ValueError(f"eta = {eta} outside [-pi, pi)")
    if abs(eta + math.pi) < _ETA_SINGULAR_TOL:
        raise NoFiniteBoundStateError(
            "no finite-energy bound state at eta = -pi"
        )
    energy = -config.kappa * _exp_or_inf(-0.5 * math.pi * math.tan(0.5 * eta))
    if energy == 0.0:
        # eta close to +pi: the state exists but |E| underflows the double
        # range; clamp to the smallest representable negative value
        energy = -math.ulp(0.0)
    match = 1.0 / (1.0 + cmath.exp(1j * eta))
    sector = AngularSector.from_value(0.0)
    return BoundState(energy=energy, channel=Channel(sector, 0), match_constant=match)


def _cosine_pair(phase: float, nu: float) -> tuple[float, float]:
    return (
        math.cos(0.5 * phase + 0.25 * nu * math.pi),
        math.cos(0.5 * phase - 0.25 * nu * math.pi),
    )


def _power_law_energy(phase: float, nu: float, kappa: float) -> float | None:
    """-kappa (cos+/cos-)^{1/nu} while both cosines are positive, else None.

    The window's right endpoint zeroes the numerator, giving E = 0, which
    is not square integrable: the endpoint therefore reports no state.  In
    floating point the cosine at the representable endpoint lands at
    ~1e-16, so anything below 1e-12 counts as the endpoint (a parameter
    sliver ~1e-12 wide whose energies sit below every resolution floor
    used here).  Energies that underflow to zero are likewise absent.
    """
    cos_plus, cos_minus = _cosine_pair(phase, nu)
    if cos_plus <= 1e-12 or cos_minus <= 0.0:
        return None
    energy = -kappa * _exp_or_inf((math.log(cos_plus) - math.log(cos_minus)) / nu)
    if energy == 0.0:
        return None
    return energy


def window_m0(theta: float) -> tuple[float, float]:
    """Existence window of the m = 0 phase rho at this theta."""
    half = 0.5 * theta * math.pi
    return (-math.pi + half, math.pi - half)


def window_m_minus1(theta: float) -> tuple[float, float]:
    """Existence window of the m = -1 phase eta at this theta."""
    half = 0.5 * (1.0 + theta) * math.pi
    return (-half, half)


def window_half_T() -> tuple[float, float]:
    """Existence window of the time-reversal-constrained theta = 1/2 phase."""
    return (-0.75 * math.pi, 0.75 * math.pi)


def energy_m0(
    theta: float, rho: float, config: PhysicalConfig
) -> BoundState | None:
    """Bound state of the (theta, m=0) channel, or None outside the window.

    E0 = -kappa [cos(rho/2 + theta pi/4)/cos(rho/2 - theta pi/4)]^{1/theta};
    match constant e^{-i rho/2} / sqrt(2 (cos rho + cos(theta pi/2))).
    """
    if not 0.0 < theta < 1.0:
        raise ValueError(f"theta = {theta} outside (0, 1)")
    energy = _power_law_energy(rho, theta, config.kappa)
    if energy is None:
        return None
    match = cmath.exp(-0.5j * rho) / math.sqrt(
        2.0 * (math.cos(rho) + math.cos(0.5 * theta * math.pi))
    )
    sector = AngularSector.from_value(theta)
    return BoundState(energy=energy, channel=Channel(sector, 0), match_constant=match)


def energy_m_minus1(
    theta: float, eta: float, config: PhysicalConfig
) -> BoundState | None:
    """Bound state of the (theta, m=-1) channel: the m = 0 formula with the
    order theta replaced by 1 - theta; match constant
    e^{-i eta/2} / sqrt(2 (cos eta + sin(theta pi/2)))."""
    if not 0.0 < theta < 1.0:
        raise ValueError(f"theta = {theta} outside (0, 1)")
    energy = _power_law_energy(eta, 1.0 - theta, config.kappa)
    if energy is None:
        return None
    match = cmath.exp(-0.5j * eta) / math.sqrt(
        2.0 * (math.cos(eta) + math.sin(0.5 * theta * math.pi))
    )
    sector = AngularSector.from_value(theta)
    return BoundState(energy=energy, channel=Channel(sector, -1), match_constant=match)


def spectrum_half_T(eta: float, config: PhysicalConfig) -> BoundState | None:
    """The doubly degenerate level of the time-reversal family at theta = 1/2:
    E = -kappa [cos(eta/2 + pi/8)/cos(eta/2 - pi/8)]^2 inside
    (-3pi/4, 3pi/4), absent outside."""
    energy = _power_law_energy(eta, 0.5, config.kappa)
    if energy is None:
        return None
    match = cmath.exp(-0.5j * eta) / math.sqrt(
        2.0 * (math.cos(eta) + math.cos(0.25 * math.pi))
    )
    sector = AngularSector.from_value(0.5)
    return BoundState(
        energy=energy,
        channel=Channel(sector, 0),
        match_constant=match,
        degeneracy=2,
        partner_channel=Channel(sector, -1),
    )


def count_bound_states(sector: AngularSector, params: ExtensionParams) -> int:
    """Number of negative-energy states of the family: 0, 1 or 2.

    The degenerate time-reversal level counts as two states at one level.
    """
    config = PhysicalConfig()
    if isinstance(params, Theta0Params):
        if not sector.is_zero():
            raise VariantMismatchError("one-phase family requires theta = 0")
        if abs(params.eta + math.pi) < _ETA_SINGULAR_TOL:
            return 0
        return 1
    if isinstance(params, TimeReversalHalfParams):
        if not sector.is_half():
            raise VariantMismatchError("constrained family requires theta = 1/2")
        state = spectrum_half_T(params.eta, config)
        return 0 if state is None else 2
    if sector.is_zero():
        raise VariantMismatchError("two-phase family requires theta in (0, 1)")
    theta = sector.theta
    count = 0
    if _power_law_energy(params.rho, theta, 1.0) is not None:
        count += 1
    if _power_law_energy(params.eta, 1.0 - theta, 1.0) is not None:
        count += 1
    return count


def bound_states(sector: AngularSector, params: ExtensionParams, config: PhysicalConfig) -> list[BoundState]:
    """All bound states of the family, possibly empty."""
    if isinstance(params, Theta0Params):
        if not sector.is_zero():
            raise VariantMismatchError("one-phase family requires theta = 0")
        try:
            return [energy_theta0(params.eta, config)]
        except NoFiniteBoundStateError:
            return []
    if isinstance(params, TimeReversalHalfParams):
        if not sector.is_half():
            raise VariantMismatchError("constrained family requires theta = 1/2")
        state = spectrum_half_T(params.eta, config)
        return [] if state is None else [state]
    if sector.is_zero():
        raise VariantMismatchError("two-phase family requires theta in (0, 1)")
    states = []
    state0 = energy_m0(sector.theta, params.rho, config)
    if state0 is not None:
        states.append(state0)
    state1 = energy_m_minus1(sector.theta, params.eta, config)
    if state1 is not None:
        states.append(state1)
    return states


def norm_constant(nu: float, c: float) -> float:
    """Normalization of K_nu(c r) under int_0^inf r dr:
    N^2 = 2 sin(nu pi) c^2 / (pi nu), continuous to 2 c^2 at nu = 0."""
    if nu < 1e-12:
        return math.sqrt(2.0) * c
    return c * math.sqrt(2.0 * math.sin(nu * math.pi) / (math.pi * nu))


def bound_wavefunction(state: BoundState, config: PhysicalConfig) -> RadialProfile:
    """Normalized radial profile of a bound state (angular factor
    e^{i (theta+m) phi} recorded alongside)."""
    c = config.wavenumber(state.energy)
    nu = state.channel.nu
    return RadialProfile(
        norm_constant=norm_constant(nu, c),
        nu=nu,
        wavenumber=c,
        angular_exponent=state.channel.exponent,
    )


def radial_density(profile: RadialProfile, r: float) -> float:
    """Probability density W^2(r) = r |psi(r)|^2 with respect to dr.

    Vanishes at the origin for the nu = 0 profile (r log^2 r -> 0) but
    tends to the finite value 2c for the nu = 1/2 exponential profile.
    """
    if r <= 0.0:
        raise ValueError("r must be strictly positive")
    return r * abs(profile.evaluate(r)) ** 2


def effective_potential(channel: Channel, r: float, config: PhysicalConfig) -> float:
    """Effective one-dimensional potential after the sqrt(r) substitution:
    (hbar^2 / 2M) ((theta+m)^2 - 1/4) / r^2."""
    if r <= 0.0:
        raise ValueError("r must be strictly positive")
    coefficient = channel.exponent**2 - 0.25
    return (config.hbar**2 / (2.0 * config.mass)) * coefficient / r**2


def centrifugal_class(channel: Channel) -> str:
    """Sign classification of the effective potential: 'attractive' when
    (theta+m)^2 < 1/4, 'vanishing' at equality, 'repulsive' above."""
    coefficient = channel.exponent**2 - 0.25
    if abs(coefficient) < 1e-12:
        return "vanishing"
    return "attractive" if coefficient < 0.0 else "repulsive"


def angular_momentum_of_state(state: BoundState, config: PhysicalConfig) -> float:
    """Angular momentum hbar (theta + m) of the state (lam = 0 realization)."""
    return config.hbar * state.channel.exponent


def angular_momenta(state: BoundState, config: PhysicalConfig) -> list[float]:
    """Angular momenta of all members of the (possibly degenerate) level."""
    values = [config.hbar * state.channel.exponent]
    if state.partner_channel is not None:
        values.append(config.hbar * state.partner_channel.exponent)
    return values


def angular_momentum_spectrum(
    sector: AngularSector, config: PhysicalConfig, m_range: range = range(-3, 4)
) -> list[float]:
    """The realized angular-momentum values hbar (theta + m) over m_range."""
    return [config.hbar * (sector.theta + m) for m in m_range]
