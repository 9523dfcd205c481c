"""Modified Bessel functions I_nu, MacDonald functions K_nu and friends.

Real order nu in [0, 2), complex argument.  This is the numerical core the
deficiency-vector and bound-state machinery sits on: all radial profiles are
K_nu evaluated either on the positive real axis or on the rays arg z = +-pi/4.

Evaluation regimes for K_nu (|z| up to ~30, relative accuracy ~1e-12):

  series      |z| + Re z <= 7          reflection combination of the I_{+-nu}
                                       power series; dedicated log-series at
                                       integer order where the reflection
                                       denominator sin(nu*pi) vanishes
  integral    mid-band, Re z > 0       exponentially convergent trapezoid on
                                       the even integrand
                                       exp(-z*cosh t) * cosh(nu*t)
  asymptotic  |z| >= 16 or Re z >= 14  sqrt(pi/2z) e^{-z} sum_k a_k(nu)/z^k,
                                       truncated at the smallest term

Full accuracy holds for |arg z| <= 0.35*pi, which covers every argument the
rest of the package produces with margin.  Closer to the imaginary axis with
8 < |z| < 16 every double-precision route loses digits to cancellation and
accuracy degrades gracefully (~1e-9 worst case); oscillatory-regime Bessel
functions (J, Y) are out of scope here.
"""

from __future__ import annotations

import cmath
import math
import warnings

EULER_GAMMA = 0.5772156649015329

# exp() overflows IEEE doubles near 709; keep headroom for prefactors.
MAX_EXP_ARG = 700.0

_SERIES_BOUND = 7.0
_ASYM_MODULUS = 16.0
_ASYM_REAL = 14.0
_I_SERIES_CANCEL = 8.0
_I_ASYM_MODULUS = 14.5

# Below this distance from an integer the reflection formula has lost every
# digit; we snap to the integer-order series and warn.
NEAR_INTEGER_TOL = 1e-6


class SpecFunError(Exception):
    """Base class for special-function evaluation failures."""


class InvalidOrderError(SpecFunError):
    """Order outside the supported range [0, 2)."""


class ArgumentDomainError(SpecFunError):
    """Argument outside the function's domain (z = 0, or arg z = pi)."""


class OverflowRangeError(SpecFunError):
    """Result or intermediate would overflow double precision."""


class GammaPoleError(SpecFunError):
    """Gamma evaluated at a non-positive integer."""


class PrecisionLossWarning(UserWarning):
    """Emitted when an order within 1e-6 of an integer is snapped to it."""


def gamma_fn(x: float) -> float:
    """Gamma(x) for real x.

    Raises GammaPoleError at the poles x = 0, -1, -2, ... and
    OverflowRangeError once Gamma(x) no longer fits in a double (x > ~171).
    """
    x = float(x)
    if x <= 0.0 and x == math.floor(x):
        raise GammaPoleError(f"gamma pole at x={x}")
    try:
        return math.gamma(x)
    except OverflowError as exc:
        raise OverflowRangeError(f"gamma({x}) overflows") from exc


def _check_finite(value: complex, label: str) -> complex:
    if not (math.isfinite(value.real) and math.isfinite(value.imag)):
        raise OverflowRangeError(f"{label} produced a non-finite value")
    return value


def _bessel_i_series(nu: float, z: complex) -> complex:
    """Power series sum_k (z^2/4)^k / (k! Gamma(nu+k+1)), any nu > -2.

    Valid for every z; loses ~e^{|z|-|Re z|} digits to term cancellation,
    so callers keep it inside that budget.
    """
    if z == 0:
        if nu == 0.0:
            return 1.0 + 0.0j
        return 0.0j
    q = 0.25 * z * z
    term = 1.0 + 0.0j
    total = term
    for k in range(1, 600):
        term *= q / (k * (nu + k))
        total += term
        if abs(term) <= 1e-17 * abs(total):
            break
    if nu == 0.0:
        prefactor = 1.0 + 0.0j
    else:
        prefactor = cmath.exp(nu * cmath.log(0.5 * z))
    return prefactor * total / math.gamma(nu + 1.0)


def _bessel_i_asym(nu: float, z: complex) -> complex:
    """Large-|z| expansion of I_nu keeping both exponentials.

    The recessive e^{-z} term carries the Stokes phase exp(+-i(nu+1/2)pi)
    with the sign following Im z; on the positive real axis it only moves
    digits below the e^{-2|z|} error floor.
    """
    mu4 = 4.0 * nu * nu
    # dominant sum: alternating signs
    term = 1.0 + 0.0j
    dom = term
    for k in range(1, 60):
        nxt = term * (-(mu4 - (2 * k - 1) ** 2) / (8.0 * k * z))
        if abs(nxt) >= abs(term):
            break
        term = nxt
        dom += term
        if abs(term) <= 1e-17 * abs(dom):
            break
    # recessive sum: all plus signs
    term = 1.0 + 0.0j
    rec = term
    for k in range(1, 60):
        nxt = term * ((mu4 - (2 * k - 1) ** 2) / (8.0 * k * z))
        if abs(nxt) >= abs(term):
            break
        term = nxt
        rec += term
        if abs(term) <= 1e-17 * abs(rec):
            break
    sign = 1.0 if z.imag >= 0.0 else -1.0
    stokes = cmath.exp(sign * 1j * (nu + 0.5) * math.pi)
    value = (cmath.exp(z) * dom + stokes * cmath.exp(-z) * rec) / cmath.sqrt(
        2.0 * math.pi * z
    )
    if z.imag == 0.0 and z.real > 0.0:
        value = complex(value.real, 0.0)
    return value


def _bessel_i_dispatch(nu: float, z: complex) -> complex:
    if z.real < 0.0:
        # I_nu(z e^{+-i pi}) = e^{+-i nu pi} I_nu(z)
        m = 1.0 if z.imag > 0.0 or (z.imag == 0.0 and z.real < 0.0) else -1.0
        w = -z
        if abs(w) - abs(w.real) <= _I_SERIES_CANCEL or abs(w) < _I_ASYM_MODULUS:
            return cmath.exp(1j * m * nu * math.pi) * _bessel_i_series(nu, w)
        return cmath.exp(1j * m * nu * math.pi) * _bessel_i_asym(nu, w)
    if abs(z) - abs(z.real) <= _I_SERIES_CANCEL and abs(z) <= 40.0:
        return _bessel_i_series(nu, z)
    if abs(z) >= _I_ASYM_MODULUS:
        return _bessel_i_asym(nu, z)
    # near-imaginary wedge below the asymptotic threshold: series, degraded
    return _bessel_i_series(nu, z)


def bessel_i(nu: float, z: complex) -> complex:
    """Modified Bessel function I_nu(z) for nu in [0, 2).

    Raises OverflowRangeError once Re z exceeds the e^z overflow guard.
    """
    nu = float(nu)
    z = complex(z)
    if not 0.0 <= nu < 2.0:
        raise InvalidOrderError(f"order {nu} outside [0, 2)")
    if z.real > MAX_EXP_ARG:
        raise OverflowRangeError(f"Re z = {z.real} beyond exp overflow guard")
    return _check_finite(_bessel_i_dispatch(nu, z), "bessel_i")


def _harmonic_like_k0(z: complex) -> complex:
    """Series for K_0 with the log term split off (principal log)."""
    q = 0.25 * z * z
    # -(log(z/2) + gamma) * I_0(z) + sum_{k>=1} H_k q^k / (k!)^2
    i0 = _bessel_i_series(0.0, z)
    term = 1.0 + 0.0j
    total = 0.0j
    hk = 0.0
    for k in range(1, 600):
        term *= q / (k * k)
        hk += 1.0 / k
        contrib = term * hk
        total += contrib
        if abs(contrib) <= 1e-17 * (abs(total) + 1.0):
            break
    return -(cmath.log(0.5 * z) + EULER_GAMMA) * i0 + total


def _bessel_k1_series(z: complex) -> complex:
    """Integer-order series for K_1 (principal log)."""
    q = 0.25 * z * z
    i1 = _bessel_i_series(1.0, z)
    logterm = cmath.log(0.5 * z)
    # sum_{k>=0} [psi(k+1) + psi(k+2)] q^k / (k! (k+1)!)
    psi1 = -EULER_GAMMA
    psi2 = 1.0 - EULER_GAMMA
    term = 1.0 + 0.0j
    total = term * (psi1 + psi2)
    for k in range(1, 600):
        term *= q / (k * (k + 1))
        psi1 += 1.0 / k
        psi2 += 1.0 / (k + 1)
        contrib = term * (psi1 + psi2)
        total += contrib
        if abs(contrib) <= 1e-17 * (abs(total) + 1.0):
            break
    return 1.0 / z + logterm * i1 - 0.25 * z * total


def _bessel_k_series(nu: float, z: complex) -> complex:
    """Small-|z| route: reflection for non-integer order, log series else."""
    n = round(nu)
    if nu == n:
        if n == 0:
            return _harmonic_like_k0(z)
        if n == 1:
            return _bessel_k1_series(z)
        # n == 2 via upward recurrence K_{nu+1} = K_{nu-1} + (2 nu / z) K_nu
        return _harmonic_like_k0(z) + (2.0 / z) * _bessel_k1_series(z)
    return (
        0.5
        * math.pi
        * (_bessel_i_series(-nu, z) - _bessel_i_series(nu, z))
        / math.sin(nu * math.pi)
    )


def _bessel_k_asym(nu: float, z: complex) -> complex:
    """sqrt(pi/2z) e^{-z} sum_k a_k(nu)/z^k truncated at the smallest term."""
    mu4 = 4.0 * nu * nu
    term = 1.0 + 0.0j
    total = term
    for k in range(1, 60):
        nxt = term * ((mu4 - (2 * k - 1) ** 2) / (8.0 * k * z))
        if abs(nxt) >= abs(term):
            break
        term = nxt
        total += term
        if abs(term) <= 1e-17 * abs(total):
            break
    return cmath.sqrt(0.5 * math.pi / z) * cmath.exp(-z) * total


def _bessel_k_integral(nu: float, z: complex) -> complex:
    """Trapezoid on int_0^inf exp(-z cosh t) cosh(nu t) dt, Re z > 0.

    The integrand is even and analytic in a strip of half-width
    pi/2 - |arg z|, so the trapezoid converges like exp(-2 pi d / h);
    each halving of h is kept only until two levels agree.
    """
    arg = abs(cmath.phase(z))
    d = min(1.0, max(0.15, 0.9 * (0.5 * math.pi - arg)))
    h = 2.0 * math.pi * d / 36.0
    rez = z.real
    t_max = math.acosh(1.0 + 44.0 / max(rez, 1e-8))
    previous = None
    for _ in range(5):
        total = 0.5 * cmath.exp(-z)
        k = 1
        while True:
            t = k * h
            if t > t_max:
                break
            total += cmath.exp(-z * math.cosh(t)) * math.cosh(nu * t)
            k += 1
        value = total * h
        if previous is not None and abs(value - previous) <= 1e-14 * abs(value):
            return value
        previous = value
        h *= 0.5
    return previous


def _bessel_k_dispatch(nu: float, z: complex) -> complex:
    if abs(z) + z.real <= _SERIES_BOUND:
        return _bessel_k_series(nu, z)
    if z.real <= 0.0:
        # K_nu(z e^{+-i pi}) = e^{-+i nu pi} K_nu(z) -+ i pi I_nu(z)
        m = 1.0 if z.imag > 0.0 else -1.0
        w = -z
        return cmath.exp(-1j * m * nu * math.pi) * _bessel_k_dispatch(
            nu, w
        ) - 1j * m * math.pi * _bessel_i_dispatch(nu, w)
    if abs(z) >= _ASYM_MODULUS or z.real >= _ASYM_REAL:
        return _bessel_k_asym(nu, z)
    return _bessel_k_integral(nu, z)


def bessel_k(nu: float, z: complex) -> complex:
    """MacDonald function K_nu(z) for |nu| < 2 and z != 0, |arg z| < pi.

    Negative orders are served through the even symmetry K_{-nu} = K_nu.
    Orders within 1e-6 of an integer are snapped to it (the reflection
    denominator sin(nu*pi) has lost every digit there) and a
    PrecisionLossWarning is emitted.
    """
    nu = float(nu)
    z = complex(z)
    if z == 0:
        raise ArgumentDomainError("K_nu is singular at z = 0")
    if z.imag == 0.0 and z.real < 0.0:
        raise ArgumentDomainError("K_nu branch cut along arg z = pi")
    anu = abs(nu)
    if anu >= 2.0:
        raise InvalidOrderError(f"order {nu} outside (-2, 2)")
    nearest = float(round(anu))
    if anu != nearest and abs(anu - nearest) < NEAR_INTEGER_TOL:
        warnings.warn(
            f"order {anu} within {NEAR_INTEGER_TOL} of integer "
            f"{int(nearest)}; evaluating at the integer order",
            PrecisionLossWarning,
            stacklevel=2,
        )
        anu = nearest
    return _check_finite(_bessel_k_dispatch(anu, z), "bessel_k")


def k_orthogonality_integral(mu: float, a: complex, b: complex) -> complex:
    """Closed form of int_0^inf x K_mu(a x) K_mu(b x) dx.

    Requires Re(a+b) > 0 and |mu| < 1.  Written through
    s = log(a/b) as pi*sinh(mu*s) / (2ab sin(mu*pi) sinh(s)), which is
    uniformly stable in the a -> b and mu -> 0 limits.
    """
    mu = float(mu)
    a = complex(a)
    b = complex(b)
    if abs(mu) >= 1.0:
        raise InvalidOrderError(f"|mu| = {abs(mu)} must be < 1")
    if (a + b).real <= 0.0:
        raise ArgumentDomainError("requires Re(a+b) > 0")
    s = cmath.log(a / b)
    if mu == 0.0:
        if s == 0:
            return 1.0 / (2.0 * a * b)
        return s / (2.0 * a * b * cmath.sinh(s))
    if s == 0:
        return math.pi * mu / (2.0 * a * b * math.sin(mu * math.pi))
    return (
        math.pi
        * cmath.sinh(mu * s)
        / (2.0 * a * b * math.sin(mu * math.pi) * cmath.sinh(s))
    )
