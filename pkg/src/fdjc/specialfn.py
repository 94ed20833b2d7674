"""Complex-argument Gamma, Kummer 1F1 and Hermite functions of complex order.

All routines take and return Python ``complex`` scalars. They are pure and
hold no shared state, so they can be called from any number of threads.

The Hermite function is evaluated through the even/odd Kummer decomposition

    H(nu, z) = 2**nu sqrt(pi) [ M(-nu/2, 1/2, z**2) / Gamma((1-nu)/2)
                                - 2 z M((1-nu)/2, 3/2, z**2) / Gamma(-nu/2) ]

so a single series kernel (``kummer_1f1``) carries all the numerics. The
series is meant for moderate arguments; large ``|z|**2`` triggers
``NoConvergence``/``PrecisionLoss`` instead of returning digits that
cancellation has already destroyed.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np
from scipy import special as _sp

from .errors import NoConvergence, PoleError, PrecisionLoss

_POLE_TOL = 1e-12
_EPS = np.finfo(float).eps


@dataclass(frozen=True)
class SeriesControl:
    """Stopping controls for the hypergeometric series.

    Parameters
    ----------
    max_terms : int
        Hard cap on the number of series terms.
    abs_tol : float
        A term is "small" when ``|term| < abs_tol * (1 + |partial sum|)``;
        summation stops after three consecutive small terms.
    rel_tol : float
        Accuracy demanded of the result. If the largest term times machine
        epsilon exceeds ``rel_tol * max(|sum|, 1)`` the result is rejected
        with :class:`PrecisionLoss` (sums below 1 are held to an absolute
        bound, so exact zeros of polynomial cases are accepted).
    """

    max_terms: int = 5000
    abs_tol: float = 1e-17
    rel_tol: float = 1e-10

    def __post_init__(self):
        if self.max_terms < 1:
            raise ValueError("max_terms must be >= 1")
        if not (self.abs_tol > 0 and self.rel_tol > 0):
            raise ValueError("tolerances must be positive")


DEFAULT_CONTROL = SeriesControl()


def _near_nonpositive_integer(z: complex) -> bool:
    r = round(z.real)
    return r <= 0 and abs(z - r) < _POLE_TOL


def _finite(value: complex, what: str) -> complex:
    if not (math.isfinite(value.real) and math.isfinite(value.imag)):
        raise NoConvergence(f"{what} overflowed to a non-finite value")
    return value


def complex_gamma(z: complex) -> complex:
    """Gamma function for complex ``z``.

    Backed by :func:`scipy.special.gamma` (Lanczos with reflection for
    ``Re z < 1/2``). Poles raise :class:`PoleError`; overflow raises
    :class:`NoConvergence` rather than leaking ``inf``.
    """
    z = complex(z)
    if _near_nonpositive_integer(z):
        raise PoleError(f"Gamma has a pole at {z}")
    return _finite(complex(_sp.gamma(z)), f"Gamma({z})")


def _rgamma(z: complex) -> complex:
    # 1/Gamma is entire: exact zero at the poles.
    if _near_nonpositive_integer(z):
        return 0j
    return complex(_sp.rgamma(z))


def _kummer_series(a: complex, b: complex, z: complex, ctl: SeriesControl) -> complex:
    term = 1 + 0j
    total = 1 + 0j
    comp = 0j  # Kahan compensation
    biggest = 1.0
    small_run = 0
    for k in range(ctl.max_terms):
        term *= (a + k) * z / ((b + k) * (k + 1))
        y = term - comp
        t = total + y
        comp = (t - total) - y
        total = t
        mag = abs(term)
        if mag > biggest:
            biggest = mag
        if mag < ctl.abs_tol * (1.0 + abs(total)):
            small_run += 1
            if small_run >= 3:
                break
        else:
            small_run = 0
    else:
        raise NoConvergence(
            f"1F1({a}, {b}, {z}) did not converge in {ctl.max_terms} terms"
        )
    if biggest * _EPS * 4 > ctl.rel_tol * max(abs(total), 1.0):
        raise PrecisionLoss(
            f"1F1({a}, {b}, {z}): cancellation (max term {biggest:.3e}, "
            f"sum {abs(total):.3e})"
        )
    return total


def kummer_1f1(a: complex, b: complex, z: complex, ctl: SeriesControl = DEFAULT_CONTROL) -> complex:
    """Confluent hypergeometric function M(a, b, z) = 1F1(a; b; z).

    Sums ``sum_k (a)_k / (b)_k z**k / k!`` with compensated summation. For
    ``Re z < 0`` Kummer's transformation ``M(a,b,z) = e**z M(b-a, b, -z)`` is
    applied first so the summed series has positive-real-part argument.

    Raises
    ------
    PoleError
        ``b`` within 1e-12 of a non-positive integer.
    NoConvergence
        ``ctl.max_terms`` exhausted, or (as :class:`PrecisionLoss`) the sum
        lost more accuracy to cancellation than ``ctl.rel_tol`` allows.
    """
    a, b, z = complex(a), complex(b), complex(z)
    if _near_nonpositive_integer(b):
        raise PoleError(f"1F1 undefined for b={b}")
    if z == 0:
        return 1 + 0j
    if z.real < 0:
        return _finite(cmath.exp(z) * _kummer_series(b - a, b, -z, ctl), "1F1")
    return _finite(_kummer_series(a, b, z, ctl), "1F1")


def hermite_h(nu: complex, z: complex, ctl: SeriesControl = DEFAULT_CONTROL) -> complex:
    """Hermite function H_nu(z) of complex order and argument.

    Solves ``y'' - 2 z y' + 2 nu y = 0`` and reduces to the physicists'
    Hermite polynomial for ``nu = 0, 1, 2, ...`` (the Gamma pole kills the
    branch of the wrong parity).
    """
    nu, z = complex(nu), complex(z)
    z2 = z * z
    r_even = _rgamma((1 - nu) / 2)
    r_odd = _rgamma(-nu / 2)
    even = r_even * kummer_1f1(-nu / 2, 0.5, z2, ctl) if r_even != 0 else 0j
    odd = r_odd * 2 * z * kummer_1f1((1 - nu) / 2, 1.5, z2, ctl) if r_odd != 0 and z != 0 else 0j
    pref = cmath.exp(nu * math.log(2.0)) * math.sqrt(math.pi)
    return _finite(pref * (even - odd), "H")
