"""Time evolution of the (n, p) two-level blocks.

Each block couples |e, n, p> to |g, n+1, p> through

    d psi1/dt = -i G_n exp(+i theta(t)) psi2,
    d psi2/dt = -i G_n exp(-i theta(t)) psi1,

with G_n = lambda sqrt(n+1) f(n+1), theta(t) = Delta_k t + kg t**2 / 2 and
Delta_k = Delta(n) + recoil_rate * p. Momentum p is measured in photon recoil
units (hbar k) along the field wave-vector.

Three independent evaluators are provided:

* the closed form built from Hermite / Kummer functions of complex order
  (``kg > 0``), with a uniform large-parameter form of the same solutions
  when the series cannot be summed in double precision;
* the elementary detuned-Rabi solution (``kg == 0``);
* a fixed-step RK4 oracle.
"""

from __future__ import annotations

import cmath
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from typing import Callable, NamedTuple, Optional

import numpy as np

from . import _rk4
from .deformation import DeformationSpec, PhotonWeights
from .errors import (
    DegenerateBranch,
    NoConvergence,
    NumericalError,
    SingularWronskian,
)
from .specialfn import DEFAULT_CONTROL, SeriesControl, hermite_h, kummer_1f1

# regime limit for the Hermite/Kummer series route, on |b|^2 + |nu| over the
# window: b^2 is purely imaginary, so the series terms peak near e^{|b|^2} and
# cancellation costs about |b|^2 / ln(10) digits
SERIES_LIMIT = 14.0
# largest adiabaticity G kg / Omega^3 accepted by the large-parameter route
ADIABATIC_LIMIT = 1e-4
# RK4: largest phase advance (|Delta_k| + 2 G) h per step
RK4_PHASE_STEP = 0.02


@dataclass(frozen=True)
class MomentumGrid:
    """Quadrature for the centre-of-mass momentum distribution."""

    p: np.ndarray
    weight: np.ndarray


def make_momentum_grid(nodes: int) -> MomentumGrid:
    """Gauss-Hermite rule for the density |phi(p)|^2 ~ exp(-2 p^2).

    Weights are normalized to a probability measure (they sum to 1).
    """
    if nodes < 1:
        raise ValueError("nodes must be >= 1")
    x, w = np.polynomial.hermite.hermgauss(nodes)
    p = x / math.sqrt(2.0)
    if nodes % 2:
        p[nodes // 2] = 0.0
    w = w / math.fsum(w)
    p.setflags(write=False)
    w.setflags(write=False)
    return MomentumGrid(p=p, weight=w)


@dataclass(frozen=True)
class ModelParams:
    """Physical constants, initial state and grids for one run.

    Attributes
    ----------
    lambda_c : float
        Atom-field coupling lambda [rad/s].
    delta_k_bar : float
        Detuning of the n = 0 block at p = 0, Delta = omega - nu [rad/s].
    kg : float
        Projection k.g of the gravitational acceleration on the wave-vector [1/s^2].
    nu, omega : float
        Field and atomic transition frequencies [rad/s]. ``omega`` defaults to
        ``nu + delta_k_bar`` and must agree with it.
    recoil_rate : float
        hbar k^2 / M, Doppler shift per unit momentum in recoil units [rad/s].
    c_e, c_g : complex
        Initial atomic amplitudes.
    weights : PhotonWeights
        Initial photon-number amplitudes w(n).
    spec : DeformationSpec
    p_nodes : int
        Momentum quadrature nodes.
    t_grid : ndarray
        Output times [s], strictly increasing from 0.
    tol : SeriesControl
    """

    lambda_c: float
    delta_k_bar: float
    kg: float
    nu: float
    recoil_rate: float
    c_e: complex
    c_g: complex
    weights: PhotonWeights
    spec: DeformationSpec
    p_nodes: int
    t_grid: np.ndarray = field(repr=False)
    omega: Optional[float] = None
    tol: SeriesControl = DEFAULT_CONTROL

    def __post_init__(self):
        t = np.array(self.t_grid, dtype=float)
        if t.ndim != 1 or len(t) < 1 or t[0] != 0 or np.any(np.diff(t) <= 0):
            raise ValueError("t_grid must be strictly increasing and start at 0")
        t.setflags(write=False)
        object.__setattr__(self, "t_grid", t)
        object.__setattr__(self, "c_e", complex(self.c_e))
        object.__setattr__(self, "c_g", complex(self.c_g))
        if abs(abs(self.c_e) ** 2 + abs(self.c_g) ** 2 - 1) > 1e-12:
            raise ValueError("|c_e|^2 + |c_g|^2 must be 1")
        if self.kg < 0:
            raise ValueError("kg must be >= 0")
        if self.p_nodes < 1:
            raise ValueError("p_nodes must be >= 1")
        expected = self.nu + self.delta_k_bar
        if self.omega is None:
            object.__setattr__(self, "omega", expected)
        elif abs(self.omega - expected) > 1e-12 * max(1.0, abs(expected)):
            raise ValueError(
                f"omega={self.omega} inconsistent with nu + delta_k_bar = {expected}"
            )

    def replace(self, **changes):
        if ("nu" in changes or "delta_k_bar" in changes) and "omega" not in changes:
            changes["omega"] = None
        return replace(self, **changes)

    @property
    def momentum_grid(self) -> MomentumGrid:
        return make_momentum_grid(self.p_nodes)

    @property
    def n_max(self) -> int:
        return self.weights.n_max

    @property
    def scaled_t(self) -> np.ndarray:
        return self.lambda_c * self.t_grid


def coupling(params: ModelParams, n: int) -> float:
    """G_n = lambda sqrt((n+1) f^2(n+1))."""
    return params.lambda_c * math.sqrt(float(params.spec.nf2(n + 1)))


def _brace(spec: DeformationSpec, n):
    return spec.nf2(n) - spec.nf2(np.asarray(n) + 1) + 1.0


def detuning_n(params: ModelParams, n: int) -> float:
    """Deformed detuning Delta(n) = Delta + nu {n f^2(n) - (n+1) f^2(n+1) + 1}."""
    return (params.omega - params.nu) + params.nu * float(_brace(params.spec, n))


def block_detuning(params: ModelParams, n: int, p):
    """Delta_k = Delta(n) + recoil_rate p, pinned to ``delta_k_bar`` at n = 0, p = 0."""
    return params.delta_k_bar + params.nu * float(_brace(params.spec, n)) + params.recoil_rate * np.asarray(p, dtype=float)


def time_detuning(params: ModelParams, n: int, p, t):
    """Delta(n, t) = Delta_k + kg t / 2; ``theta = Delta(n, t) t`` is the block phase."""
    return block_detuning(params, n, p) + 0.5 * params.kg * np.asarray(t, dtype=float)


class RabiParams(NamedTuple):
    omega2_static: float
    omega2: complex
    a2: complex
    b: Callable


_EIGHTH_ROOT = cmath.exp(0.25j * math.pi)


def rabi_params(params: ModelParams, n: int, p: float) -> RabiParams:
    """Gravity-dependent Rabi frequency and the Hermite parameters a^2, b(t).

    ``omega2_static = lambda^2 (n+1) f^2(n+1) + Delta_k^2``,
    ``omega2 = omega2_static + i kg``, ``a2 = (omega2 - Delta_k^2)/kg - i`` and
    ``b(t) = e^{i pi/4} (kg t + Delta_k) / (2 sqrt(kg/2))``.

    The Hermite order that actually solves the block equations is
    ``-i a2`` (checked against the RK4 oracle), not ``-2 i a2``.
    """
    if params.kg == 0:
        raise DegenerateBranch("rabi_params needs kg > 0; use the flat branch")
    g2 = coupling(params, n) ** 2
    dk = float(block_detuning(params, n, p))
    kg = params.kg
    om0 = g2 + dk * dk
    om = om0 + 1j * kg
    a2 = (om - dk * dk) / kg - 1j
    scale = _EIGHTH_ROOT / (2 * math.sqrt(kg / 2))

    def b(t):
        return scale * (kg * np.asarray(t, dtype=float) + dk)

    return RabiParams(om0, om, a2, b)


def initial_block(params: ModelParams, n: int):
    """(psi1_n(0), psi2_{n+1}(0)) = (w(n) c_e, w(n+1) c_g)."""
    w = params.weights.padded(n + 2)
    return complex(w[n] * params.c_e), complex(w[n + 1] * params.c_g)


def _resolve_psi0(params, n, psi0):
    return initial_block(params, n) if psi0 is None else (complex(psi0[0]), complex(psi0[1]))


def amplitudes_flat_branch(params: ModelParams, n: int, p, t, psi0=None):
    """Exact block solution for constant detuning (``kg == 0``).

    In the frame u1 = psi1 e^{-i Dk t/2}, u2 = psi2 e^{+i Dk t/2} the block
    Hamiltonian is constant, [[Dk/2, G], [G, -Dk/2]], with generalized Rabi
    frequency Omega_R = sqrt(4 G^2 + Dk^2).
    """
    if params.kg != 0:
        raise DegenerateBranch("flat branch requires kg == 0")
    y1, y2 = _resolve_psi0(params, n, psi0)
    G = coupling(params, n)
    dk = np.asarray(block_detuning(params, n, p), dtype=float)[..., None]
    t = np.asarray(t, dtype=float)
    om = np.sqrt(dk * dk + 4 * G * G)
    half = 0.5 * om * t
    cos = np.cos(half)
    # sin(x)/(x) scaled so that Omega -> 0 (G = Dk = 0) stays finite
    sinc = np.where(om > 0, np.sin(half) / np.where(om > 0, om, 1.0), 0.5 * t)
    u1 = cos * y1 - 1j * 2 * sinc * (0.5 * dk * y1 + G * y2)
    u2 = cos * y2 - 1j * 2 * sinc * (G * y1 - 0.5 * dk * y2)
    ph = np.exp(0.5j * dk * t)
    return _squeeze(u1 * ph), _squeeze(u2 / ph)


def _squeeze(a):
    a = np.asarray(a)
    return a[()] if a.ndim == 0 else (a.reshape(a.shape[1:]) if a.shape[0] == 1 and a.ndim > 1 else a)


# --- closed form -----------------------------------------------------------


def _window(params, dk, t):
    t = np.asarray(t, dtype=float)
    tmax = float(t.max()) if t.size else 0.0
    return dk, dk + params.kg * tmax


def closed_form_regime(params: ModelParams, n: int, p, t) -> str:
    """Which evaluation route the closed form uses: 'trivial', 'series' or 'asymptotic'.

    Raises
    ------
    NoConvergence
        Neither route is accurate for these parameters.
    """
    if params.kg == 0:
        raise DegenerateBranch("closed form requires kg > 0")
    G = coupling(params, n)
    if G == 0:
        return "trivial"
    kg = params.kg
    dks = np.atleast_1d(np.asarray(block_detuning(params, n, p), dtype=float))
    t = np.asarray(t, dtype=float)
    tmax = float(t.max()) if t.size else 0.0
    d_lo, d_hi = dks + 0 * tmax, dks + kg * tmax
    b2max = np.maximum(d_lo**2, d_hi**2) / (2 * kg)
    if np.all(b2max + G * G / kg <= SERIES_LIMIT):
        return "series"
    dmin = np.where((d_lo <= 0) & (d_hi >= 0), 0.0, np.minimum(abs(d_lo), abs(d_hi)))
    om_min = np.sqrt(dmin**2 + 4 * G * G)
    eps = G * kg / om_min**3
    if np.all(eps <= ADIABATIC_LIMIT):
        return "asymptotic"
    raise NoConvergence(
        f"block n={n}: |b|^2+|nu| up to {float(np.max(b2max + G * G / kg)):.3g} is too large "
        f"for the series and adiabaticity {float(np.max(eps)):.3g} too large for the asymptotic form"
    )


def _weber_basis(nu, bt, ctl):
    """Solution pair and the matching pair for psi2 at argument ``bt``.

    Returns (H_nu, M_nu, H_{nu-1}, -b M_odd) where M_nu = 1F1(-nu/2; 1/2; b^2)
    and M_odd = 1F1(1 - nu/2; 3/2; b^2).
    """
    b2 = bt * bt
    return (
        hermite_h(nu, bt, ctl),
        kummer_1f1(-nu / 2, 0.5, b2, ctl),
        hermite_h(nu - 1, bt, ctl),
        -bt * kummer_1f1(1 - nu / 2, 1.5, b2, ctl),
    )


def _closed_form_series(params, n, dk, t, y1, y2):
    kg = params.kg
    G = coupling(params, n)
    ctl = params.tol
    # Hermite order solving the block equations: nu = -i a2 = -i G^2 / kg
    nu = -1j * (G * G / kg)
    c = _EIGHTH_ROOT / math.sqrt(2 * kg)
    h0, m0, h1, m1 = _weber_basis(nu, c * dk, ctl)
    k = 2 * c * G
    # [y1, y2/k] = [[h0, m0], [h1, m1]] @ [c1, c2]
    det = h0 * m1 - m0 * h1
    scale = max(abs(h0 * m1), abs(m0 * h1), 1e-300)
    if abs(det) < 1e-14 * scale or abs(det) < 1e-300:
        raise SingularWronskian(f"block n={n}: Wronskian {abs(det):.3e}")
    r2 = y2 / k
    c1 = (y1 * m1 - m0 * r2) / det
    c2 = (h0 * r2 - h1 * y1) / det
    t = np.atleast_1d(np.asarray(t, dtype=float))
    out1 = np.empty(t.shape, dtype=complex)
    out2 = np.empty(t.shape, dtype=complex)
    for i, tt in enumerate(t):
        ht, mt, h1t, m1t = _weber_basis(nu, c * (dk + kg * tt), ctl)
        theta = dk * tt + 0.5 * kg * tt * tt
        out1[i] = c1 * ht + c2 * mt
        out2[i] = cmath.exp(-1j * theta) * k * (c1 * h1t + c2 * m1t)
    norm0 = abs(y1) ** 2 + abs(y2) ** 2
    drift = np.max(np.abs(np.abs(out1) ** 2 + np.abs(out2) ** 2 - norm0))
    if drift > 1e-9 * max(norm0, 1e-300) and drift > 1e-14:
        raise NoConvergence(f"block n={n}: series closed form lost unitarity ({drift:.2e})")
    return out1, out2


def _phase_integral(G, kg, d0, t):
    """Phi(t) = int_0^t sqrt(D(s)^2 + 4 G^2) ds for D(s) = d0 + kg s, cancellation-free."""
    d = d0 + kg * t
    om = np.sqrt(d * d + 4 * G * G)
    om0 = np.sqrt(d0 * d0 + 4 * G * G)
    first = 0.5 * t * (om + d0 * (d + d0) / (om + om0))
    x, y = d / (2 * G), d0 / (2 * G)
    sx, sy = np.sqrt(1 + x * x), np.sqrt(1 + y * y)
    same = x * y > 0
    den = np.where(same, x * sy + y * sx, 1.0)
    # x^2 - y^2 = kg t (d + d0) / (4 G^2); divided by kg below
    arg_over_kg = np.where(same, t * (d + d0) / (4 * G * G) / den, 0.0)
    asinh_diff_over_kg = np.where(
        same,
        np.arcsinh(kg * arg_over_kg) / kg,
        np.arcsinh(x * sy - y * sx) / kg,
    )
    return first + 2 * G * G * asinh_diff_over_kg


def _closed_form_asymptotic(params, n, dk, t, y1, y2):
    """Large-parameter form of the Weber solutions, with first-order correction.

    In the adiabatic basis of [[D/2, G], [G, -D/2]] the exact amplitudes
    acquire the dynamical phase Phi(t) = int Omega, plus a non-adiabatic
    correction from the mixing-angle rate phi' = -G kg / Omega^2, kept to first
    order (error O((G kg / Omega^3)^2)).
    """
    kg = params.kg
    G = coupling(params, n)
    dk = np.asarray(dk, dtype=float)[..., None]
    t = np.asarray(t, dtype=float)
    d = dk + kg * t
    om = np.sqrt(d * d + 4 * G * G)
    om0 = np.sqrt(dk * dk + 4 * G * G)
    Phi = _phase_integral(G, kg, dk, t)
    phi0 = 0.5 * np.arctan2(2 * G, dk)
    phi = 0.5 * np.arctan2(2 * G, d)
    dphi0 = -G * kg / om0**2
    dphi = -G * kg / om**2
    c0, s0 = np.cos(phi0), np.sin(phi0)
    bp = c0 * y1 + s0 * y2
    bm = -s0 * y1 + c0 * y2
    eip = np.exp(1j * Phi)
    ip = -1j * (dphi * eip / om - dphi0 / om0)
    im = 1j * (dphi * eip.conj() / om - dphi0 / om0)
    bp, bm = bp + bm * ip, bm - bp * im
    half = np.exp(-0.5j * Phi)
    ap, am = bp * half, bm * half.conj()
    c, s = np.cos(phi), np.sin(phi)
    u1 = c * ap - s * am
    u2 = s * ap + c * am
    th = np.exp(0.5j * (dk * t + 0.5 * kg * t * t))
    return u1 * th, u2 * th.conj()


def amplitudes_closed_form(params: ModelParams, n: int, p, t, psi0=None, method: str = "auto"):
    """Closed-form block amplitudes for ``kg > 0``.

    psi1(t) = c1 H_nu(b(t)) + c2 M(-nu/2; 1/2; b(t)^2)
    psi2(t) = 2 c G e^{-i theta(t)} [c1 H_{nu-1}(b(t)) - c2 b(t) M(1 - nu/2; 3/2; b(t)^2)]

    with nu = -i G^2/kg, c = e^{i pi/4}/sqrt(2 kg), b(t) = c (Delta_k + kg t)
    and (c1, c2) fixed by the t = 0 data through the Wronskian.

    ``method='auto'`` sums the series where double precision allows it and
    otherwise uses the uniform large-parameter form of the same solutions
    (see :func:`closed_form_regime`). ``p`` may be a scalar or a 1-D array;
    the result has shape ``(len(p), len(t))`` for array ``p``.
    """
    if params.kg == 0:
        raise DegenerateBranch("closed form requires kg > 0; use amplitudes_flat_branch")
    y1, y2 = _resolve_psi0(params, n, psi0)
    regime = closed_form_regime(params, n, p, t) if method == "auto" else method
    scalar_p = np.ndim(p) == 0
    scalar_t = np.ndim(t) == 0
    dks = np.atleast_1d(np.asarray(block_detuning(params, n, p), dtype=float))
    tt = np.atleast_1d(np.asarray(t, dtype=float))
    if regime == "trivial":
        out1 = np.full((len(dks), len(tt)), y1, dtype=complex)
        out2 = np.full((len(dks), len(tt)), y2, dtype=complex)
    elif regime == "series":
        rows = [_closed_form_series(params, n, float(dk), tt, y1, y2) for dk in dks]
        out1 = np.array([r[0] for r in rows])
        out2 = np.array([r[1] for r in rows])
    elif regime == "asymptotic":
        out1, out2 = _closed_form_asymptotic(params, n, dks, tt, y1, y2)
    else:
        raise ValueError(f"unknown method {method!r}")
    if scalar_t:
        out1, out2 = out1[:, 0], out2[:, 0]
    if scalar_p:
        out1, out2 = out1[0], out2[0]
    return out1, out2


# --- oracle ----------------------------------------------------------------


def rk4_step_limit(params: ModelParams, n: int, dk: float, t_end: float, phase_step: float = RK4_PHASE_STEP) -> float:
    G = coupling(params, n)
    rate = max(abs(dk), abs(dk + params.kg * t_end)) + 2 * G
    return phase_step / rate if rate > 0 else max(t_end, 1.0)


def amplitudes_ode_oracle(params: ModelParams, n: int, p, t_grid, psi0=None, phase_step: float = RK4_PHASE_STEP):
    """Classical RK4 integration of the block equations, output on ``t_grid``.

    The step keeps (|Delta_k| + 2 G) h below ``phase_step`` for every
    requested momentum; the nodes of one call share the smallest such step.
    The default is chosen so that halving the step moves the result by less
    than 1e-9 at the preset parameters. ``t_grid`` must start at 0 and
    increase.
    """
    y1, y2 = _resolve_psi0(params, n, psi0)
    t = np.atleast_1d(np.asarray(t_grid, dtype=float))
    if t[0] != 0 or np.any(np.diff(t) <= 0):
        raise ValueError("t_grid must start at 0 and increase")
    G = coupling(params, n)
    scalar_p = np.ndim(p) == 0
    dks = np.atleast_1d(np.asarray(block_detuning(params, n, p), dtype=float))
    h = min(rk4_step_limit(params, n, float(dk), float(t[-1]), phase_step) for dk in dks)
    out1 = np.empty((len(dks), len(t)), dtype=complex)
    out2 = np.empty((len(dks), len(t)), dtype=complex)
    start1 = np.full(len(dks), y1, dtype=complex)
    start2 = np.full(len(dks), y2, dtype=complex)
    _rk4.rk4_nodes(float(G), dks, float(params.kg), t, start1, start2, h, out1, out2)
    if scalar_p:
        return out1[0], out2[0]
    return out1, out2


# --- full state ------------------------------------------------------------


@dataclass(frozen=True)
class AmplitudeTrajectory:
    """Amplitudes on the (photon number, momentum node, time) grid.

    ``psi1[n, j, i]`` is the amplitude of |e, n, p_j> at t_i for n = 0..n_max;
    ``psi2[n, j, i]`` is the amplitude of |g, n+1, p_j>. ``g0[j]`` is the
    amplitude of |g, 0, p_j>, which couples to nothing and stays constant.
    """

    psi1: np.ndarray
    psi2: np.ndarray
    g0: np.ndarray
    params: ModelParams
    grid: MomentumGrid
    mode: str = "closed_form"

    @property
    def t(self):
        return self.params.t_grid

    @property
    def scaled_t(self):
        return self.params.scaled_t

    def excited_ladder(self) -> np.ndarray:
        """Amplitudes of |e, n> for n = 0..n_max+1, shape (n_max+2, P, T)."""
        z = np.zeros((1,) + self.psi1.shape[1:], dtype=complex)
        return np.concatenate([self.psi1, z])

    def ground_ladder(self) -> np.ndarray:
        """Amplitudes of |g, n> for n = 0..n_max+1, shape (n_max+2, P, T)."""
        g0 = np.broadcast_to(self.g0[None, :, None], (1,) + self.psi2.shape[1:])
        return np.concatenate([g0, self.psi2])

    def block_norms(self) -> np.ndarray:
        return np.abs(self.psi1) ** 2 + np.abs(self.psi2) ** 2

    def norm(self) -> np.ndarray:
        w = self.grid.weight
        total = np.einsum("j,njt->t", w, self.block_norms())
        return total + float(np.sum(w * np.abs(self.g0) ** 2))


class BlockFailure(NumericalError):
    """One or more (n, p) blocks could not be evaluated."""

    def __init__(self, failures):
        self.failures = failures
        lines = [f"n={n}: {type(e).__name__}: {e}" for n, e in failures]
        super().__init__("block failures:\n  " + "\n  ".join(lines))


def _evolve_n(params, grid, n, mode):
    p = grid.p
    t = params.t_grid
    if mode == "oracle":
        return amplitudes_ode_oracle(params, n, p, t)
    if params.kg == 0:
        return amplitudes_flat_branch(params, n, p, t) if len(p) > 1 else tuple(
            np.atleast_2d(a) for a in amplitudes_flat_branch(params, n, p, t)
        )
    return amplitudes_closed_form(params, n, p, t)


def evolve_state(params: ModelParams, mode: str = "closed_form", threads: int = 1) -> AmplitudeTrajectory:
    """Evolve every (n, p) block on ``params.t_grid``.

    ``mode='closed_form'`` uses the closed form for ``kg > 0`` and the flat
    branch for ``kg == 0``; ``mode='oracle'`` integrates every block with RK4.
    Blocks are independent, so the work is spread over ``threads`` workers and
    gathered in index order: the result does not depend on the thread count.
    """
    if mode not in ("closed_form", "oracle"):
        raise ValueError(f"unknown mode {mode!r}")
    grid = params.momentum_grid
    n_blocks = params.n_max + 1
    P, T = len(grid.p), len(params.t_grid)
    psi1 = np.empty((n_blocks, P, T), dtype=complex)
    psi2 = np.empty((n_blocks, P, T), dtype=complex)
    failures = []

    def work(n):
        try:
            a, b = _evolve_n(params, grid, n, mode)
            return n, np.reshape(a, (P, T)), np.reshape(b, (P, T)), None
        except NumericalError as exc:
            return n, None, None, exc

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(work, range(n_blocks)))
    else:
        results = [work(n) for n in range(n_blocks)]
    for n, a, b, exc in results:
        if exc is not None:
            failures.append((n, exc))
        else:
            psi1[n], psi2[n] = a, b
    if failures:
        raise BlockFailure(failures)
    g0 = np.full(P, params.weights.w[0] * params.c_g, dtype=complex)
    return AmplitudeTrajectory(psi1, psi2, g0, params, grid, mode)
