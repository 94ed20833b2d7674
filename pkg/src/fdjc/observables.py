"""Atomic and field observables computed from an :class:`AmplitudeTrajectory`.

Ladder convention: ``E[n]`` is the amplitude of |e, n> and ``Gd[n]`` that of
|g, n>, for n = 0..n_max+1 (see ``AmplitudeTrajectory.excited_ladder`` and
``ground_ladder``). Every sum over momentum uses the quadrature weights of the
trajectory's grid.

Besides the streaming formulas, :func:`dense_observables` recomputes the same
quantities from full state vectors and dense operator matrices. It is slow and
exists as an independent cross-check.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .dynamics import AmplitudeTrajectory
from .errors import DegenerateField
from .fockspace import build_fock_matrices

OBSERVABLES = ("W", "Fx", "Fy", "dp", "G2", "S1", "S2")


@dataclass(frozen=True)
class ObservableSeries:
    """A named real time series on the trajectory's time grid."""

    name: str
    t: np.ndarray = field(repr=False)
    scaled_t: np.ndarray = field(repr=False)
    value: np.ndarray = field(repr=False)

    def __post_init__(self):
        if not (len(self.t) == len(self.scaled_t) == len(self.value)):
            raise ValueError("series arrays must have equal length")
        if not np.all(np.isfinite(self.value)):
            raise ValueError(f"series {self.name!r} has non-finite values")

    def time_average(self) -> float:
        """Trapezoidal average over the full window."""
        x = self.scaled_t
        if len(x) < 2:
            return float(self.value[0])
        return float(np.trapezoid(self.value, x) / (x[-1] - x[0]))


def _series(traj, name, value):
    return ObservableSeries(name, traj.t, traj.scaled_t, np.asarray(value, dtype=float))


def _pweighted(traj, x):
    """Sum over photon number and momentum nodes of x[n, p, t] with grid weights."""
    return np.einsum("j,njt->t", traj.grid.weight, x)


def population_inversion(traj: AmplitudeTrajectory) -> ObservableSeries:
    """W(t) = <sigma_z>, excited minus ground probability (|g, 0> included)."""
    e = traj.excited_ladder()
    g = traj.ground_ladder()
    return _series(traj, "W", _pweighted(traj, np.abs(e) ** 2 - np.abs(g) ** 2))


def _coherence(traj):
    # sum_n psi_e,n conj(psi_g,n) at equal photon number
    e = traj.excited_ladder()
    g = traj.ground_ladder()
    return _pweighted(traj, e * g.conj())


def dipole_expectations(traj: AmplitudeTrajectory, omega: float | None = None):
    """<sigma_x>(t) and <sigma_y>(t).

    Both are built from ``sum_n psi_e,n conj(psi_g,n) exp(-i omega t)``: the
    real part gives sigma_x and the imaginary part sigma_y. ``omega`` defaults
    to the atomic frequency stored in the run parameters.
    """
    if omega is None:
        omega = traj.params.omega
    c = _coherence(traj) * np.exp(-1j * omega * traj.t)
    return _series(traj, "sx", c.real), _series(traj, "sy", c.imag)


def dipole_squeezing(traj: AmplitudeTrajectory, omega: float | None = None):
    """Squeezing functions F_i = 1 - 4 <sigma_i>^2 - |<sigma_z>|; F_i < 0 means squeezing."""
    sx, sy = dipole_expectations(traj, omega)
    w = np.abs(population_inversion(traj).value)
    fx = 1 - 4 * sx.value**2 - w
    fy = 1 - 4 * sy.value**2 - w
    return _series(traj, "Fx", fx), _series(traj, "Fy", fy)


def momentum_diffusion(traj: AmplitudeTrajectory, frame: str = "label") -> ObservableSeries:
    """Momentum spread Delta p(t) in recoil units.

    ``frame='label'`` takes moments of the momentum label p carried by each
    (n, p) block, weighted by that block's population. Every block conserves
    its own norm, so this spread stays at its initial value 1/2.

    ``frame='lab'`` adds the recoil the internal state carries. The excited
    partner of a block sits one recoil above the ground partner, so the lab
    momentum is p + 1/2 for |e> and p - 1/2 for |g>, measured from the midpoint.
    """
    p = traj.grid.p[None, :, None]
    e2 = np.abs(traj.excited_ladder()) ** 2
    g2 = np.abs(traj.ground_ladder()) ** 2
    if frame == "label":
        m1 = _pweighted(traj, p * (e2 + g2))
        m2 = _pweighted(traj, p**2 * (e2 + g2))
    elif frame == "lab":
        pe, pg = p + 0.5, p - 0.5
        m1 = _pweighted(traj, pe * e2 + pg * g2)
        m2 = _pweighted(traj, pe**2 * e2 + pg**2 * g2)
    else:
        raise ValueError(f"unknown frame {frame!r}")
    var = np.maximum(m2 - m1**2, 0.0)
    return _series(traj, "dp", np.sqrt(var))


def _photon_probabilities(traj):
    # shape (n_max+2, T)
    e2 = np.abs(traj.excited_ladder()) ** 2
    g2 = np.abs(traj.ground_ladder()) ** 2
    return np.einsum("j,njt->nt", traj.grid.weight, e2 + g2)


def photon_distribution(traj: AmplitudeTrajectory, t_index: int) -> np.ndarray:
    """p(n, t) for n = 0..n_max+1 at the stored time ``t_index``."""
    T = len(traj.t)
    if not -T <= t_index < T:
        raise IndexError(f"t_index {t_index} outside 0..{T - 1}")
    e2 = np.abs(traj.excited_ladder()[:, :, t_index]) ** 2
    g2 = np.abs(traj.ground_ladder()[:, :, t_index]) ** 2
    return (e2 + g2) @ traj.grid.weight


def g2(traj: AmplitudeTrajectory) -> ObservableSeries:
    """Second-order correlation (<n^2> - <n>) / <n>^2 of the cavity field."""
    pn = _photon_probabilities(traj)
    n = np.arange(pn.shape[0], dtype=float)[:, None]
    m1 = np.sum(n * pn, axis=0)
    m2 = np.sum(n * n * pn, axis=0)
    if np.any(m1 < 1e-12):
        raise DegenerateField("mean photon number vanishes; G2 undefined")
    return _series(traj, "G2", (m2 - m1) / m1**2)


def _schrodinger_ladders(traj, nu):
    """Both ladders with the free-field phases exp(-i nu n f^2(n) t) restored."""
    spec = traj.params.spec
    n = np.arange(traj.psi1.shape[0] + 1)
    phase = np.exp(-1j * nu * spec.nf2(n)[:, None] * traj.t[None, :])[:, None, :]
    return traj.excited_ladder() * phase, traj.ground_ladder() * phase


def field_moments(traj: AmplitudeTrajectory, nu: float | None = None):
    """xi = <A^+ A>, eta = <A> e^{i nu t}, zeta = <A^2> e^{2 i nu t}.

    Returns ``(xi, eta, zeta)`` as plain arrays (``xi`` real, the others
    complex). The interaction-picture amplitudes are first multiplied by the
    free-field phases so that terms with different photon numbers interfere
    with the correct relative phase.
    """
    if nu is None:
        nu = traj.params.nu
    spec = traj.params.spec
    e, g = _schrodinger_ladders(traj, nu)
    n = np.arange(e.shape[0])
    nf2 = spec.nf2(n)
    # <n-1|A|n> = sqrt(n f^2(n));  <n-2|A^2|n> = sqrt(n f^2(n) (n-1) f^2(n-1))
    a1 = np.sqrt(nf2[1:])[:, None, None]
    a2 = np.sqrt(nf2[2:] * nf2[1:-1])[:, None, None]
    w = traj.grid.weight
    xi = np.einsum("j,njt->t", w, nf2[:, None, None] * (np.abs(e) ** 2 + np.abs(g) ** 2))
    amp1 = sum(np.einsum("j,njt->t", w, x[:-1].conj() * a1 * x[1:]) for x in (e, g))
    amp2 = sum(np.einsum("j,njt->t", w, x[:-2].conj() * a2 * x[2:]) for x in (e, g))
    eta = amp1 * np.exp(1j * nu * traj.t)
    zeta = amp2 * np.exp(2j * nu * traj.t)
    return xi, eta, zeta


def quadrature_squeezing(traj: AmplitudeTrajectory, nu: float | None = None):
    """Deformed quadrature squeezing parameters S1, S2 (S_j < 0 means squeezing).

    S1 = 2 xi + 2 Re zeta - 4 (Re eta)^2 and S2 = 2 xi - 2 Re zeta - 4 (Im eta)^2.
    """
    xi, eta, zeta = field_moments(traj, nu)
    s1 = 2 * xi + 2 * zeta.real - 4 * eta.real**2
    s2 = 2 * xi - 2 * zeta.real - 4 * eta.imag**2
    return _series(traj, "S1", s1), _series(traj, "S2", s2)


def compute(traj: AmplitudeTrajectory, names=OBSERVABLES) -> dict:
    """Evaluate the named observables; returns ``{name: ObservableSeries}``."""
    out = {}
    cache = {}
    for name in names:
        if name == "W":
            out[name] = population_inversion(traj)
        elif name in ("Fx", "Fy"):
            if "F" not in cache:
                cache["F"] = dipole_squeezing(traj)
            out[name] = cache["F"][0 if name == "Fx" else 1]
        elif name == "dp":
            out[name] = momentum_diffusion(traj)
        elif name == "G2":
            out[name] = g2(traj)
        elif name in ("S1", "S2"):
            if "S" not in cache:
                cache["S"] = quadrature_squeezing(traj)
            out[name] = cache["S"][0 if name == "S1" else 1]
        else:
            raise KeyError(f"unknown observable {name!r}; choose from {OBSERVABLES}")
    return out


# --- dense cross-check -----------------------------------------------------


def _dense_states(traj, nu):
    """State vectors v[p, :, t] on atom (x) field (atom index slow), Schrodinger phases."""
    dim = traj.psi1.shape[0] + 1
    spec = traj.params.spec
    m = build_fock_matrices(spec, dim)
    nA = np.real(np.diag(m.A_dag @ m.A))
    v = np.concatenate([traj.excited_ladder(), traj.ground_ladder()])  # (2 dim, P, T)
    phase = np.exp(-1j * nu * np.concatenate([nA, nA])[:, None] * traj.t[None, :])
    return np.moveaxis(v, 0, 1) * phase[None], m


def _expect(op, v, w):
    # sum_p w_p <v_p(t)| op |v_p(t)>  ->  shape (T,)
    return np.einsum("j,jat,ab,jbt->t", w, v.conj(), op, v)


def dense_observables(traj: AmplitudeTrajectory, omega: float | None = None, nu: float | None = None) -> dict:
    """All observables from full state vectors and dense matrices.

    Intended for small truncations; cost grows like dim^2 per (p, t) point.
    """
    omega = traj.params.omega if omega is None else omega
    nu = traj.params.nu if nu is None else nu
    v, m = _dense_states(traj, nu)
    dim = m.dim
    w = traj.grid.weight
    t = traj.t
    eye = np.eye(dim)
    sz = np.kron(np.diag([1.0, -1.0]), eye)
    s_minus = np.kron(np.array([[0, 0], [1, 0]]), eye)
    n_op = np.kron(np.eye(2), m.n_op)
    A = np.kron(np.eye(2), m.A)
    AdA = np.kron(np.eye(2), m.A_dag @ m.A)
    A2 = A @ A

    W = _expect(sz, v, w).real
    # interaction-picture coherence: undo the (common) field phases first
    v_int = np.moveaxis(np.concatenate([traj.excited_ladder(), traj.ground_ladder()]), 0, 1)
    coh = _expect(s_minus, v_int, w) * np.exp(-1j * omega * t)
    sx, sy = coh.real, coh.imag
    n1 = _expect(n_op, v, w).real
    n2 = _expect(n_op @ n_op, v, w).real
    p = traj.grid.p
    norms = np.einsum("jat->jt", np.abs(v) ** 2)
    m1 = np.einsum("j,j,jt->t", w, p, norms)
    m2 = np.einsum("j,j,jt->t", w, p**2, norms)
    xi = _expect(AdA, v, w).real
    eta = _expect(A, v, w) * np.exp(1j * nu * t)
    zeta = _expect(A2, v, w) * np.exp(2j * nu * t)
    return {
        "W": W,
        "Fx": 1 - 4 * sx**2 - np.abs(W),
        "Fy": 1 - 4 * sy**2 - np.abs(W),
        "dp": np.sqrt(np.maximum(m2 - m1**2, 0.0)),
        "G2": (n2 - n1) / n1**2,
        "S1": 2 * xi + 2 * zeta.real - 4 * eta.real**2,
        "S2": 2 * xi - 2 * zeta.real - 4 * eta.imag**2,
    }


def quadrature_variances(traj: AmplitudeTrajectory, nu: float | None = None):
    """Dense evaluation of Var(X1), Var(X2) and <B> for the deformed quadratures.

    X1 = (A e^{i nu t} + A^+ e^{-i nu t}) / 2, X2 = (A e^{i nu t} - A^+ e^{-i nu t}) / 2i
    and B = [A, A^+] = (n+1) f^2(n+1) - n f^2(n). Also returns the
    variance-form squeezing parameters S_j = 4 Var(X_j) - <B>.
    """
    nu = traj.params.nu if nu is None else nu
    v, m = _dense_states(traj, nu)
    w = traj.grid.weight
    # extend by one level so that A^+ acting on the top occupied level is exact
    dim = m.dim
    big = build_fock_matrices(traj.params.spec, dim + 1)
    pad = np.zeros((v.shape[0], 2 * (dim + 1), v.shape[2]), dtype=complex)
    pad[:, :dim] = v[:, :dim]
    pad[:, dim + 1 : 2 * dim + 1] = v[:, dim:]
    I2 = np.eye(2)
    A = np.kron(I2, big.A)
    Ad = np.kron(I2, big.A_dag)
    B = A @ Ad - Ad @ A
    ph = np.exp(1j * nu * traj.t)
    out = {}
    mean_a = _expect(A, pad, w) * ph
    mean_a2 = _expect(A @ A, pad, w) * ph**2
    n_aa = _expect(Ad @ A, pad, w).real
    n_bb = _expect(A @ Ad, pad, w).real
    # 4 X1^2 = A^2 e^{2i} + A+^2 e^{-2i} + A A+ + A+ A
    x1sq = (2 * mean_a2.real + n_aa + n_bb) / 4
    x2sq = (-2 * mean_a2.real + n_aa + n_bb) / 4
    out["var_x1"] = x1sq - mean_a.real**2
    out["var_x2"] = x2sq - mean_a.imag**2
    out["B"] = _expect(B, pad, w).real
    out["S1"] = 4 * out["var_x1"] - out["B"]
    out["S2"] = 4 * out["var_x2"] - out["B"]
    return out
