"""Truncated Fock-space matrices of the deformed ladder operators.

The matrices exist to check the deformed algebra and to serve as a dense,
independent route to field expectation values. They are never used for time
evolution.

Product-space convention: atom (x) field with the atom index slow, atom
basis ordered (|e>, |g>), so the state |e, n> sits at index ``n`` and
|g, n> at ``dim + n``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .deformation import DeformationSpec


@dataclass(frozen=True)
class FockMatrices:
    dim: int
    a: np.ndarray
    a_dag: np.ndarray
    A: np.ndarray
    A_dag: np.ndarray
    n_op: np.ndarray


def _frozen(m):
    m.setflags(write=False)
    return m


def build_fock_matrices(spec: DeformationSpec, dim: int) -> FockMatrices:
    """Dense matrices of a, a^+, A = a f(n), A^+ = f(n) a^+ and n on ``dim`` levels.

    Entries are written from their closed formulas
    (``<n-1|A|n> = sqrt(n) f(n)``) rather than by multiplying matrices.
    """
    if dim < 2:
        raise ValueError("dim must be >= 2")
    n = np.arange(1, dim)
    a = np.zeros((dim, dim), dtype=complex)
    A = np.zeros((dim, dim), dtype=complex)
    a[n - 1, n] = np.sqrt(n)
    A[n - 1, n] = np.sqrt(spec.nf2(n))
    return FockMatrices(
        dim=dim,
        a=_frozen(a),
        a_dag=_frozen(a.conj().T.copy()),
        A=_frozen(A),
        A_dag=_frozen(A.conj().T.copy()),
        n_op=_frozen(np.diag(np.arange(dim)).astype(complex)),
    )


def _comm(x, y):
    return x @ y - y @ x


def _block_residual(m, keep):
    return float(np.max(np.abs(m[np.ix_(keep, keep)]))) if len(keep) else 0.0


def verify_deformed_commutator(spec: DeformationSpec, dim: int) -> float:
    """Largest residual of the deformed Heisenberg algebra on the safe block.

    Checks ``[A, A^+] = (n+1) f^2(n+1) - n f^2(n)``, ``[A, n] = A`` and
    ``[A^+, n] = -A^+``. The highest Fock level is excluded because
    truncation corrupts the commutator there.
    """
    if dim < 3:
        raise ValueError("dim must be >= 3")
    m = build_fock_matrices(spec, dim)
    k = np.arange(dim)
    target = np.diag(spec.nf2(k + 1) - spec.nf2(k))
    keep = np.arange(dim - 1)
    return max(
        _block_residual(_comm(m.A, m.A_dag) - target, keep),
        _block_residual(_comm(m.A, m.n_op) - m.A, keep),
        _block_residual(_comm(m.A_dag, m.n_op) + m.A_dag, keep),
    )


@dataclass(frozen=True)
class AtomFieldOperators:
    """Operators on the atom (x) field space used by the su(2) checks."""

    dim: int
    c: np.ndarray
    s_plus: np.ndarray
    s_minus: np.ndarray
    s0: np.ndarray
    xi: np.ndarray
    interaction: np.ndarray
    safe: np.ndarray


def atom_field_operators(spec: DeformationSpec, dim: int) -> AtomFieldOperators:
    """Deformed su(2) generators S+^d, S-^d, S0 and the excitation number c.

    ``c = n + |e><e|``; ``c**(-1/2)`` is taken as 0 on |g,0>, where c = 0.
    """
    m = build_fock_matrices(spec, dim)
    eye = np.eye(dim)
    pe = np.array([[1, 0], [0, 0]], dtype=complex)
    pg = np.array([[0, 0], [0, 1]], dtype=complex)
    sp = np.array([[0, 1], [0, 0]], dtype=complex)  # |e><g|
    sm = sp.T.copy()
    k = np.arange(dim, dtype=float)
    c_diag = np.concatenate([k + 1, k])
    inv_sqrt_c = np.zeros_like(c_diag)
    nz = c_diag > 0
    inv_sqrt_c[nz] = 1 / np.sqrt(c_diag[nz])
    f_op = np.diag(np.sqrt(spec.f2(k)))
    s_plus = np.kron(sp, m.a @ f_op) @ np.diag(inv_sqrt_c)
    s_minus = np.diag(inv_sqrt_c) @ np.kron(sm, f_op @ m.a_dag)
    s0 = 0.5 * np.kron(np.diag([1.0, -1.0]), eye)
    xi_diag = np.zeros_like(c_diag)
    xi_num = np.concatenate([spec.nf2(k + 1), spec.nf2(k)])
    xi_diag[nz] = xi_num[nz] / c_diag[nz]
    interaction = np.kron(sp, m.A) + np.kron(sm, m.A_dag)
    # |e, dim-1> would couple to |g, dim>, which the truncation drops
    safe = np.concatenate([np.arange(dim - 1), dim + np.arange(dim - 1)])
    return AtomFieldOperators(
        dim=dim,
        c=np.diag(c_diag).astype(complex),
        s_plus=s_plus,
        s_minus=s_minus,
        s0=s0.astype(complex),
        xi=np.diag(xi_diag).astype(complex),
        interaction=interaction,
        safe=safe,
    )


def verify_su2_deformed(spec: DeformationSpec, dim: int) -> float:
    """Largest residual of ``[S-, S+] = -2 xi S0`` and ``[S0, S+-] = +-S+-``."""
    if dim < 3:
        raise ValueError("dim must be >= 3")
    ops = atom_field_operators(spec, dim)
    keep = ops.safe
    return max(
        _block_residual(_comm(ops.s_minus, ops.s_plus) + 2 * ops.xi @ ops.s0, keep),
        _block_residual(_comm(ops.s0, ops.s_plus) - ops.s_plus, keep),
        _block_residual(_comm(ops.s0, ops.s_minus) + ops.s_minus, keep),
    )


def verify_constant_of_motion(spec: DeformationSpec, dim: int) -> float:
    """Residual of ``[c, sigma+ A + A^+ sigma-] = 0`` on the safe block."""
    ops = atom_field_operators(spec, dim)
    return _block_residual(_comm(ops.c, ops.interaction), ops.safe)


def run_checks(specs, dim: int = 20, tol: float = 1e-10):
    """Run every algebra check; returns rows ``(check, spec, residual, ok)``."""
    rows = []
    for spec in specs:
        for name, fn in (
            ("deformed_commutator", verify_deformed_commutator),
            ("su2_deformed", verify_su2_deformed),
            ("constant_of_motion", verify_constant_of_motion),
        ):
            r = fn(spec, dim)
            rows.append((name, spec, r, r <= tol))
    return rows
