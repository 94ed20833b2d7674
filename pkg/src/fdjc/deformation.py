"""Nonlinearity functions f(n), deformed factorials and q-coherent weights."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError, NoConvergence

KINDS = ("identity", "q_type", "kerr")


@dataclass(frozen=True)
class DeformationSpec:
    """Choice of deformation function f(n).

    ``identity``: f = 1. ``q_type``: f(n) = sqrt((1 - q**n) / (n (1 - q))).
    ``kerr``: f(n) = sqrt(1 + kappa (n - 1)).
    """

    kind: str = "identity"
    q: float = 1.0
    kappa: float = 0.0

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"kind must be one of {KINDS}, got {self.kind!r}")
        if self.kind == "q_type" and not (self.q > 0 and self.q != 1):
            raise ValueError("q_type needs q > 0 and q != 1")
        if self.kind == "kerr" and not self.kappa >= 0:
            raise ValueError("kerr needs kappa >= 0")

    @classmethod
    def identity(cls):
        return cls("identity")

    @classmethod
    def q_type(cls, q):
        return cls("q_type", q=float(q))

    @classmethod
    def kerr(cls, kappa):
        return cls("kerr", kappa=float(kappa))

    def f2(self, n):
        """Vectorized f(n)**2 for integer array ``n >= 0`` (with f(0) = 1)."""
        n = np.asarray(n, dtype=float)
        if np.any(n < 0):
            raise DomainError("photon number must be non-negative")
        out = np.ones_like(n)
        pos = n > 0
        if self.kind == "q_type":
            m = n[pos]
            # expm1 keeps 1 - q**n accurate when q is close to 1
            out[pos] = np.expm1(m * math.log(self.q)) / (m * (self.q - 1.0))
        elif self.kind == "kerr":
            out[pos] = 1.0 + self.kappa * (n[pos] - 1.0)
            if np.any(out <= 0):
                raise DomainError("Kerr radicand is not positive")
        return out

    def nf2(self, n):
        """Vectorized n f(n)**2, the deformed number operator eigenvalue."""
        n = np.asarray(n, dtype=float)
        return n * self.f2(n)


def f_value(spec: DeformationSpec, n: int) -> float:
    """Deformation function f(n); f(0) is fixed to 1 by convention."""
    if n < 0:
        raise DomainError("n must be >= 0")
    if n == 0 or spec.kind == "identity":
        return 1.0
    if spec.kind == "q_type":
        rad = math.expm1(n * math.log(spec.q)) / (n * (spec.q - 1.0))
    else:
        rad = 1.0 + spec.kappa * (n - 1)
    if rad < 0:
        raise DomainError(f"negative radicand {rad} for f({n})")
    return math.sqrt(rad)


def log_deformed_factorial(spec: DeformationSpec, n: int) -> float:
    """log of [n f^2(n)]! = prod_{k=1..n} k f(k)**2 (empty product = 1)."""
    if n < 0:
        raise DomainError("n must be >= 0")
    if n == 0:
        return 0.0
    k = np.arange(1, n + 1)
    return float(math.fsum(np.log(spec.nf2(k))))


def deformed_factorial(spec: DeformationSpec, n: int) -> float:
    """[n f^2(n)]!, evaluated through :func:`log_deformed_factorial`.

    Raises ``OverflowError`` when the value exceeds the double range; use the
    log form for large ``n``.
    """
    return math.exp(log_deformed_factorial(spec, n))


@dataclass(frozen=True)
class PhotonWeights:
    """Truncated photon-number amplitudes w(0..n_max) of the initial field."""

    w: np.ndarray = field(repr=False)
    alpha: float = 0.0

    def __post_init__(self):
        w = np.array(self.w, dtype=float)
        w.setflags(write=False)
        object.__setattr__(self, "w", w)

    @property
    def n_max(self) -> int:
        return len(self.w) - 1

    def padded(self, length: int) -> np.ndarray:
        """Weights zero-padded (or cut) to ``length`` entries."""
        out = np.zeros(length)
        m = min(length, len(self.w))
        out[:m] = self.w[:m]
        return out

    @classmethod
    def fock(cls, m: int):
        """Number state |m>."""
        w = np.zeros(m + 1)
        w[m] = 1.0
        return cls(w, alpha=float("nan"))


def q_coherent_weights(spec: DeformationSpec, alpha: float, tail_tol: float = 1e-12) -> PhotonWeights:
    """Weights of the nonlinear coherent state sum_n w(n)|n>.

    w(n) is proportional to alpha**n / sqrt([n f^2(n)]!). The support is cut
    at the smallest n_max whose discarded tail probability is below
    ``tail_tol``, then renormalized.

    Raises
    ------
    NoConvergence
        The scan window (4 ceil(alpha**2) + 200 terms) never reaches the
        requested tail bound, e.g. a q < 1 deformation with alpha beyond the
        radius of convergence.
    """
    if alpha < 0:
        raise DomainError("alpha must be >= 0")
    if not tail_tol > 0:
        raise ValueError("tail_tol must be positive")
    if alpha == 0:
        return PhotonWeights(np.array([1.0]), alpha=0.0)
    scan = 4 * math.ceil(alpha**2) + 200
    n = np.arange(scan + 1)
    logfact = np.concatenate([[0.0], np.cumsum(np.log(spec.nf2(n[1:])))])
    logw2 = 2 * n * math.log(alpha) - logfact
    prob = np.exp(logw2 - logw2.max())
    prob /= math.fsum(prob)
    # tail[k] = sum_{m > k} prob[m]
    tail = np.concatenate([np.cumsum(prob[::-1])[::-1][1:], [0.0]])
    ok = np.nonzero(tail < tail_tol)[0]
    # the last index always has an empty tail; it only counts if the terms
    # have actually died off by then
    if len(ok) == 0 or ok[0] == scan and prob[-1] >= tail_tol:
        raise NoConvergence(
            f"q-coherent weights: tail above {tail_tol} after {scan} terms"
        )
    n_max = int(ok[0])
    w = np.sqrt(prob[: n_max + 1])
    w /= math.sqrt(math.fsum(w**2))
    return PhotonWeights(w, alpha=float(alpha))
