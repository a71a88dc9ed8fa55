"""Brute-force finite-dimensional validators.

Block matrices are assembled explicitly and their norms computed with the
Jacobi eigensolver, so every closed form in ``curves`` and ``specop`` can be
checked against an independent route at desk scale.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from . import curves
from .curves import ParamSet
from .exceptions import InvalidInputError, InvalidSpecError
from .numkit import herm_eig, norm_mat2
from .phicrit import LogPhi, PhiFunction, PowerPhi, check_phi_hypothesis
from .specop import SpectrumSpec, block_norm

MAX_DIM = 512
ORACLE_TOL = 1e-9


def _as_dense(A) -> np.ndarray:
    arr = np.asarray(A, dtype=complex)
    if arr.ndim != 2 or 0 in arr.shape:
        raise InvalidInputError(f"expected a non-empty 2-D matrix, got shape {arr.shape}")
    if max(arr.shape) > MAX_DIM:
        raise InvalidInputError(f"oracle dimensions are capped at {MAX_DIM}")
    if not np.all(np.isfinite(arr)):
        raise InvalidInputError("matrix has non-finite entries")
    return arr


def psd_function(G, fn: Callable) -> np.ndarray:
    """``fn(G)`` for a positive semidefinite ``G``; negative round-off eigenvalues floored at 0."""
    w, V = herm_eig(G)
    w = np.maximum(w, 0.0)
    return (V * np.asarray(fn(w), dtype=complex)) @ V.conj().T


def modulus(A) -> np.ndarray:
    """``|A| = (A^* A)^(1/2)``."""
    A = _as_dense(A)
    return psd_function(A.conj().T @ A, np.sqrt)


def phi_of_modulus(A, phi: PhiFunction) -> np.ndarray:
    """``phi(|A|)`` by functional calculus on the eigenvalues of ``A^* A``."""
    A = _as_dense(A)
    return psd_function(A.conj().T @ A, lambda w: phi(np.sqrt(w)))


def matrix_norm(M) -> float:
    """Largest singular value, via the larger eigenvalue of the smaller Gram matrix."""
    M = _as_dense(M)
    G = M.conj().T @ M if M.shape[1] <= M.shape[0] else M @ M.conj().T
    w, _ = herm_eig(G, vectors=False)
    return math.sqrt(max(float(w[-1]), 0.0))


def attaining_vector(M) -> np.ndarray:
    """Unit vector ``x`` with ``||M x|| = ||M||`` (top eigenvector of ``M^* M``)."""
    M = _as_dense(M)
    _, V = herm_eig(M.conj().T @ M)
    return V[:, -1]


def build_T(A, p: ParamSet, phi: PhiFunction) -> np.ndarray:
    """``[[a I_m, A], [c A^*, b phi(|A|)]]`` for an ``m x n`` matrix ``A``."""
    A = _as_dense(A)
    m, n = A.shape
    T = np.zeros((m + n, m + n), dtype=complex)
    T[:m, :m] = p.a * np.eye(m)
    T[:m, m:] = A
    T[m:, :m] = p.c * A.conj().T
    T[m:, m:] = p.b * phi_of_modulus(A, phi)
    return T


def build_T_tilde(A, p: ParamSet, phi: PhiFunction) -> np.ndarray:
    """``[[a I_m, |A^*|], [c |A^*|, b phi(|A^*|)]]`` with ``|A^*| = (A A^*)^(1/2)``."""
    A = _as_dense(A)
    m = A.shape[0]
    G = A @ A.conj().T
    absA = psd_function(G, np.sqrt)
    T = np.zeros((2 * m, 2 * m), dtype=complex)
    T[:m, :m] = p.a * np.eye(m)
    T[:m, m:] = absA
    T[m:, :m] = p.c * absA
    T[m:, m:] = p.b * psd_function(G, lambda w: phi(np.sqrt(w)))
    return T


def build_S(A, p: ParamSet) -> np.ndarray:
    """``[[a I, A], [c A^*, b I]]``."""
    A = _as_dense(A)
    m, n = A.shape
    S = np.zeros((m + n, m + n), dtype=complex)
    S[:m, :m] = p.a * np.eye(m)
    S[:m, m:] = A
    S[m:, :m] = p.c * A.conj().T
    S[m:, m:] = p.b * np.eye(n)
    return S


@dataclass(frozen=True)
class Comparison:
    name: str
    lhs: float
    rhs: float
    extra: dict = field(default_factory=dict)

    @property
    def difference(self) -> float:
        return abs(self.lhs - self.rhs)

    @property
    def scaled_difference(self) -> float:
        """``|lhs - rhs| / max(1, |lhs|, |rhs|)``."""
        return self.difference / max(1.0, abs(self.lhs), abs(self.rhs))

    def ok(self, tol: float = ORACLE_TOL) -> bool:
        return self.scaled_difference < tol


def compare_block_norm(spec: SpectrumSpec, p: ParamSet, phi: PhiFunction) -> Comparison:
    """Brute-force ``||T||`` for ``A = diag(sigma_p)`` against ``specop.block_norm``."""
    if not spec.is_finite or not spec.eigenvalues:
        raise InvalidSpecError("comparison needs a finite list of eigenvalues and no intervals")
    A = np.diag(np.asarray(spec.eigenvalues, dtype=float))
    brute = matrix_norm(build_T(A, p, phi))
    return Comparison("block_norm", brute, block_norm(spec, p, phi))


def compare_T_Ttilde(A, p: ParamSet, phi: PhiFunction) -> Comparison:
    """``||T||`` against ``||T~||`` for an arbitrary rectangular ``A``."""
    A = _as_dense(A)
    check_phi_hypothesis(phi, matrix_norm(A))
    return Comparison("T_vs_Ttilde", matrix_norm(build_T(A, p, phi)),
                      matrix_norm(build_T_tilde(A, p, phi)))


def verify_lemma23(p: ParamSet, A) -> Comparison:
    """Closed form for ``||[[a I, A], [c A^*, b I]]||`` against brute force.

    ``extra['printed']`` holds the value given by the leading term
    ``|a|^2+|b|^2+|c|^2+1``, which only matches when ``||A|| = 1``.
    """
    A = _as_dense(A)
    nA = matrix_norm(A)
    brute = matrix_norm(build_S(A, p))
    return Comparison("lemma23", curves.norm_block_constant(p, nA), brute,
                      {"printed": curves.norm_block_constant_printed(p, nA), "normA": nA})


def random_complex(rng: np.random.Generator, shape) -> np.ndarray:
    return rng.normal(size=shape) + 1j * rng.normal(size=shape)


def random_params(rng: np.random.Generator, scale: float = 2.0) -> ParamSet:
    a, b, c = random_complex(rng, 3) * scale / 2
    return ParamSet(a, b, c)


PHI_BATTERY: tuple[PhiFunction, ...] = (
    PowerPhi(1, 1, 2),
    PowerPhi(0, 1, 5),
    PowerPhi(0, 2, 5),
    PowerPhi(0.5, 1, 0.5),
    PowerPhi(1, 0, 0),
    PowerPhi(0, 1, 4),
    LogPhi(1),
    LogPhi(3),
)


@dataclass
class BatteryReport:
    seed: int
    trials: int
    max_dim: int
    tol: float
    deviations: dict[str, float]

    @property
    def passed(self) -> bool:
        return all(v < self.tol for v in self.deviations.values())


def run_battery(seed: int, trials: int, max_dim: int, tol: float = ORACLE_TOL) -> BatteryReport:
    """Random cross-checks of every closed form.

    Reports the worst deviation per check, each scaled by ``max(1, value)``.
    """
    if max_dim < 1:
        raise InvalidInputError("max_dim must be at least 1")
    rng = np.random.default_rng(seed)
    dev = {"mat2_closed_form": 0.0, "lemma23": 0.0, "T_vs_Ttilde": 0.0, "block_norm_diag": 0.0}
    if trials <= 0:
        return BatteryReport(seed, 0, max_dim, tol, {})
    for _ in range(trials):
        p = random_params(rng)
        phi = PHI_BATTERY[int(rng.integers(len(PHI_BATTERY)))]
        t = float(rng.uniform(0, 3))
        v = float(curves.eval_f(p, phi, t))
        dev["mat2_closed_form"] = max(dev["mat2_closed_form"],
                                      abs(v - norm_mat2(curves.make_Mt(p, phi, t))) / max(1.0, v))
        m, n = (int(x) for x in rng.integers(1, max_dim + 1, size=2))
        A = random_complex(rng, (m, n))
        dev["lemma23"] = max(dev["lemma23"], verify_lemma23(p, A).scaled_difference)
        dev["T_vs_Ttilde"] = max(dev["T_vs_Ttilde"], compare_T_Ttilde(A, p, phi).scaled_difference)
        k = int(rng.integers(1, max_dim + 1))
        spec = SpectrumSpec(bound=1.0, eigenvalues=tuple(rng.uniform(0, 1, size=k)))
        dev["block_norm_diag"] = max(dev["block_norm_diag"], compare_block_norm(spec, p, phi).scaled_difference)
    return BatteryReport(seed, trials, max_dim, tol, dev)
