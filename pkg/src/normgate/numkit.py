"""Small numerical toolkit: 2x2 spectral norms, a Jacobi Hermitian
eigensolver, bisection and grid + golden-section maximization.

Everything here is a pure function of its inputs.
"""
from __future__ import annotations

import math
from typing import Callable, NamedTuple

import numpy as np

from .exceptions import BracketError, ConsistencyError, InvalidInputError

RADICAND_CLAMP = 1e-12
JACOBI_TOL = 1e-13
JACOBI_MAX_SWEEPS = 60
GOLDEN_WIDTH = 1e-12
INVPHI = (math.sqrt(5.0) - 1.0) / 2.0


class Bracket(NamedTuple):
    lo: float
    hi: float

    @classmethod
    def of(cls, b) -> "Bracket":
        lo, hi = float(b[0]), float(b[1])
        if not (math.isfinite(lo) and math.isfinite(hi)) or not lo < hi:
            raise BracketError(f"invalid bracket [{lo}, {hi}]: need finite lo < hi")
        return cls(lo, hi)

    @property
    def width(self) -> float:
        return self.hi - self.lo


def as_mat2(M) -> np.ndarray:
    arr = np.asarray(M, dtype=complex)
    if arr.shape != (2, 2):
        raise InvalidInputError(f"expected a 2x2 matrix, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise InvalidInputError("matrix has non-finite entries")
    return arr


def as_hermitian(H, rtol: float = 1e-12) -> np.ndarray:
    arr = np.asarray(H, dtype=complex)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
        raise InvalidInputError(f"expected a square matrix, got shape {arr.shape}")
    if arr.shape[0] == 0:
        raise InvalidInputError("dimension must be at least 1")
    if not np.all(np.isfinite(arr)):
        raise InvalidInputError("matrix has non-finite entries")
    scale = max(1.0, float(np.max(np.abs(arr))))
    if np.max(np.abs(arr - arr.conj().T)) > rtol * scale:
        raise InvalidInputError("matrix is not Hermitian")
    # symmetrize away round-off so the solver sees an exactly Hermitian input
    return (arr + arr.conj().T) / 2


def norm_mat2(M) -> float:
    """Spectral norm of a 2x2 complex matrix.

    The square of the norm is the larger eigenvalue of ``G = M^* M``,
    ``(tr + sqrt(tr^2 - 4 det)) / 2`` with ``det G = |det M|^2``. The
    radicand is evaluated as ``(G11 - G22)^2 + 4 |G12|^2``, the same number
    without the cancellation that ruins ``tr^2 - 4 det`` when the singular
    values nearly coincide; the trace/determinant form is kept as a
    consistency check.
    """
    # scalar arithmetic: numpy per-call overhead dominates at 2x2
    m00, m01, m10, m11 = as_mat2(M).ravel().tolist()
    g11 = abs(m00) ** 2 + abs(m10) ** 2
    g22 = abs(m01) ** 2 + abs(m11) ** 2
    g12 = m00.conjugate() * m01 + m10.conjugate() * m11
    tr = g11 + g22
    det = abs(m00 * m11 - m01 * m10) ** 2
    if tr * tr - 4.0 * det < -RADICAND_CLAMP * tr * tr:
        raise ConsistencyError(f"negative radicand {tr * tr - 4.0 * det!r} for a PSD 2x2 matrix")
    rad = (g11 - g22) ** 2 + 4.0 * abs(g12) ** 2
    return math.sqrt((tr + math.sqrt(rad)) / 2.0)


def _round_robin(n: int) -> list[list[tuple[int, int]]]:
    """Disjoint pair rounds covering every (p, q) once (circle method)."""
    players = list(range(n)) + ([-1] if n % 2 else [])
    m = len(players)
    rounds = []
    for _ in range(m - 1):
        pairs = []
        for i in range(m // 2):
            p, q = players[i], players[m - 1 - i]
            if p >= 0 and q >= 0:
                pairs.append((min(p, q), max(p, q)))
        rounds.append(pairs)
        players = [players[0], players[-1]] + players[1:-1]
    return rounds


def _off_norm(H: np.ndarray) -> float:
    off = H - np.diag(np.diag(H))
    return float(np.linalg.norm(off))


def herm_eig(H, tol: float = JACOBI_TOL, vectors: bool = True):
    """Eigen-decomposition of a Hermitian matrix by cyclic Jacobi rotations.

    Each sweep visits all pairs in a fixed round-robin order; pairs within a
    round are disjoint, so their rotations are applied together. Iteration
    stops once the off-diagonal Frobenius norm drops below
    ``tol * ||H||_F``.

    Returns ``(w, V)`` with ascending eigenvalues ``w`` and ``H V = V diag(w)``
    (``V`` is ``None`` when ``vectors`` is false).
    """
    A = as_hermitian(H).copy()
    n = A.shape[0]
    V = np.eye(n, dtype=complex) if vectors else None
    target = tol * float(np.linalg.norm(A))
    if n > 1:
        rounds = [(np.array([p for p, _ in r]), np.array([q for _, q in r]))
                  for r in _round_robin(n)]
        for _ in range(JACOBI_MAX_SWEEPS):
            if _off_norm(A) <= target:
                break
            for P, Q in rounds:
                apq = A[P, Q]
                r = np.abs(apq)
                active = r > 0.0
                if not np.any(active):
                    continue
                P, Q, apq, r = P[active], Q[active], apq[active], r[active]
                app = A[P, P].real
                aqq = A[Q, Q].real
                tau = (aqq - app) / (2.0 * r)
                t = np.where(tau >= 0, 1.0, -1.0) / (np.abs(tau) + np.hypot(1.0, tau))
                c = 1.0 / np.sqrt(1.0 + t * t)
                s = t * c
                ph = np.conj(apq) / r  # e^{-i theta}
                # columns p, q of the 2x2 unitary: (c, -s ph), (s, c ph)
                u_pp, u_qp, u_pq, u_qq = c, -s * ph, s, c * ph
                colP = A[:, P].copy()
                colQ = A[:, Q]
                A[:, P] = colP * u_pp + colQ * u_qp
                A[:, Q] = colP * u_pq + colQ * u_qq
                rowP = A[P, :].copy()
                rowQ = A[Q, :]
                A[P, :] = np.conj(u_pp)[:, None] * rowP + np.conj(u_qp)[:, None] * rowQ
                A[Q, :] = np.conj(u_pq)[:, None] * rowP + np.conj(u_qq)[:, None] * rowQ
                A[P, Q] = 0.0
                A[Q, P] = 0.0
                if V is not None:
                    vP = V[:, P].copy()
                    vQ = V[:, Q]
                    V[:, P] = vP * u_pp + vQ * u_qp
                    V[:, Q] = vP * u_pq + vQ * u_qq
        else:
            if _off_norm(A) > target:
                raise ConsistencyError("Jacobi iteration did not converge")
    w = np.diag(A).real.copy()
    order = np.argsort(w, kind="stable")
    w = w[order]
    if V is not None:
        V = V[:, order]
    return w, V


def herm_max_eig(H) -> float:
    """Largest eigenvalue of a Hermitian matrix (Jacobi)."""
    w, _ = herm_eig(H, vectors=False)
    return float(w[-1])


def _bracket_scale(b: Bracket) -> float:
    return max(1.0, abs(b.lo), abs(b.hi))


def bisect_bracket(f: Callable[[float], float], b, tol: float = 1e-12) -> Bracket:
    """Shrink a sign-change bracket of ``f`` to width ``<= tol * max(1, |lo|, |hi|)``."""
    b = Bracket.of(b)
    lo, hi = b
    flo, fhi = f(lo), f(hi)
    # an exact zero collapses the bracket to a point
    if flo == 0.0:
        return Bracket(lo, lo)
    if fhi == 0.0:
        return Bracket(hi, hi)
    if not flo * fhi < 0.0:
        raise BracketError(f"no sign change on [{lo}, {hi}]: f = {flo}, {fhi}")
    width = tol * _bracket_scale(b)
    while hi - lo > width:
        mid = lo + (hi - lo) / 2.0
        if mid <= lo or mid >= hi:
            break
        fmid = f(mid)
        if fmid == 0.0:
            return Bracket(mid, mid)
        if (fmid < 0.0) == (flo < 0.0):
            lo, flo = mid, fmid
        else:
            hi = mid
    return Bracket(lo, hi)


def bisect_root(f: Callable[[float], float], b, tol: float = 1e-12) -> float:
    """Root of ``f`` inside a sign-change bracket, by plain bisection."""
    lo, hi = bisect_bracket(f, b, tol)
    return lo + (hi - lo) / 2.0


def golden_max(f: Callable[[float], float], lo: float, hi: float, width: float):
    """Golden-section search for a local maximum on ``[lo, hi]``."""
    a, b = lo, hi
    c = b - INVPHI * (b - a)
    d = a + INVPHI * (b - a)
    fc, fd = f(c), f(d)
    while b - a > width:
        if fc >= fd:
            b, d, fd = d, c, fc
            c = b - INVPHI * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + INVPHI * (b - a)
            fd = f(d)
    return (c, fc) if fc >= fd else (d, fd)


def grid_champions(f: Callable[[float], float], b, grid_n: int = 4096, k: int = 3,
                   width: float = GOLDEN_WIDTH, vectorized: bool = False) -> list[tuple[float, float]]:
    """Refined local maxima of ``f`` on a bracket, best first.

    ``f`` is sampled on ``grid_n`` uniform points (endpoints included); the
    ``k`` best grid-local maxima are refined by golden-section search on
    their neighbouring cells. A refinement never replaces a better grid value.
    With ``vectorized`` the grid is evaluated in a single call ``f(ts)``.
    """
    b = Bracket.of(b)
    if grid_n < 2:
        raise InvalidInputError("grid_n must be at least 2")
    ts = np.linspace(b.lo, b.hi, grid_n)
    if vectorized:
        vals = np.asarray(f(ts), dtype=float)
    else:
        vals = np.array([f(float(t)) for t in ts], dtype=float)
    left = np.concatenate(([-np.inf], vals[:-1]))
    right = np.concatenate((vals[1:], [-np.inf]))
    local = np.flatnonzero((vals >= left) & (vals >= right))
    local = local[np.argsort(-vals[local], kind="stable")][:k]
    out = []
    for i in local:
        lo = ts[max(i - 1, 0)]
        hi = ts[min(i + 1, grid_n - 1)]
        t_best, v_best = float(ts[i]), float(vals[i])
        t_ref, v_ref = golden_max(lambda x: float(f(x)), float(lo), float(hi), width * b.width)
        if v_ref > v_best:
            t_best, v_best = float(t_ref), float(v_ref)
        out.append((t_best, v_best))
    out.sort(key=lambda tv: -tv[1])
    return out


def maximize_on_interval(f: Callable[[float], float], b, grid_n: int = 4096):
    """Global maximum of a continuous ``f`` on a bracket: ``(argmax, max)``."""
    return grid_champions(f, b, grid_n)[0]
