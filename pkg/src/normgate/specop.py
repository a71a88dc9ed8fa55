"""Spectral-data model of ``|A^*|`` and norm attainment of the block operator
``T = [[a I, A], [c A^*, b phi(|A|)]]``.

The operator enters only through its spectrum ``sigma`` (closed intervals,
eigenvalues, eigenvalue sequences and their limit points) and its point
spectrum ``sigma_p`` (the eigenvalues). ``||T||`` is the maximum of
``||M_t||`` over ``sigma`` and ``Omega`` is the set of maximizers.
"""
from __future__ import annotations

import enum
import json
import math
from dataclasses import dataclass, field, replace
from typing import Optional

import numpy as np

from . import curves
from .curves import ParamSet
from .exceptions import InvalidSpecError
from .numkit import grid_champions
from .phicrit import PhiFunction, certify, check_phi_hypothesis

OMEGA_TOL = 1e-9
CLUSTER_RADIUS = 1e-6
NEAR_MISS_FACTOR = 10.0
ATTAIN_TOL = 1e-12
DEFAULT_N_MAX = 100_000
GRID_N = 4096

_SEQUENCES = {
    # sqrt of the eigenvalues (n+1)/(n+2) of A A^* for the Bergman example
    "bergman": (lambda n: np.sqrt((n + 1.0) / (n + 2.0)), (1.0,)),
}


@dataclass(frozen=True)
class EigenSequence:
    """Eigenvalues ``value(n)**exponent`` for ``n = 0..n_max`` plus their limit points."""

    preset: str
    n_max: int = DEFAULT_N_MAX
    exponent: float = 1.0

    def __post_init__(self):
        if self.preset not in _SEQUENCES:
            raise InvalidSpecError(f"unknown sequence preset {self.preset!r}")
        if int(self.n_max) != self.n_max or self.n_max < 0:
            raise InvalidSpecError("n_max must be a non-negative integer")

    def values(self) -> np.ndarray:
        n = np.arange(self.n_max + 1, dtype=float)
        return _SEQUENCES[self.preset][0](n) ** self.exponent

    def value(self, n: int) -> float:
        return float(_SEQUENCES[self.preset][0](float(n)) ** self.exponent)

    @property
    def limit_points(self) -> tuple[float, ...]:
        return tuple(v ** self.exponent for v in _SEQUENCES[self.preset][1])


@dataclass(frozen=True)
class SpectrumSpec:
    """``sigma`` = intervals + eigenvalues + sequence values + limit points;
    ``sigma_p`` = eigenvalues + sequence values."""

    bound: float
    intervals: tuple[tuple[float, float], ...] = ()
    eigenvalues: tuple[float, ...] = ()
    sequence: Optional[EigenSequence] = None
    limit_points: tuple[float, ...] = ()

    def __post_init__(self):
        B = float(self.bound)
        if not (math.isfinite(B) and B > 0):
            raise InvalidSpecError("bound must be a positive finite number")
        ivs = tuple((float(lo), float(hi)) for lo, hi in self.intervals)
        eig = tuple(float(v) for v in self.eigenvalues)
        lim = tuple(float(v) for v in self.limit_points)
        object.__setattr__(self, "bound", B)
        object.__setattr__(self, "intervals", ivs)
        object.__setattr__(self, "eigenvalues", eig)
        object.__setattr__(self, "limit_points", lim)
        for lo, hi in ivs:
            if not (0 <= lo <= hi <= B):
                raise InvalidSpecError(f"interval [{lo}, {hi}] is not inside [0, {B}]")
        pts = list(eig) + list(lim)
        if self.sequence is not None:
            seq = self.sequence.values()
            pts += [float(seq.min()), float(seq.max())] if seq.size else []
            pts += list(self.sequence.limit_points)
        for v in pts:
            if not (math.isfinite(v) and 0 <= v <= B):
                raise InvalidSpecError(f"spectral value {v} is not inside [0, {B}]")
        if not ivs and not pts:
            raise InvalidSpecError("spectrum is empty")

    def point_spectrum(self) -> np.ndarray:
        parts = [np.asarray(self.eigenvalues, dtype=float)]
        if self.sequence is not None:
            parts.append(self.sequence.values())
        return np.concatenate(parts)

    def all_limit_points(self) -> tuple[float, ...]:
        seq = self.sequence.limit_points if self.sequence is not None else ()
        return self.limit_points + seq

    def sup(self) -> float:
        """``sup sigma``, i.e. ``||A||``."""
        cands = [hi for _, hi in self.intervals] + list(self.all_limit_points())
        ps = self.point_spectrum()
        if ps.size:
            cands.append(float(ps.max()))
        return max(cands)

    @property
    def is_finite(self) -> bool:
        return not self.intervals and self.sequence is None and not self.limit_points

    def power(self, alpha: float) -> "SpectrumSpec":
        """Spectrum of ``|A^*|**alpha``: every spectral value ``s`` becomes ``s**alpha``."""
        seq = self.sequence
        if seq is not None:
            seq = replace(seq, exponent=seq.exponent * alpha)
        return SpectrumSpec(
            bound=self.bound ** alpha,
            intervals=tuple((lo ** alpha, hi ** alpha) for lo, hi in self.intervals),
            eigenvalues=tuple(v ** alpha for v in self.eigenvalues),
            sequence=seq,
            limit_points=tuple(v ** alpha for v in self.limit_points),
        )

    @classmethod
    def from_dict(cls, doc: dict) -> "SpectrumSpec":
        allowed = {"bound", "intervals", "eigenvalues", "sequence", "limit_points"}
        if not isinstance(doc, dict):
            raise InvalidSpecError("spectrum spec must be a JSON object")
        unknown = set(doc) - allowed
        if unknown:
            raise InvalidSpecError(f"unknown fields: {sorted(unknown)}")
        if "bound" not in doc:
            raise InvalidSpecError("missing field 'bound'")
        seq = doc.get("sequence")
        if seq is not None:
            if not isinstance(seq, dict) or set(seq) - {"preset", "n_max"} or "preset" not in seq:
                raise InvalidSpecError("sequence must be {'preset': name, 'n_max': N}")
            seq = EigenSequence(seq["preset"], int(seq.get("n_max", DEFAULT_N_MAX)))
        try:
            intervals = tuple((lo, hi) for lo, hi in doc.get("intervals", []))
        except (TypeError, ValueError) as exc:
            raise InvalidSpecError("intervals must be [[lo, hi], ...]") from exc
        return cls(
            bound=doc["bound"],
            intervals=intervals,
            eigenvalues=tuple(doc.get("eigenvalues", [])),
            sequence=seq,
            limit_points=tuple(doc.get("limit_points", [])),
        )

    @classmethod
    def from_json(cls, text: str) -> "SpectrumSpec":
        try:
            doc = json.loads(text)
        except json.JSONDecodeError as exc:
            raise InvalidSpecError(f"invalid JSON: {exc}") from exc
        return cls.from_dict(doc)

    def to_dict(self) -> dict:
        doc = {
            "bound": self.bound,
            "intervals": [list(iv) for iv in self.intervals],
            "eigenvalues": list(self.eigenvalues),
            "limit_points": list(self.limit_points),
        }
        if self.sequence is not None:
            if self.sequence.exponent != 1.0:
                raise InvalidSpecError("powered sequences have no JSON form")
            doc["sequence"] = {"preset": self.sequence.preset, "n_max": self.sequence.n_max}
        return doc


def preset(name: str, **kw) -> SpectrumSpec:
    """Named spectra.

    ``bergman`` (``n_max``): eigenvalues ``sqrt((n+1)/(n+2))``, limit point 1
    not an eigenvalue. ``mult-op`` (``d``): ``sigma = [0, d]``, no eigenvalues.
    ``ex313`` (``t1``, ``t2``): ``sigma = [0, t1] U {1}``, ``sigma_p = {1}``.
    """
    key = name.lower().replace("_", "-")
    if key == "bergman":
        return SpectrumSpec(bound=1.0, sequence=EigenSequence("bergman", int(kw.get("n_max", DEFAULT_N_MAX))))
    if key == "mult-op":
        d = float(kw.get("d", 1.0))
        if not d > 0:
            raise InvalidSpecError("mult-op needs d > 0")
        return SpectrumSpec(bound=d, intervals=((0.0, d),))
    if key in ("ex313", "ex-313"):
        t1, t2 = float(kw.get("t1", 0.96)), float(kw.get("t2", 0.98))
        if not 0 < t1 < t2 < 1:
            raise InvalidSpecError("ex313 needs 0 < t1 < t2 < 1")
        return SpectrumSpec(bound=1.0, intervals=((0.0, t1),), eigenvalues=(1.0,))
    raise InvalidSpecError(f"unknown spectrum preset {name!r}")


def attains_base(spec: SpectrumSpec) -> bool:
    """Does ``A`` attain its norm, i.e. is ``sup sigma`` an eigenvalue?"""
    top = spec.sup()
    ps = spec.point_spectrum()
    if not ps.size:
        return False
    return bool(np.min(np.abs(ps - top)) <= ATTAIN_TOL * max(1.0, spec.bound))


@dataclass(frozen=True)
class OmegaSet:
    points: tuple[float, ...]
    is_singleton: bool
    tol: float
    norm: float


def _candidates(spec: SpectrumSpec, p: ParamSet, phi: PhiFunction, grid_n: int) -> list[tuple[float, float]]:
    check_phi_hypothesis(phi, spec.bound)
    def f(t):
        return curves.eval_f(p, phi, t)

    cands: list[tuple[float, float]] = []
    for lo, hi in spec.intervals:
        if hi > lo:
            cands += grid_champions(f, (lo, hi), grid_n, vectorized=True)
        else:
            cands.append((lo, float(f(lo))))
    pts = np.concatenate([spec.point_spectrum(), np.asarray(spec.all_limit_points(), dtype=float)])
    if pts.size:
        vals = np.asarray(curves.eval_f(p, phi, pts), dtype=float)
        cands += [(float(t), float(v)) for t, v in zip(pts, vals)]
    return cands


def block_norm(spec: SpectrumSpec, p: ParamSet, phi: PhiFunction, grid_n: int = GRID_N) -> float:
    """``||T|| = max over sigma of ||M_t||``."""
    return max(v for _, v in _candidates(spec, p, phi, grid_n))


def compute_omega(spec: SpectrumSpec, p: ParamSet, phi: PhiFunction, tol: float = OMEGA_TOL,
                  grid_n: int = GRID_N) -> OmegaSet:
    """Maximizers of ``||M_t||`` over ``sigma``, clustered within ``1e-6 max(1, B)``."""
    cands = _candidates(spec, p, phi, grid_n)
    norm = max(v for _, v in cands)
    keep = sorted((t, v) for t, v in cands if v >= norm * (1.0 - tol))
    radius = CLUSTER_RADIUS * max(1.0, spec.bound)
    clusters: list[list[tuple[float, float]]] = []
    for t, v in keep:
        if clusters and t - clusters[-1][-1][0] <= radius:
            clusters[-1].append((t, v))
        else:
            clusters.append([(t, v)])
    reps = tuple(max(c, key=lambda tv: tv[1])[0] for c in clusters)
    return OmegaSet(reps, len(reps) == 1, tol, norm)


class AttainStatus(enum.Enum):
    ATTAINS = "ATTAINS"
    NOT_ATTAINS = "NOT_ATTAINS"
    UNKNOWN = "UNKNOWN"


class AttainCertificate(enum.Enum):
    LEMMA_36_WITNESS = "LEMMA_36_WITNESS"
    LEMMA_35_SINGLETON = "LEMMA_35_SINGLETON"
    THM_38_MONOTONE = "THM_38_MONOTONE"
    OMEGA_NOT_SINGLETON = "OMEGA_NOT_SINGLETON"
    SIGMA_P_NEAR_MISS = "SIGMA_P_NEAR_MISS"


@dataclass(frozen=True)
class AttainmentVerdict:
    status: AttainStatus
    certificate: AttainCertificate
    numeric: bool
    witness: Optional[float] = None
    omega: Optional[OmegaSet] = field(default=None, compare=False)


def decide_attainment(spec: SpectrumSpec, p: ParamSet, phi: PhiFunction,
                      use_certificate: bool = True, grid_n: int = GRID_N) -> AttainmentVerdict:
    """ATTAINS / NOT_ATTAINS / UNKNOWN for the block operator ``T``.

    1. If ``||M_t||`` is certified strictly increasing, ``T`` attains its
       norm exactly when ``A`` does (no tolerances involved).
    2. Otherwise, any point of ``Omega`` that is an eigenvalue is a witness.
    3. A singleton ``Omega`` missing ``sigma_p`` means ``T`` does not attain.
    4. Anything else, including near misses, is UNKNOWN.
    """
    check_phi_hypothesis(phi, spec.bound)
    if use_certificate:
        cert = certify(phi, p, (0.0, spec.bound))
        if cert.monotone and cert.symbolic:
            top = spec.sup()
            if attains_base(spec):
                return AttainmentVerdict(AttainStatus.ATTAINS, AttainCertificate.THM_38_MONOTONE, False, top)
            return AttainmentVerdict(AttainStatus.NOT_ATTAINS, AttainCertificate.THM_38_MONOTONE, False)

    omega = compute_omega(spec, p, phi, grid_n=grid_n)
    radius = CLUSTER_RADIUS * max(1.0, spec.bound)
    ps = spec.point_spectrum()
    nearest = []
    for w in omega.points:
        if ps.size:
            i = int(np.argmin(np.abs(ps - w)))
            nearest.append((abs(float(ps[i]) - w), float(ps[i])))
        else:
            nearest.append((math.inf, math.nan))
    hits = [(dist, ev) for dist, ev in nearest if dist <= radius]
    if hits:
        witness = min(hits)[1]
        return AttainmentVerdict(AttainStatus.ATTAINS, AttainCertificate.LEMMA_36_WITNESS, True, witness, omega)
    if any(dist <= NEAR_MISS_FACTOR * radius for dist, _ in nearest):
        return AttainmentVerdict(AttainStatus.UNKNOWN, AttainCertificate.SIGMA_P_NEAR_MISS, True, None, omega)
    if omega.is_singleton:
        return AttainmentVerdict(AttainStatus.NOT_ATTAINS, AttainCertificate.LEMMA_35_SINGLETON, True, None, omega)
    return AttainmentVerdict(AttainStatus.UNKNOWN, AttainCertificate.OMEGA_NOT_SINGLETON, True, None, omega)
