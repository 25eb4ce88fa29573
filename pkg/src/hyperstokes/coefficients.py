"""Phase coefficients attached to vertices and chambers, and pair classification.

Phases are kept as exact signed multisets of hyperplane labels so that
products and conjugates are decided combinatorially; they are turned into
complex numbers only on request.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .arrangement import Chamber, Geometry, Vertex, analyze, cone_membership, separating_set
from .linalg import sign


@dataclass(frozen=True)
class PhaseCoefficient:
    """sign * exp(pi i sum_j m_j alpha_j), with integer multiplicities m_j."""

    sign: int = 1
    phase: tuple[tuple[int, int], ...] = ()

    @classmethod
    def make(cls, sign: int = 1, labels: Iterable[int] = (), multiplicity: int = 1):
        counts = Counter({j: multiplicity for j in labels})
        return cls(sign, _normalize(counts))

    @property
    def multiset(self) -> Counter:
        return Counter(dict(self.phase))

    def __mul__(self, other: "PhaseCoefficient") -> "PhaseCoefficient":
        counts = self.multiset
        counts.update(other.multiset)
        return PhaseCoefficient(self.sign * other.sign, _normalize(counts))

    def conj(self) -> "PhaseCoefficient":
        return PhaseCoefficient(self.sign, tuple((j, -m) for j, m in self.phase))

    def as_complex(self, weights: Sequence[float]) -> complex:
        total = sum(m * weights[j - 1] for j, m in self.phase)
        return self.sign * complex(np.exp(1j * np.pi * total))


def _normalize(counts: Counter) -> tuple[tuple[int, int], ...]:
    return tuple(sorted((j, m) for j, m in counts.items() if m != 0))


def _geometry(geo) -> Geometry:
    return geo if isinstance(geo, Geometry) else analyze(geo)


def eta(geo: Geometry, x: Vertex, delta: Chamber) -> PhaseCoefficient:
    """Weight of I_Delta in the expansion of I+_X (Delta inside C+_X)."""
    geo = _geometry(geo)
    if not geo.in_cone(delta, x):
        raise ValueError(f"chamber {delta.signs} is not inside the cone at {x.indices}")
    return PhaseCoefficient.make(1, separating_set(delta, geo.delta[x.indices]))


def psi(geo: Geometry, delta: Chamber, x: Vertex) -> PhaseCoefficient:
    """Weight of I+_X in the expansion of I_Delta (X on the closure of Delta)."""
    geo = _geometry(geo)
    if not geo.on_closure(delta, x):
        raise ValueError(f"vertex {x.indices} is not on the closure of {delta.signs}")
    hs = separating_set(delta, geo.delta[x.indices])
    return PhaseCoefficient.make((-1) ** len(hs), hs)


def nu(geo: Geometry, delta: Chamber, xp: Vertex) -> int:
    geo = _geometry(geo)
    if not geo.on_closure(delta, xp):
        return 0
    return (-1) ** len(separating_set(delta, geo.delta[xp.indices]))


def theta(geo: Geometry, xp: Vertex, delta: Chamber) -> int:
    return int(_geometry(geo).in_cone(delta, xp))


def dplus_from(geo: Geometry, x: Vertex) -> tuple[list[Vertex], list[Chamber]]:
    """Vertices X' >= X and the chambers Delta_{X'}, in the same order."""
    later = geo.vertices[geo.position[x.indices]:]
    return later, [geo.delta[v.indices] for v in later]


def theta_nu_matrices(geo: Geometry, x: Vertex) -> tuple[np.ndarray, np.ndarray]:
    """Integer matrices theta(X', Delta) and nu(Delta, X'') over X', X'' >= X."""
    geo = _geometry(geo)
    verts, chambers = dplus_from(geo, x)
    th = np.array([[theta(geo, v, c) for c in chambers] for v in verts], dtype=np.int64)
    nv = np.array([[nu(geo, c, v) for v in verts] for c in chambers], dtype=np.int64)
    return th, nv


@dataclass(frozen=True)
class PairClassification:
    positive_exceptional: bool
    negative_exceptional: bool
    exceptional_hyperplanes: frozenset[int]
    set_A: frozenset[int]
    set_B: frozenset[int]
    cone_status: str = ""


def _local_delta(geo: Geometry, x: Vertex, cone_sign: int) -> tuple[int, ...]:
    """Sign vector of the chamber at X inside C+_X (cone_sign 1) or C-_X (-1)."""
    arr = geo.arr
    return tuple(cone_sign * geo.cone_side(x, j) if j in x.indices else sign(arr.form(j)(x.point))
                 for j in arr.labels)


def _exceptional(geo: Geometry, x: Vertex, xp: Vertex,
                 cone_sign: int = 1) -> tuple[bool, frozenset[int], str]:
    status = cone_membership(geo.arr, x, xp, cone_sign).status
    if status == "outside":
        return True, frozenset(), status
    if status == "boundary":
        return False, frozenset(), status
    a, b = _local_delta(geo, xp, cone_sign), _local_delta(geo, x, cone_sign)
    hs = {j + 1 for j, (s, t) in enumerate(zip(a, b)) if s != t}
    missing = frozenset(j for j in xp.indices if j not in hs)
    return bool(missing), missing, status


def sets_ab(geo: Geometry, x: Vertex, xp: Vertex) -> tuple[frozenset[int], frozenset[int]]:
    arr = geo.arr
    set_a = frozenset(
        j for j in arr.labels
        if j not in x.indices and j not in xp.indices
        and (arr.form(j)(x.point) > 0) != (arr.form(j)(xp.point) > 0))
    set_b = frozenset(
        j for j in set(x.indices) & set(xp.indices)
        if geo.cone_side(x, j) != geo.cone_side(xp, j))
    return set_a, set_b


def classify_pair(geo, x: Vertex | Sequence[int], xp: Vertex | Sequence[int]) -> PairClassification:
    """Exceptionality of (X, X') for both signs of f0, with the sets A and B."""
    geo = _geometry(geo)
    x = x if isinstance(x, Vertex) else geo.vertex(x)
    xp = xp if isinstance(xp, Vertex) else geo.vertex(xp)
    if x.indices == xp.indices:
        raise ValueError("a pair needs two distinct vertices")
    pos, missing, status = _exceptional(geo, x, xp)
    # f0 -> -f0 turns C+ into C-; the sets A and B are shared by both signs
    neg, _, _ = _exceptional(geo, x, xp, -1)
    set_a, set_b = sets_ab(geo, x, xp)
    return PairClassification(pos, neg, missing, set_a, set_b, status)


@dataclass(frozen=True)
class ChiReport:
    vertex: tuple[int, ...]
    n_points: int
    failures: int
    resampled: int

    @property
    def passed(self) -> bool:
        return self.failures == 0


def sampling_box(geo: Geometry, inflate: float = 3.0) -> tuple[np.ndarray, np.ndarray]:
    pts = np.array([[float(c) for c in v.point] for v in geo.vertices])
    center = 0.5 * (pts.min(axis=0) + pts.max(axis=0))
    half = 0.5 * (pts.max(axis=0) - pts.min(axis=0))
    half = np.maximum(half, 1.0 if len(pts) == 1 else half.max())
    return center - inflate * half, center + inflate * half


def chi_identity_check(geo, x: Vertex | Sequence[int], points: np.ndarray,
                       rng: np.random.Generator | None = None, tol: float = 1e-9) -> ChiReport:
    """Check chi_{Delta_X} = sum nu(Delta_X, X') chi_{C+_{X'}} pointwise.

    Points closer than ``tol`` to a hyperplane are redrawn uniformly from
    the box spanned by the given points.
    """
    geo = _geometry(geo)
    arr = geo.arr
    x = x if isinstance(x, Vertex) else geo.vertex(x)
    rng = rng if rng is not None else np.random.default_rng(0)
    lin = np.array([[float(c) for c in f.linear] for f in arr.forms])
    const = np.array([float(f.constant) for f in arr.forms])
    scale = np.maximum(np.linalg.norm(lin, axis=1), 1.0)
    pts = np.array(points, dtype=float).reshape(-1, arr.k)
    lo, hi = pts.min(axis=0), pts.max(axis=0)
    resampled = 0
    for _ in range(100):
        bad = np.any(np.abs(pts @ lin.T + const) <= tol * scale, axis=1)
        if not bad.any():
            break
        resampled += int(bad.sum())
        pts[bad] = rng.uniform(lo, hi, size=(int(bad.sum()), arr.k))
    signs = np.sign(pts @ lin.T + const).astype(np.int64)

    delta = geo.delta[x.indices]
    lhs = np.all(signs == np.array(delta.signs), axis=1).astype(np.int64)
    rhs = np.zeros(len(pts), dtype=np.int64)
    for idx in delta.vertices:
        xp = geo.vertex(idx)
        cols = [j - 1 for j in idx]
        side = np.array([geo.cone_side(xp, j) for j in idx])
        inside = np.all(signs[:, cols] == side, axis=1)
        rhs += nu(geo, delta, xp) * inside
    return ChiReport(x.indices, len(pts), int(np.count_nonzero(lhs != rhs)), resampled)
