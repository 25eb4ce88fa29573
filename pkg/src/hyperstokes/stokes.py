"""Stokes matrices C0, C1 from the combinatorics of the arrangement.

Matrices are indexed [X', X] by vertex position in f0-ascending order.
No integral is evaluated here; the verification module checks the
result against quadrature.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .arrangement import Arrangement, Geometry, Vertex, analyze
from .coefficients import PhaseCoefficient, classify_pair
from .instances import points_on_line, triangle


@dataclass(frozen=True)
class EntryRecord:
    row: tuple[int, ...]
    col: tuple[int, ...]
    rule: str  # "diagonal", "exceptional-zero" or "product"
    set_A: frozenset[int] = frozenset()
    set_B: frozenset[int] = frozenset()
    new_labels: frozenset[int] = frozenset()


@dataclass(frozen=True)
class StokesData:
    order: tuple[Vertex, ...]
    c0: np.ndarray
    c1: np.ndarray
    exceptional_log: dict[str, list[EntryRecord]] = field(default_factory=dict)

    def index(self, vertex_indices: Sequence[int]) -> int:
        key = tuple(sorted(vertex_indices))
        return next(i for i, v in enumerate(self.order) if v.indices == key)


def _entry(arr: Arrangement, x: Vertex, xp: Vertex, set_a, set_b, extra_phase=()) -> complex:
    new = [j for j in xp.indices if j not in x.indices]
    coeff = PhaseCoefficient.make((-1) ** (len(set_b) + len(new)), set_b)
    coeff = coeff * PhaseCoefficient.make(1, set_a, -1)
    for labels, mult in extra_phase:
        coeff = coeff * PhaseCoefficient.make(1, labels, mult)
    value = coeff.as_complex(arr.weights)
    for j in new:
        value *= 2j * np.sin(np.pi * arr.alpha(j))
    return value


def stokes_matrices(arr: Arrangement | Geometry) -> StokesData:
    geo = arr if isinstance(arr, Geometry) else analyze(arr)
    arr = geo.arr
    order = tuple(geo.vertices)
    m = len(order)
    c0 = np.eye(m, dtype=complex)
    c1 = np.eye(m, dtype=complex)
    logs: dict[str, list[EntryRecord]] = {"c0": [], "c1": []}
    for v in order:
        for name in ("c0", "c1"):
            logs[name].append(EntryRecord(v.indices, v.indices, "diagonal"))
    for q, x in enumerate(order):
        for p, xp in enumerate(order):
            if p == q:
                continue
            pc = classify_pair(geo, x, xp)
            new = frozenset(xp.indices) - frozenset(x.indices)
            if pc.positive_exceptional:
                logs["c0"].append(EntryRecord(xp.indices, x.indices, "exceptional-zero"))
            else:
                c0[p, q] = _entry(arr, x, xp, pc.set_A, pc.set_B)
                logs["c0"].append(EntryRecord(xp.indices, x.indices, "product",
                                              pc.set_A, pc.set_B, new))
            if pc.negative_exceptional:
                logs["c1"].append(EntryRecord(xp.indices, x.indices, "exceptional-zero"))
            else:
                extra = ((x.indices, 1), (xp.indices, -1))
                c1[p, q] = _entry(arr, x, xp, pc.set_A, pc.set_B, extra)
                logs["c1"].append(EntryRecord(xp.indices, x.indices, "product",
                                              pc.set_A, pc.set_B, new))
    return StokesData(order, c0, c1, logs)


def example1_oracle(points: Sequence, weights: Sequence[float]) -> StokesData:
    """Closed-form matrices for points X_1 < ... < X_N on the line."""
    if any(b <= a for a, b in zip(points, points[1:])):
        raise ValueError("points must be strictly increasing")
    al = np.asarray(weights, dtype=float)
    n = len(al)
    c0 = np.eye(n, dtype=complex)
    c1 = np.eye(n, dtype=complex)
    for m in range(n):
        for q in range(m):
            # 0-based: C0[m, q] uses labels q+2..m, C1[q, m] labels q+1..m
            c0[m, q] = -2j * np.exp(-1j * np.pi * al[q + 1:m].sum()) * np.sin(np.pi * al[m])
            c1[q, m] = -2j * np.exp(1j * np.pi * (al[m] - al[q:m].sum())) * np.sin(np.pi * al[q])
    order = tuple(analyze(points_on_line(points, weights)).vertices)
    return StokesData(order, c0, c1)


def example2_oracle(a, b, weights: Sequence[float]) -> StokesData:
    """Closed-form matrices for the triangle x, y, x + y - 1 with f0 = a x + b y."""
    arr = triangle(a, b, weights)
    a1, a2, a3 = (float(w) for w in weights)
    s1, s2, s3 = (np.sin(np.pi * w) for w in (a1, a2, a3))
    e = lambda t: np.exp(1j * np.pi * t)
    c0 = np.array([
        [1, 0, 0],
        [-2j * s3, 1, 0],
        [2j * e(a2) * s3, -2j * s2, 1],
    ], dtype=complex)
    c1 = np.array([
        [1, -2j * e(a3 - a2) * s2, 2j * e(a2 + a3 - a1) * s1],
        [0, 1, -2j * e(a2 - a1) * s1],
        [0, 0, 1],
    ], dtype=complex)
    return StokesData(tuple(analyze(arr).vertices), c0, c1)
