"""The linear system I' = -(A + B / lambda) I and its formal normal form."""

from __future__ import annotations

import cmath
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

import numpy as np

from .arrangement import Arrangement, Geometry, SingularMatrixError, Vertex, analyze
from .linalg import sign, solve


@dataclass(frozen=True)
class ODESystem:
    order: tuple[Vertex, ...]
    matA: np.ndarray
    matB: np.ndarray

    @property
    def weights_diag(self) -> np.ndarray:
        return np.diag(self.matB).copy()

    def rhs(self, lam: complex, vec: np.ndarray) -> np.ndarray:
        """-(A + B / lambda) vec."""
        return -(self.matA @ vec + (self.matB @ vec) / lam)


@dataclass(frozen=True)
class VertexDecomposition:
    """f0 = f0(X) + sum_j c0[j] f_j, the sum over j in X."""

    vertex: Vertex
    c0: dict[int, Fraction]


def _geometry(geo) -> Geometry:
    return geo if isinstance(geo, Geometry) else analyze(geo)


def epsilon_single(geo, j: int, subset: Iterable[int]) -> int:
    """sgn l_j(e_U)."""
    geo = _geometry(geo)
    value = geo.arr.form(j).lin(geo.edge(subset).direction)
    if value == 0:
        raise SingularMatrixError(f"hyperplane {j} contains the edge {tuple(subset)}")
    return sign(value)


def epsilon_pair(geo, j: int, r: int, subset: Iterable[int]) -> int:
    subset = tuple(subset)
    return epsilon_single(geo, j, subset) * epsilon_single(geo, r, subset)


def build_ode(arr: Arrangement | Geometry) -> ODESystem:
    geo = _geometry(arr)
    arr = geo.arr
    order = tuple(geo.vertices)
    m = len(order)
    mat_a = np.diag([float(v.f0_value) for v in order])
    mat_b = np.zeros((m, m))
    for p, x in enumerate(order):
        mat_b[p, p] = arr.weight_sum(x.indices)
        for q, y in enumerate(order):
            common = set(x.indices) & set(y.indices)
            if p == q or len(common) != arr.k - 1:
                continue
            (j,) = set(x.indices) - common
            (r,) = set(y.indices) - common
            mat_b[p, q] = epsilon_pair(geo, j, r, sorted(common)) * arr.alpha(r)
    return ODESystem(order, mat_a, mat_b)


def f0_decomposition(geo, x: Vertex | Iterable[int]) -> VertexDecomposition:
    geo = _geometry(geo)
    x = x if isinstance(x, Vertex) else geo.vertex(x)
    arr = geo.arr
    # l0 = sum_j c_j l_j  <=>  L^T c = l0
    cols = [arr.form(j).linear for j in x.indices]
    transposed = [[cols[c][r] for c in range(arr.k)] for r in range(arr.k)]
    c = solve(transposed, arr.f0)
    return VertexDecomposition(x, dict(zip(x.indices, c)))


def normal_form_solution(geo, x: Vertex | Iterable[int], lam: complex, log_branch: int = 0) -> complex:
    """exp(-lambda f0(X)) lambda^(-alpha_X), on the branch log + 2 pi i * log_branch."""
    geo = _geometry(geo)
    x = x if isinstance(x, Vertex) else geo.vertex(x)
    lam = complex(lam)
    if lam == 0:
        raise ZeroDivisionError("the normal form is singular at lambda = 0")
    log_lam = cmath.log(lam) + 2j * cmath.pi * log_branch
    alpha_x = geo.arr.weight_sum(x.indices)
    return cmath.exp(-lam * float(x.f0_value) - alpha_x * log_lam)
