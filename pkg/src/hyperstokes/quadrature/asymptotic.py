"""Leading constants of the cone integrals as lambda -> +infinity."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from scipy.special import gamma

from ..arrangement import Geometry, Vertex, analyze
from ..linalg import det


@dataclass(frozen=True)
class AsymptoticConstants:
    J: float
    D: float


def asymptotic_constants(geo, x: Vertex | Sequence[int], xp: Vertex | Sequence[int]) -> AsymptoticConstants:
    """J = |det(l_r(e_{X-{j}}))|, rows j in X, columns r in X', and the constant D.

    I+_{X,X}(lambda) ~ D_{X,X} exp(-lambda f0(X)) lambda^(-alpha_X).
    """
    geo = geo if isinstance(geo, Geometry) else analyze(geo)
    arr = geo.arr
    x = x if isinstance(x, Vertex) else geo.vertex(x)
    xp = xp if isinstance(xp, Vertex) else geo.vertex(xp)
    dirs = {j: geo.cone_direction(x, j) for j in x.indices}
    jac = abs(det([[arr.form(r).lin(dirs[j]) for r in xp.indices] for j in x.indices]))
    d = float(jac)
    for j in x.indices:
        pole = j in xp.indices
        d *= gamma(arr.alpha(j) + (0 if pole else 1))
        d *= float(abs(arr.form(j).lin(dirs[j]))) ** (arr.alpha(j) - (1 if pole else 0))
    for r in arr.labels:
        if r not in x.indices:
            d *= float(abs(arr.form(r)(x.point))) ** (arr.alpha(r) - (1 if r in xp.indices else 0))
    return AsymptoticConstants(float(jac), d)
