"""Integrals over the rotated cones X + rho * sum_j a_j e_{X-{j}}, a_j > 0.

With e_j = e_{X-{j}} and s_j the sign of f_j on Delta_X, the analytic
continuation of |f_j| from Delta_X is

    w_j = rho a_j |l_j(e_j)|                          (j in X)
    w_r = |f_r(X)| + rho s_r sum_j a_j l_r(e_j)        (r not in X)

Along the segment a -> t a the value w_r runs on a straight line from
the positive number |f_r(X)|; for Im rho != 0 it never meets the negative
axis, so the principal power is the continued branch. The same holds for
rho^alpha with arg rho in (-pi, pi). The cone coordinates a_j are
integrated on [0, R / Re(rho lambda)]^k with graded Gauss-Jacobi panels.
"""

from __future__ import annotations

import cmath
import math
from typing import Sequence

import numpy as np

from ..arrangement import Geometry, Vertex, analyze
from ..linalg import det
from .chamber import Component, vertex_components
from .core import IntegralValue, QuadConfig, as_values, refine
from .rules import graded_rule, nodes_for_level, tensor_grid


def _geometry(geo) -> Geometry:
    return geo if isinstance(geo, Geometry) else analyze(geo)


def admissible_interval(lam: complex, sign: int) -> tuple[float, float]:
    """Open interval of arg rho with Re(rho lambda) > 0 and sign(Im rho) = -sign.

    sign = +1 selects I+ (Im rho < 0), sign = -1 selects I- (Im rho > 0).
    """
    lam = complex(lam)
    if lam == 0:
        raise ValueError("lambda must be nonzero")
    phi = cmath.phase(lam)
    if sign > 0:
        if phi <= -math.pi / 2:
            phi += 2 * math.pi
        if math.isclose(phi, 3 * math.pi / 2) or math.isclose(phi, -math.pi / 2):
            raise ValueError("I+ is not defined on the negative imaginary axis")
        return max(-math.pi, -math.pi / 2 - phi), min(0.0, math.pi / 2 - phi)
    if phi >= math.pi / 2:
        phi -= 2 * math.pi
    if math.isclose(phi, math.pi / 2) or math.isclose(phi, -3 * math.pi / 2):
        raise ValueError("I- is not defined on the positive imaginary axis")
    return max(0.0, -math.pi / 2 - phi), min(math.pi, math.pi / 2 - phi)


def select_rho(lam: complex, sign: int) -> complex:
    """Midpoint of the admissible arguments: continuous in lambda off the cut."""
    lo, hi = admissible_interval(lam, sign)
    if not lo < hi:
        raise ValueError(f"no admissible rho for lambda = {lam}")
    return cmath.exp(0.5j * (lo + hi))


class _ConeData:
    def __init__(self, geo: Geometry, x: Vertex):
        arr = geo.arr
        self.k = arr.k
        self.inside = list(x.indices)
        self.outside = [r for r in arr.labels if r not in x.indices]
        dirs = [geo.cone_direction(x, j) for j in self.inside]
        self.det_e = float(abs(det(dirs)))
        self.scale_in = np.array([float(abs(arr.form(j).lin(e)))
                                  for j, e in zip(self.inside, dirs)])
        self.base_out = np.array([float(abs(arr.form(r)(x.point))) for r in self.outside])
        s_out = [1 if arr.form(r)(x.point) > 0 else -1 for r in self.outside]
        # m[r, j] = s_r l_r(e_j)
        self.mix = np.array([[float(s * arr.form(r).lin(e)) for e in dirs]
                             for r, s in zip(self.outside, s_out)]).reshape(len(self.outside), self.k)
        sides = {j: geo.cone_side(x, j) for j in self.inside}
        sides.update(dict(zip(self.outside, s_out)))
        self.sides = sides
        self.alpha_in = np.array([arr.alpha(j) for j in self.inside])
        self.alpha_out = np.array([arr.alpha(r) for r in self.outside])
        self.f0 = float(x.f0_value)
        self.power = arr.weight_sum(arr.labels) + arr.k


def _evaluate(cd: _ConeData, rho: complex, lam: complex, components: Sequence[Component],
              n: int, cfg: QuadConfig):
    c = rho * lam
    top = cfg.truncation_radius(cd.power) / c.real
    rules = []
    for a in cd.alpha_in:
        x, w = graded_rule(n, float(a - 1.0), cfg.panels_for(cd.k), cfg.ratio)
        rules.append((top * x, top ** a * w))
    pts, wts = tensor_grid(rules)
    w_in = rho * pts * cd.scale_in  # (M, k), principal powers handled below
    w_out = cd.base_out + rho * (pts @ cd.mix.T)  # (M, N-k)
    # (rho a |l|)^(alpha-1) = rho^(alpha-1) |l|^(alpha-1) a^(alpha-1); a^(alpha-1) is in wts
    const = rho ** cd.k * cd.det_e * np.prod(
        np.power(rho, cd.alpha_in - 1.0) * cd.scale_in ** (cd.alpha_in - 1.0))
    base = wts * np.exp(-c * pts.sum(axis=1))
    if cd.outside:
        base = base * np.prod(np.power(w_out, cd.alpha_out - 1.0), axis=1)
    base = base * const
    labels = cd.inside + cd.outside
    allw = np.concatenate([w_in, w_out], axis=1)
    out = np.zeros(len(components), dtype=complex)
    for i, (poles, scale) in enumerate(components):
        keep = [p for p, j in enumerate(labels) if j not in poles]
        sgn = math.prod(cd.sides[j] for j in poles)
        out[i] = scale * sgn * np.sum(base * np.prod(allw[:, keep], axis=1))
    return out * cmath.exp(-lam * cd.f0), len(pts)


def cone_integrals(geo, x: Vertex | Sequence[int], lam: complex, rho: complex,
                   cfg: QuadConfig | None = None,
                   components: Sequence[Component] | None = None) -> list[IntegralValue]:
    """I^rho_{X, X'}(lambda) for every vertex X' (or the given components)."""
    geo = _geometry(geo)
    cfg = cfg or QuadConfig()
    x = x if isinstance(x, Vertex) else geo.vertex(x)
    lam, rho = complex(lam), complex(rho)
    if rho.imag == 0:
        raise ValueError("rho must not be real")
    if (rho * lam).real <= 0:
        raise ValueError("need Re(rho * lambda) > 0")
    rho = rho / abs(rho)
    cd = _ConeData(geo, x)
    components = list(components) if components is not None else vertex_components(geo)

    def evaluate(level):
        return _evaluate(cd, rho, lam, components, nodes_for_level(level, cfg.base_nodes, cfg.growth), cfg)

    def cost(level):
        return (cfg.panels_for(cd.k) * nodes_for_level(level, cfg.base_nodes, cfg.growth)) ** cd.k

    return as_values(*refine(evaluate, cfg, cost))


def integrate_cone(arr, x, xp, rho: complex, lam: complex, cfg: QuadConfig | None = None) -> IntegralValue:
    geo = _geometry(arr)
    xp = xp if isinstance(xp, Vertex) else geo.vertex(xp)
    comp = [(xp.indices, float(abs(det([geo.arr.form(j).linear for j in xp.indices]))))]
    return cone_integrals(geo, x, lam, rho, cfg, comp)[0]


def i_plus(geo, x, lam: complex, cfg: QuadConfig | None = None) -> list[IntegralValue]:
    """The vector (I+_{X,X'}(lambda))_{X'}, lambda off the negative imaginary axis."""
    return cone_integrals(geo, x, lam, select_rho(lam, +1), cfg)


def i_minus(geo, x, lam: complex, cfg: QuadConfig | None = None) -> list[IntegralValue]:
    """The vector (I-_{X,X'}(lambda))_{X'}, lambda off the positive imaginary axis."""
    return cone_integrals(geo, x, lam, select_rho(lam, -1), cfg)

