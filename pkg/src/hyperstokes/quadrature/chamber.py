"""Integrals of exp(-lambda f0) prod |f_j|^alpha_j omega over a chamber.

The chamber closure (cut at f0 <= T when unbounded) is split into the
simplices of its barycentric subdivision. Each simplex (v_0, b_1, ..., b_k),
with b_d the barycenter of a d-face of a flag at the vertex v_0, is mapped
from the unit cube by

    z = v_0 + sum_m u_m (b_m - b_{m-1}),   u_m = s_1 s_2 ... s_m.

In these coordinates every |f_H| is a monomial in s times a factor
bounded away from zero, so the singular part of the integrand is a
product of powers s_q^beta_q and is absorbed by Gauss-Jacobi weights.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from ..arrangement import Chamber, Geometry, Vertex, analyze
from ..linalg import SingularMatrixError, det, solve
from .core import IntegralValue, QuadConfig, as_values, refine
from .rules import graded_rule, nodes_for_level, tensor_grid

TRUNCATION = 0  # constraint id of the cut f0 <= T

Component = tuple[tuple[int, ...], float]


@dataclass(frozen=True)
class Flag:
    points: np.ndarray  # (k+1, k): v_0, b_1, ..., b_k
    jacobian: float  # |det(b_m - b_{m-1})|
    exponents: tuple[float, ...]  # beta_q before adding the form's poles
    last_on: dict  # H -> largest m with b_m on H (-1 if none)


def _geometry(geo) -> Geometry:
    return geo if isinstance(geo, Geometry) else analyze(geo)


def polytope_vertices(geo: Geometry, ch: Chamber, top: Fraction | None):
    """Vertices of the chamber closure (cut at f0 <= top) with their tight sets."""
    arr = geo.arr
    out = [(geo.vertex(idx).point, frozenset(idx)) for idx in ch.vertices]
    if top is None:
        if not ch.bounded:
            raise ValueError("an unbounded chamber needs a truncation level")
        return out
    for subset in itertools.combinations(arr.labels, arr.k - 1):
        rows = [arr.form(j).linear for j in subset] + [arr.f0]
        rhs = [-arr.form(j).constant for j in subset] + [top]
        try:
            p = solve(rows, rhs)
        except SingularMatrixError:
            continue
        if all(ch.sign_of(j) * arr.form(j)(p) > 0 for j in arr.labels if j not in subset):
            out.append((p, frozenset(subset) | {TRUNCATION}))
    return out


def _flags(geo: Geometry, ch: Chamber, top: Fraction | None) -> list[Flag]:
    arr = geo.arr
    k = arr.k
    verts = polytope_vertices(geo, ch, top)
    alpha = {j: arr.alpha(j) for j in arr.labels}
    alpha[TRUNCATION] = 1.0
    flags = []
    for point, tight in verts:
        for perm in itertools.permutations(sorted(tight)):
            pts = [point]
            for d in range(1, k + 1):
                keep = tight - set(perm[:d])
                face = [p for p, t in verts if keep <= t]
                pts.append(tuple(sum(c) / len(face) for c in zip(*face)))
            steps = [[a - b for a, b in zip(pts[m], pts[m - 1])] for m in range(1, k + 1)]
            jac = abs(det(steps))
            last_on = {h: m for m, h in enumerate(perm)}
            exps = tuple((k - q) + sum(alpha[h] - 1.0 for h in perm[q - 1:])
                         for q in range(1, k + 1))
            flags.append(Flag(np.array([[float(c) for c in p] for p in pts]),
                              float(jac), exps, last_on))
    return flags


def truncation_level(geo: Geometry, ch: Chamber, lam: complex, cfg: QuadConfig) -> Fraction | None:
    if ch.bounded:
        return None
    arr = geo.arr
    power = arr.weight_sum(arr.labels) + arr.k
    top = max(geo.vertex(idx).f0_value for idx in ch.vertices)
    return top + Fraction(cfg.truncation_radius(power) / complex(lam).real)


def vertex_components(geo: Geometry) -> list[Component]:
    arr = geo.arr
    return [(v.indices, float(abs(det([arr.form(j).linear for j in v.indices]))))
            for v in geo.vertices]


def _reduced(s: np.ndarray, fb: np.ndarray, i: int) -> np.ndarray:
    """sum_{m>i} (s_{i+2} ... s_m) (1 - s_{m+1}) f(b_m), with s_{k+1} = 0."""
    k = s.shape[1]
    total = np.zeros(s.shape[0])
    run = np.ones(s.shape[0])
    for m in range(i + 1, k + 1):
        if m > i + 1:
            run = run * s[:, m - 1]
        tail = 1.0 - s[:, m] if m < k else 1.0
        total += run * tail * fb[m]
    return total


def _evaluate(geo: Geometry, ch: Chamber, flags: Sequence[Flag], lam: complex,
              components: Sequence[Component], n: int, cfg: QuadConfig):
    arr = geo.arr
    k = arr.k
    lin = np.array([[float(c) for c in f.linear] for f in arr.forms])
    const = np.array([float(f.constant) for f in arr.forms])
    l0 = np.array([float(c) for c in arr.f0])
    sigma = np.array(ch.signs, dtype=float)
    alpha = np.array(arr.weights)
    pole_masks = []
    for poles, _ in components:
        mask = np.zeros(arr.n, dtype=bool)
        mask[[j - 1 for j in poles]] = True
        pole_masks.append(mask)
    total = np.zeros(len(components), dtype=complex)
    nodes = 0
    for flag in flags:
        rules = [graded_rule(n, float(b), cfg.panels_for(k), cfg.ratio) for b in flag.exponents]
        s, w = tensor_grid(rules)
        nodes += len(s)
        u = np.cumprod(s, axis=1)
        steps = np.diff(flag.points, axis=0)
        z = flag.points[0] + u @ steps
        fvals = sigma * (z @ lin.T + const)  # |f_j| on the chamber
        fb = sigma * (flag.points @ lin.T + const)  # at v_0, b_1, ..., b_k
        base = w * flag.jacobian * np.exp(-lam * (z @ l0))
        for j in range(arr.n):
            i = flag.last_on.get(j + 1, -1)
            red = np.abs(_reduced(s, fb[:, j], i))
            base = base * red ** (alpha[j] - 1.0)
        for c, ((poles, scale), mask) in enumerate(zip(components, pole_masks)):
            factor = scale * np.prod(sigma[mask]) * np.prod(fvals[:, ~mask], axis=1)
            total[c] += np.sum(base * factor)
    return total, nodes


def chamber_integrals(geo, ch: Chamber, lam: complex, cfg: QuadConfig | None = None,
                      components: Sequence[Component] | None = None) -> list[IntegralValue]:
    """I_{Delta, X'}(lambda) for every vertex X' (or the given components).

    A component (poles, scale) stands for the form
    scale * dz / prod_{j in poles} f_j.
    """
    geo = _geometry(geo)
    cfg = cfg or QuadConfig()
    lam = complex(lam)
    if lam.real <= 0:
        raise ValueError("chamber integrals need Re(lambda) > 0")
    if not ch.in_dplus:
        raise ValueError("f0 is not bounded below on this chamber")
    components = list(components) if components is not None else vertex_components(geo)
    flags = _flags(geo, ch, truncation_level(geo, ch, lam, cfg))

    panels = cfg.panels_for(geo.arr.k)

    def evaluate(level):
        n = nodes_for_level(level, cfg.base_nodes, cfg.growth)
        return _evaluate(geo, ch, flags, lam, components, n, cfg)

    def cost(level):
        return len(flags) * (panels * nodes_for_level(level, cfg.base_nodes, cfg.growth)) ** geo.arr.k

    return as_values(*refine(evaluate, cfg, cost))


def integrate_chamber(arr, ch: Chamber, xp: Vertex | Sequence[int], lam: complex,
                      cfg: QuadConfig | None = None) -> IntegralValue:
    geo = _geometry(arr)
    xp = xp if isinstance(xp, Vertex) else geo.vertex(xp)
    comp = [(xp.indices, float(abs(det([geo.arr.form(j).linear for j in xp.indices]))))]
    return chamber_integrals(geo, ch, lam, cfg, comp)[0]
