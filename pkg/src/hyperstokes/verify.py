"""Numerical certification of the integral identities.

Each check evaluates both sides by quadrature and reports the largest
relative residual, measured against the largest term taking part in the
identity. The Stokes matrices enter only as data computed by
:mod:`hyperstokes.stokes`; nothing here feeds back into them.
"""

from __future__ import annotations

import itertools
import logging
import math
from dataclasses import dataclass, field, replace
from typing import Callable, Sequence

import numpy as np

from .arrangement import Arrangement, Chamber, Geometry, Vertex, analyze
from .coefficients import eta, psi
from .linalg import det
from .ode import build_ode
from .quadrature import QuadConfig, asymptotic_constants, chamber_integrals, i_minus, i_plus
from .stokes import stokes_matrices

log = logging.getLogger(__name__)

FLOOR = 1e-300
DEFAULT_LAMBDAS = (1.0, 2.0, 5.0)
ASYMPTOTIC_GRID = (5.0, 10.0, 20.0, 50.0)
CHECK_NAMES = ("ode", "decomposition", "inversion", "stokes_c0", "stokes_c1",
               "cohomological", "wronskian", "asymptotics")


@dataclass
class CheckReport:
    name: str
    instance: str
    lambdas: list[complex]
    max_relative_residual: float
    tolerance: float
    passed: bool
    details: list[dict] = field(default_factory=list)
    converged: bool = True


def _relative(diff: np.ndarray, *terms) -> float:
    scale = max([float(np.max(np.abs(t))) if np.size(t) else 0.0 for t in terms] + [FLOOR])
    return float(np.max(np.abs(diff))) / scale if np.size(diff) else 0.0


class IntegralCache:
    """Memoized integral vectors (one entry per X') for a single arrangement."""

    def __init__(self, geo: Geometry, cfg: QuadConfig | None = None):
        self.geo = geo
        self.cfg = cfg or QuadConfig()
        self._store: dict = {}
        self.converged = True

    def _get(self, key, compute: Callable):
        if key not in self._store:
            values = compute()
            self.converged &= all(v.converged for v in values)
            self._store[key] = (np.array([v.value for v in values]),
                                max(v.level for v in values),
                                all(v.converged for v in values))
        return self._store[key]

    def chamber(self, ch: Chamber, lam: complex, cfg: QuadConfig | None = None) -> np.ndarray:
        cfg = cfg or self.cfg
        key = ("chamber", ch.signs, complex(lam), cfg)
        return self._get(key, lambda: chamber_integrals(self.geo, ch, lam, cfg))[0]

    def plus(self, x: Vertex, lam: complex, cfg: QuadConfig | None = None) -> np.ndarray:
        cfg = cfg or self.cfg
        return self._get(("plus", x.indices, complex(lam), cfg),
                         lambda: i_plus(self.geo, x, lam, cfg))[0]

    def minus(self, x: Vertex, lam: complex, cfg: QuadConfig | None = None) -> np.ndarray:
        cfg = cfg or self.cfg
        return self._get(("minus", x.indices, complex(lam), cfg),
                         lambda: i_minus(self.geo, x, lam, cfg))[0]

    def level_of(self, kind: str, key, lam: complex) -> int:
        return self._store[(kind, key, complex(lam), self.cfg)][1]


def _report(name, geo, lambdas, residuals, tol, details, cache) -> CheckReport:
    worst = max(residuals) if residuals else 0.0
    ok = bool(cache.converged) if cache is not None else True
    if not ok:
        log.warning("%s: some quadratures did not reach their tolerance", name)
    return CheckReport(name, describe(geo.arr), [complex(l) for l in lambdas], worst, tol,
                       bool(worst <= tol and ok), details, ok)


def describe(arr: Arrangement) -> str:
    return f"k={arr.k}, N={arr.n}, alpha={list(arr.weights)}"


def _setup(arr, cache):
    geo = arr if isinstance(arr, Geometry) else analyze(arr)
    if cache is None or cache.geo is not geo:
        cache = IntegralCache(geo, cache.cfg if cache is not None else None)
    return geo, cache


def check_ode(arr, lambdas=DEFAULT_LAMBDAS, tol: float = 1e-6, h: float = 1e-4,
              cache: IntegralCache | None = None) -> CheckReport:
    """Central differences of every chamber vector and every I+ vector."""
    geo, cache = _setup(arr, cache)
    ode = build_ode(geo)
    residuals, details = [], []
    targets = [("chamber", ch) for ch in geo.dplus] + [("plus", x) for x in geo.vertices]
    for lam in lambdas:
        for kind, obj in targets:
            if kind == "chamber":
                value = cache.chamber(obj, lam)
                level = cache.level_of("chamber", obj.signs, lam)
                fetch = cache.chamber
                label = obj.signs
            else:
                value = cache.plus(obj, lam)
                level = cache.level_of("plus", obj.indices, lam)
                fetch = cache.plus
                label = obj.indices
            pinned = replace(cache.cfg, fixed_level=level - 1)
            up, down = fetch(obj, lam + h, pinned), fetch(obj, lam - h, pinned)
            deriv = (up - down) / (2 * h)
            av, bv = ode.matA @ value, ode.matB @ value / lam
            r = _relative(deriv + av + bv, deriv, av, bv)
            residuals.append(r)
            details.append({"lambda": lam, "kind": kind, "target": list(label), "residual": r})
    return _report("ode", geo, lambdas, residuals, tol, details, cache)


def _dplus_values(geo, cache, lam):
    return {ch.signs: cache.chamber(ch, lam) for ch in geo.dplus}


def check_decomposition(arr, lambdas=(1.0, 2.0), tol: float = 1e-6,
                        cache: IntegralCache | None = None) -> CheckReport:
    """I+-_X against the eta-weighted sums of chamber integrals inside C+_X."""
    geo, cache = _setup(arr, cache)
    w = geo.arr.weights
    residuals, details = [], []
    for lam in lambdas:
        chambers = _dplus_values(geo, cache, lam)
        for x in geo.vertices:
            inside = [ch for ch in geo.dplus if geo.in_cone(ch, x)]
            terms = [eta(geo, x, ch).as_complex(w) * chambers[ch.signs] for ch in inside]
            plus = cache.plus(x, lam)
            minus = cache.minus(x, lam)
            conj_terms = [np.conj(eta(geo, x, ch).as_complex(w)) * chambers[ch.signs]
                          for ch in inside]
            r_plus = _relative(plus - sum(terms), plus, *terms)
            r_minus = _relative(minus - sum(conj_terms), minus, *conj_terms)
            residuals += [r_plus, r_minus]
            details.append({"lambda": lam, "vertex": list(x.indices),
                            "residual_plus": r_plus, "residual_minus": r_minus})
    return _report("decomposition", geo, lambdas, residuals, tol, details, cache)


def check_inversion(arr, lambdas=(1.0, 2.0), tol: float = 1e-6,
                    cache: IntegralCache | None = None) -> CheckReport:
    """I_Delta against the psi-weighted sums of I+-_X over vertices of its closure."""
    geo, cache = _setup(arr, cache)
    w = geo.arr.weights
    residuals, details = [], []
    for lam in lambdas:
        for ch in geo.dplus:
            target = cache.chamber(ch, lam)
            verts = [geo.vertex(i) for i in ch.vertices]
            terms = [psi(geo, ch, x).as_complex(w) * cache.plus(x, lam) for x in verts]
            conj_terms = [np.conj(psi(geo, ch, x).as_complex(w)) * cache.minus(x, lam)
                          for x in verts]
            r_plus = _relative(target - sum(terms), target, *terms)
            r_minus = _relative(target - sum(conj_terms), target, *conj_terms)
            residuals += [r_plus, r_minus]
            details.append({"lambda": lam, "chamber": list(ch.signs),
                            "residual_plus": r_plus, "residual_minus": r_minus})
    return _report("inversion", geo, lambdas, residuals, tol, details, cache)


def check_stokes_c0(arr, lambdas=DEFAULT_LAMBDAS, tol: float = 1e-6,
                    cache: IntegralCache | None = None) -> CheckReport:
    """I-_X = sum_X' C0(X', X) I+_X' at real positive lambda."""
    geo, cache = _setup(arr, cache)
    c0 = stokes_matrices(geo).c0
    residuals, details = [], []
    for lam in lambdas:
        lam = abs(lam)
        plus = [cache.plus(x, lam) for x in geo.vertices]
        for q, x in enumerate(geo.vertices):
            terms = [c0[p, q] * plus[p] for p in range(len(plus)) if c0[p, q] != 0]
            minus = cache.minus(x, lam)
            r = _relative(minus - sum(terms), minus, *terms)
            residuals.append(r)
            details.append({"lambda": lam, "vertex": list(x.indices), "residual": r})
    return _report("stokes_c0", geo, [abs(l) for l in lambdas], residuals, tol, details, cache)


def check_stokes_c1(arr, lambdas=(-1.0, -2.0), tol: float = 1e-6,
                    cache: IntegralCache | None = None) -> CheckReport:
    """exp(2 pi i alpha_X) I+_X = sum_X' C1(X', X) I-_X' at real negative lambda.

    Positive sample values are mirrored to -|lambda|.
    """
    geo, cache = _setup(arr, cache)
    c1 = stokes_matrices(geo).c1
    lambdas = [-abs(l) for l in lambdas]
    residuals, details = [], []
    for lam in lambdas:
        minus = [cache.minus(x, lam) for x in geo.vertices]
        for q, x in enumerate(geo.vertices):
            phase = np.exp(2j * math.pi * geo.arr.weight_sum(x.indices))
            lhs = phase * cache.plus(x, lam)
            terms = [c1[p, q] * minus[p] for p in range(len(minus)) if c1[p, q] != 0]
            r = _relative(lhs - sum(terms), lhs, *terms)
            residuals.append(r)
            details.append({"lambda": lam, "vertex": list(x.indices), "residual": r})
    return _report("stokes_c1", geo, lambdas, residuals, tol, details, cache)


def check_cohomological(arr, lambdas=DEFAULT_LAMBDAS, tol: float = 1e-6,
                        cache: IntegralCache | None = None,
                        pairs: Sequence[tuple[Chamber, tuple[int, ...]]] | None = None) -> CheckReport:
    """lambda int_Delta e^{-lambda f0} prod|f|^alpha df0 ^ omega_U
    = sum_{j not in U} sgn(l_j(e_U)) alpha_j I_{Delta, U+{j}}.

    By default every D+ chamber is paired with every (k-1)-subset of
    every vertex on its closure.
    """
    geo, cache = _setup(arr, cache)
    a = geo.arr
    if pairs is None:
        pairs = []
        for ch in geo.dplus:
            subsets = sorted({u for idx in ch.vertices for u in itertools.combinations(idx, a.k - 1)})
            pairs += [(ch, u) for u in subsets]
    position = geo.position
    residuals, details = [], []
    for lam in lambdas:
        for ch, u in pairs:
            u = tuple(sorted(u))
            scale = float(abs(det([a.f0] + [a.form(j).linear for j in u])))
            lhs = lam * chamber_integrals(geo, ch, lam, cache.cfg, [(u, scale)])[0].value
            vec = cache.chamber(ch, lam)
            e = geo.edge(u).direction
            terms = []
            for j in a.labels:
                if j in u:
                    continue
                s = 1 if a.form(j).lin(e) > 0 else -1
                terms.append(s * a.alpha(j) * vec[position[tuple(sorted(u + (j,)))]])
            r = _relative(np.array([lhs - sum(terms)]), np.array([lhs]), np.array(terms))
            residuals.append(r)
            details.append({"lambda": lam, "chamber": list(ch.signs), "U": list(u), "residual": r})
    return _report("cohomological", geo, lambdas, residuals, tol, details, cache)


WRONSKIAN_THRESHOLD = 1e-10


def check_wronskian(arr, lam0: float = 1.0, tol: float = 1.0 / WRONSKIAN_THRESHOLD,
                    cache: IntegralCache | None = None) -> CheckReport:
    """|det(I_{Delta,X})| against the product of column norms.

    The residual is (product of norms) / |det|; it stays below 1e10 iff the
    determinant clears the threshold.
    """
    geo, cache = _setup(arr, cache)
    mat = np.array([cache.chamber(ch, lam0) for ch in geo.dplus])
    d = abs(np.linalg.det(mat))
    norms = float(np.prod(np.linalg.norm(mat, axis=0)))
    r = norms / d if d > 0 else math.inf
    details = [{"lambda": lam0, "det": d, "column_norm_product": norms, "residual": r}]
    return _report("wronskian", geo, [lam0], [r], tol, details, cache)


def check_asymptotics(arr, lambdas=ASYMPTOTIC_GRID, tol: float = 1e-2,
                      cache: IntegralCache | None = None) -> CheckReport:
    """I+_{X,X} lambda^alpha_X e^{lambda f0(X)} / (sigma_X D_{X,X}) at the largest lambda.

    sigma_X is the sign of prod_{j in X} f_j on Delta_X. Off-diagonal
    components are reported relative to the diagonal one.
    """
    geo, cache = _setup(arr, cache)
    lambdas = sorted(lambdas)
    residuals, details = [], []
    for q, x in enumerate(geo.vertices):
        sigma = math.prod(geo.cone_side(x, j) for j in x.indices)
        d = sigma * asymptotic_constants(geo, x, x).D
        alpha_x = geo.arr.weight_sum(x.indices)
        ratios = []
        for lam in lambdas:
            vec = cache.plus(x, lam)
            norm = lam ** alpha_x * math.exp(lam * float(x.f0_value))
            ratio = vec[q] * norm / d
            ratios.append(ratio)
            others = float(np.max(np.abs(np.delete(vec, q)) / abs(vec[q]))) if len(vec) > 1 else 0.0
            details.append({"lambda": lam, "vertex": list(x.indices), "ratio": ratio,
                            "off_diagonal_relative": others})
        residuals.append(abs(ratios[-1] - 1))
    return _report("asymptotics", geo, lambdas, residuals, tol, details, cache)


def run_checks(arr, names: Sequence[str] = CHECK_NAMES, lambdas: Sequence[complex] | None = None,
               tol: float | None = None, cfg: QuadConfig | None = None) -> list[CheckReport]:
    """Run the named checks in declaration order with one shared integral cache."""
    geo = arr if isinstance(arr, Geometry) else analyze(arr)
    cache = IntegralCache(geo, cfg)
    unknown = [n for n in names if n not in CHECK_NAMES]
    if unknown:
        raise ValueError(f"unknown checks: {unknown}")
    out = []
    for name in CHECK_NAMES:
        if name not in names:
            continue
        kwargs: dict = {"cache": cache}
        if tol is not None and name != "wronskian":
            kwargs["tol"] = tol
        if lambdas is not None:
            if name == "wronskian":
                kwargs["lam0"] = lambdas[0]
            else:
                kwargs["lambdas"] = list(lambdas)
        out.append(CHECKS[name](geo, **kwargs))
    return out


CHECKS = {
    "ode": check_ode,
    "decomposition": check_decomposition,
    "inversion": check_inversion,
    "stokes_c0": check_stokes_c0,
    "stokes_c1": check_stokes_c1,
    "cohomological": check_cohomological,
    "wronskian": check_wronskian,
    "asymptotics": check_asymptotics,
}
