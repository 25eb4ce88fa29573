"""Vertices, edges, chambers and cones of a generic affine arrangement.

All predicates are exact: coefficients are stored as Fractions and every
sign is decided without tolerance. Hyperplanes are labelled 1..N, and a
vertex is identified with the sorted tuple of the k labels meeting there.
"""

from __future__ import annotations

import functools
import itertools
from dataclasses import dataclass, field, replace
from fractions import Fraction
from math import comb
from typing import Iterable, Sequence

from .linalg import (
    SingularMatrixError,
    Vector,
    det,
    dot,
    kernel_vector,
    sign,
    solve,
    to_fraction,
)

Indices = tuple[int, ...]

# Tolerance used only where a caller hands us floating point samples.
SIGN_TOL = 1e-9


@dataclass(frozen=True)
class AffineForm:
    linear: Vector
    constant: Fraction

    def __post_init__(self):
        object.__setattr__(self, "linear", tuple(to_fraction(c) for c in self.linear))
        object.__setattr__(self, "constant", to_fraction(self.constant))
        if all(c == 0 for c in self.linear):
            raise ValueError("affine form has zero linear part")

    def __call__(self, z: Sequence) -> Fraction:
        return dot(self.linear, z) + self.constant

    def lin(self, v: Sequence) -> Fraction:
        return dot(self.linear, v)


@dataclass(frozen=True)
class Arrangement:
    """N affine forms on R^k, their positive weights and the form f0."""

    k: int
    forms: tuple[AffineForm, ...]
    weights: tuple[float, ...]
    f0: Vector

    def __post_init__(self):
        object.__setattr__(self, "forms", tuple(self.forms))
        object.__setattr__(self, "weights", tuple(float(w) for w in self.weights))
        object.__setattr__(self, "f0", tuple(to_fraction(c) for c in self.f0))
        if self.k < 1:
            raise ValueError("dimension k must be >= 1")
        if len(self.forms) < self.k:
            raise ValueError(f"need N >= k forms, got N={len(self.forms)}, k={self.k}")
        if len(self.weights) != len(self.forms):
            raise ValueError("one weight per form is required")
        if any(not w > 0 for w in self.weights):
            raise ValueError("weights must be positive")
        if len(self.f0) != self.k or any(len(f.linear) != self.k for f in self.forms):
            raise ValueError("all linear parts must have length k")

    @property
    def n(self) -> int:
        return len(self.forms)

    @property
    def labels(self) -> range:
        return range(1, self.n + 1)

    def form(self, j: int) -> AffineForm:
        return self.forms[j - 1]

    def alpha(self, j: int) -> float:
        return self.weights[j - 1]

    def weight_sum(self, labels: Iterable[int]) -> float:
        return sum(self.weights[j - 1] for j in labels)

    def f0_value(self, z: Sequence) -> Fraction:
        return dot(self.f0, z)

    def reflected(self) -> "Arrangement":
        """Same hyperplanes and weights, direction form -f0."""
        return replace(self, f0=tuple(-c for c in self.f0))


@dataclass(frozen=True)
class Vertex:
    indices: Indices
    point: Vector
    f0_value: Fraction
    orientation_sign: int


@dataclass(frozen=True)
class Edge:
    indices: Indices
    direction: Vector


@dataclass(frozen=True)
class Chamber:
    signs: tuple[int, ...]
    interior_point: Vector
    bounded: bool
    vertices: tuple[Indices, ...] = ()
    in_dplus: bool = False
    min_vertex: Vertex | None = None

    def sign_of(self, j: int) -> int:
        return self.signs[j - 1]


@dataclass(frozen=True)
class ConeMembership:
    status: str  # "interior", "boundary" or "outside"
    coefficients: dict[int, Fraction] = field(default_factory=dict)


@dataclass(frozen=True)
class GenericityViolation:
    kind: str
    indices: Indices
    message: str


class OnHyperplaneError(ValueError):
    def __init__(self, j: int, value: float):
        super().__init__(f"point lies on hyperplane {j} (|f_{j}| = {value:.3g})")
        self.index = j


def _linear_rows(arr: Arrangement, labels: Iterable[int]) -> list[Vector]:
    return [arr.form(j).linear for j in labels]


def validate_genericity(arr: Arrangement) -> list[GenericityViolation]:
    """Every way the arrangement fails to be generic; empty when valid."""
    out: list[GenericityViolation] = []
    k, labels = arr.k, list(arr.labels)
    points: dict[Indices, Vector] = {}
    for subset in itertools.combinations(labels, k):
        rows = _linear_rows(arr, subset)
        if det(rows) == 0:
            out.append(GenericityViolation(
                "dependent", subset, f"linear parts of {set(subset)} are dependent"))
            continue
        points[subset] = solve(rows, [-arr.form(j).constant for j in subset])
    for subset in itertools.combinations(labels, k + 1):
        # a common point, if any, is the vertex of any independent k-subset
        head = next((h for h in itertools.combinations(subset, k) if h in points), None)
        if head is None:
            continue
        (extra,) = [j for j in subset if j not in head]
        if arr.form(extra)(points[head]) == 0:
            out.append(GenericityViolation(
                "concurrent", subset, f"hyperplanes {set(subset)} share a point"))
    seen: dict[Fraction, Indices] = {}
    for subset, p in points.items():
        value = arr.f0_value(p)
        if value in seen:
            out.append(GenericityViolation(
                "f0-collision", tuple(sorted(set(seen[value]) | set(subset))),
                f"f0 takes the value {value} at vertices {seen[value]} and {subset}"))
        else:
            seen[value] = subset
    for subset in itertools.combinations(labels, k - 1):
        rows = _linear_rows(arr, subset)
        direction = kernel_vector(rows, k) if k > 1 else (Fraction(1),)
        if all(c == 0 for c in direction):
            continue  # dependent rows, reported through the k-subsets
        if arr.f0_value(direction) == 0:
            out.append(GenericityViolation(
                "f0-constant-on-edge", subset, f"f0 is constant on edge {set(subset) or '{}'}"))
    return out


def enumerate_vertices(arr: Arrangement) -> list[Vertex]:
    out = []
    for subset in itertools.combinations(arr.labels, arr.k):
        rows = _linear_rows(arr, subset)
        d = det(rows)
        if d == 0:
            raise SingularMatrixError(f"hyperplanes {subset} do not meet in a point")
        point = solve(rows, [-arr.form(j).constant for j in subset])
        out.append(Vertex(subset, point, arr.f0_value(point), sign(d)))
    out.sort(key=lambda v: v.f0_value)
    return out


def edge_direction(arr: Arrangement, subset: Iterable[int]) -> Edge:
    """Direction e_U of the line cut out by U, normalized to f0(e_U) = 1."""
    subset = tuple(sorted(subset))
    if len(subset) != arr.k - 1:
        raise ValueError("an edge is cut out by exactly k - 1 hyperplanes")
    if arr.k == 1:
        v: Vector = (Fraction(1),)
    else:
        v = kernel_vector(_linear_rows(arr, subset), arr.k)
    scale = arr.f0_value(v)
    if scale == 0:
        raise SingularMatrixError(f"f0 is constant on the edge {subset}")
    return Edge(subset, tuple(c / scale for c in v))


def _chamber_candidates(arr: Arrangement, vertices: Sequence[Vertex]):
    """Each vertex sees 2^k local orthants; each lies in exactly one chamber."""
    found: dict[tuple[int, ...], tuple[Vector, list[Indices]]] = {}
    for vx in vertices:
        rows = _linear_rows(arr, vx.indices)
        values = [arr.form(j)(vx.point) for j in arr.labels]
        slack = min((abs(values[j - 1]) for j in arr.labels if j not in vx.indices),
                    default=None)
        for pattern in itertools.product((1, -1), repeat=arr.k):
            d = solve(rows, pattern)
            signs = [sign(v) for v in values]
            for j, s in zip(vx.indices, pattern):
                signs[j - 1] = s
            key = tuple(signs)
            if key not in found:
                if slack is None:
                    eps = Fraction(1)
                else:
                    bound = min(abs(values[j - 1]) / (1 + abs(arr.form(j).lin(d)))
                                for j in arr.labels if j not in vx.indices)
                    eps = bound / 2
                point = tuple(p + eps * c for p, c in zip(vx.point, d))
                found[key] = (point, [])
            found[key][1].append(vx.indices)
    return found


def _is_bounded(arr: Arrangement, signs: Sequence[int], on_closure, edges) -> bool:
    for idx in on_closure:
        for j in idx:
            rest = tuple(i for i in idx if i != j)
            if rest not in edges:
                edges[rest] = edge_direction(arr, rest).direction
            e = edges[rest]
            g_sign = sign(signs[j - 1] * arr.form(j).lin(e))
            if all(signs[r - 1] * g_sign * arr.form(r).lin(e) > 0
                   for r in arr.labels if r not in idx):
                return False
    return True


def enumerate_chambers(arr: Arrangement) -> list[Chamber]:
    """All chambers, in lexicographic order of sign vectors (+ before -).

    Enumeration walks the local orthants at the vertices: every chamber
    closure is a pointed polyhedron (N >= k independent normals), so it
    has a vertex, and the chambers adjacent to a vertex are exactly its
    2^k orthants.
    """
    vertices = enumerate_vertices(arr)
    vertex_map = {v.indices: v for v in vertices}
    found = _chamber_candidates(arr, vertices)
    edges: dict[Indices, Vector] = {}
    out = []
    for signs in sorted(found, reverse=True):
        point, on_closure = found[signs]
        out.append(Chamber(
            signs=signs,
            interior_point=point,
            bounded=_is_bounded(arr, signs, on_closure, edges),
            vertices=tuple(sorted(on_closure, key=lambda i: vertex_map[i].f0_value)),
        ))
    return out


def cone_side(arr: Arrangement, vx: Vertex | Indices, j: int) -> int:
    """Sign of f_j on the open cone C+ at the vertex (j must pass through it)."""
    idx = vx.indices if isinstance(vx, Vertex) else vx
    rest = tuple(i for i in idx if i != j)
    return sign(arr.form(j).lin(edge_direction(arr, rest).direction))


def classify_dplus(arr: Arrangement, chambers: Sequence[Chamber]) -> list[Chamber]:
    """Fill ``in_dplus`` and ``min_vertex``.

    f0 attains its minimum over a chamber closure at a vertex X exactly
    when the chamber's local orthant at X is the cone C+_X (convexity:
    local minimality along all edges is global).
    """
    vertex_map = {v.indices: v for v in enumerate_vertices(arr)}
    sides = {idx: {j: cone_side(arr, idx, j) for j in idx} for idx in vertex_map}
    out = []
    for ch in chambers:
        best = None
        for idx in ch.vertices:
            if all(ch.sign_of(j) == sides[idx][j] for j in idx):
                best = vertex_map[idx]
                break
        out.append(replace(ch, in_dplus=best is not None, min_vertex=best))
    return out


def separating_set(c1: Chamber, c2: Chamber) -> frozenset[int]:
    return frozenset(j + 1 for j, (a, b) in enumerate(zip(c1.signs, c2.signs)) if a != b)


def cone_membership(arr: Arrangement, x: Vertex, xp: Vertex, cone_sign: int = 1) -> ConeMembership:
    """Locate X' relative to the cone X + sign * sum a_j e_{X-{j}}, a_j >= 0."""
    diff = [a - b for a, b in zip(xp.point, x.point)]
    coeffs = {}
    for j in x.indices:
        rest = tuple(i for i in x.indices if i != j)
        e = edge_direction(arr, rest).direction
        form = arr.form(j)
        coeffs[j] = cone_sign * form.lin(diff) / form.lin(e)
    if all(a > 0 for a in coeffs.values()):
        status = "interior"
    elif all(a >= 0 for a in coeffs.values()):
        status = "boundary"
    else:
        status = "outside"
    return ConeMembership(status, coeffs)


def chamber_of_point(arr: Arrangement, p: Sequence, chambers: Sequence[Chamber] | None = None,
                     tol: float = SIGN_TOL) -> Chamber:
    """Chamber containing p. Float points within ``tol`` of a hyperplane are rejected."""
    exact = all(isinstance(c, (int, Fraction)) for c in p)
    signs = []
    for j in arr.labels:
        form = arr.form(j)
        if exact:
            value = form(p)
            if value == 0:
                raise OnHyperplaneError(j, 0.0)
        else:
            value = sum(float(a) * float(b) for a, b in zip(form.linear, p)) + float(form.constant)
            norm = sum(float(a) ** 2 for a in form.linear) ** 0.5
            if abs(value) <= tol * max(norm, 1.0):
                raise OnHyperplaneError(j, abs(value))
        signs.append(sign(value))
    signs = tuple(signs)
    for ch in chambers if chambers is not None else enumerate_chambers(arr):
        if ch.signs == signs:
            return ch
    raise LookupError(f"no chamber with sign vector {signs}")


def expected_chamber_count(n: int, k: int) -> int:
    return sum(comb(n, i) for i in range(k + 1))


class Geometry:
    """Precomputed combinatorics of a valid arrangement.

    Built once per arrangement (see :func:`analyze`) and treated as
    read-only afterwards.
    """

    def __init__(self, arr: Arrangement):
        violations = validate_genericity(arr)
        if violations:
            raise GenericityError(violations)
        self.arr = arr
        self.vertices: list[Vertex] = enumerate_vertices(arr)
        self.position = {v.indices: i for i, v in enumerate(self.vertices)}
        self.chambers: list[Chamber] = classify_dplus(arr, enumerate_chambers(arr))
        self.delta: dict[Indices, Chamber] = {
            c.min_vertex.indices: c for c in self.chambers if c.in_dplus}
        self._edges: dict[Indices, Edge] = {}
        for subset in itertools.combinations(arr.labels, arr.k - 1):
            self._edges[subset] = edge_direction(arr, subset)

    @property
    def k(self) -> int:
        return self.arr.k

    @property
    def dplus(self) -> list[Chamber]:
        """D+ chambers, listed in the vertex order (Delta_X for X ascending)."""
        return [self.delta[v.indices] for v in self.vertices]

    def vertex(self, idx: Iterable[int]) -> Vertex:
        return self.vertices[self.position[tuple(sorted(idx))]]

    def edge(self, subset: Iterable[int]) -> Edge:
        return self._edges[tuple(sorted(subset))]

    def cone_direction(self, x: Vertex | Indices, j: int) -> Vector:
        """e_{X - {j}}."""
        idx = x.indices if isinstance(x, Vertex) else x
        return self.edge(i for i in idx if i != j).direction

    def cone_side(self, x: Vertex | Indices, j: int) -> int:
        return sign(self.arr.form(j).lin(self.cone_direction(x, j)))

    def in_cone(self, ch: Chamber, x: Vertex, cone_sign: int = 1) -> bool:
        """Whether the chamber lies inside the open cone C+_X (or C-_X)."""
        return all(ch.sign_of(j) == cone_sign * self.cone_side(x, j) for j in x.indices)

    def on_closure(self, ch: Chamber, x: Vertex) -> bool:
        return x.indices in ch.vertices

    def cone_sample(self, x: Vertex, cone_sign: int = 1) -> Vector:
        """A point of the open cone C+-_X near X, exact.

        X + eps * d with d = sum_j e_{X-{j}}, eps small enough that no other
        hyperplane is crossed.
        """
        arr = self.arr
        d = [Fraction(0)] * arr.k
        for j in x.indices:
            for i, c in enumerate(self.cone_direction(x, j)):
                d[i] += cone_sign * c
        others = [j for j in arr.labels if j not in x.indices]
        if others:
            eps = min(abs(arr.form(j)(x.point)) / (1 + abs(arr.form(j).lin(d))) for j in others) / 2
        else:
            eps = Fraction(1)
        return tuple(p + eps * c for p, c in zip(x.point, d))


class GenericityError(ValueError):
    def __init__(self, violations: list[GenericityViolation]):
        super().__init__("; ".join(v.message for v in violations))
        self.violations = violations


@functools.lru_cache(maxsize=64)
def analyze(arr: Arrangement) -> Geometry:
    return Geometry(arr)
