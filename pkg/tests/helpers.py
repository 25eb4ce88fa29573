"""Shared instances and independent oracles for the test suite."""

from __future__ import annotations

import itertools
from fractions import Fraction

import numpy as np
from scipy.optimize import linprog

from hyperstokes.instances import points_on_line, random_arrangement, triangle

EXAMPLE2_WEIGHTS = (0.3, 0.4, 0.5)


def line_instances():
    """k = 1 with N = 1, 2, 3 and weights drawn from one seeded stream."""
    rng = np.random.default_rng(0)
    points = ([0], [0, 1], [0, 1, Fraction(5, 2)])
    return [points_on_line(p, tuple(rng.uniform(0.2, 0.8, len(p)))) for p in points]


def example2():
    return triangle(2, 1, EXAMPLE2_WEIGHTS)


def standard_instances():
    return line_instances() + [example2()]


INSTANCE_IDS = ["line-N1", "line-N2", "line-N3", "triangle"]


def random_instances(seed: int, count: int, max_k: int = 3, max_n: int = 6):
    rng = np.random.default_rng(seed)
    out = []
    for _ in range(count):
        k = int(rng.integers(1, max_k + 1))
        n = int(rng.integers(k, max_n + 1))
        out.append(random_arrangement(rng, k, n))
    return out


def _float_system(arr):
    lin = np.array([[float(c) for c in f.linear] for f in arr.forms])
    const = np.array([float(f.constant) for f in arr.forms])
    return lin, const


def lp_chamber_signs(arr) -> set[tuple[int, ...]]:
    """Brute force over all 2^N sign vectors: keep those with an interior point."""
    lin, const = _float_system(arr)
    norms = np.linalg.norm(lin, axis=1)
    found = set()
    for signs in itertools.product((1, -1), repeat=arr.n):
        s = np.array(signs, dtype=float)
        # maximize t subject to s_j f_j(x) >= t |l_j|, t <= 1
        a_ub = np.hstack([-(s[:, None] * lin), norms[:, None]])
        b_ub = s * const
        res = linprog(np.r_[np.zeros(arr.k), -1.0], A_ub=a_ub, b_ub=b_ub,
                      bounds=[(None, None)] * arr.k + [(None, 1.0)], method="highs")
        if res.status == 0 and -res.fun > 1e-9:
            found.add(signs)
    return found


def lp_minimum_of_f0(arr, signs):
    """(bounded, argmin) of f0 over the closed chamber with the given signs."""
    lin, const = _float_system(arr)
    s = np.array(signs, dtype=float)
    res = linprog([float(c) for c in arr.f0], A_ub=-(s[:, None] * lin), b_ub=s * const,
                  bounds=[(None, None)] * arr.k, method="highs")
    if res.status == 2:
        # presolve may report an unbounded problem as infeasible
        feas = linprog(np.zeros(arr.k), A_ub=-(s[:, None] * lin), b_ub=s * const,
                       bounds=[(None, None)] * arr.k, method="highs")
        assert feas.status == 0, "empty chamber"
        return False, None
    if res.status == 3:
        return False, None
    assert res.status == 0, res.message
    return True, res.x
