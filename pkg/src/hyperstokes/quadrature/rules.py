"""One-dimensional rules on [0, 1] with an endpoint power weight at 0.

``graded_rule`` splits [0, 1] into geometrically shrinking panels towards
0. The panel touching 0 uses Gauss-Jacobi for the weight x^beta; the other
panels use Gauss-Legendre with the weight folded into the rule. All arrays
are cached and returned read-only.
"""

from __future__ import annotations

import functools

import numpy as np
from scipy.special import roots_jacobi, roots_legendre


def _frozen(*arrays):
    for a in arrays:
        a.setflags(write=False)
    return arrays


@functools.lru_cache(maxsize=256)
def jacobi01(n: int, beta: float) -> tuple[np.ndarray, np.ndarray]:
    """Nodes and weights for int_0^1 x^beta g(x) dx, beta > -1."""
    if beta <= -1:
        raise ValueError(f"weight exponent {beta} is not integrable at 0")
    if beta == 0:
        return legendre01(n)
    t, w = roots_jacobi(n, 0.0, beta)
    x = 0.5 * (t + 1.0)
    w = w * 0.5 ** (1.0 + beta)
    return _frozen(x, w)


@functools.lru_cache(maxsize=64)
def legendre01(n: int) -> tuple[np.ndarray, np.ndarray]:
    t, w = roots_legendre(n)
    return _frozen(0.5 * (t + 1.0), 0.5 * w)


@functools.lru_cache(maxsize=512)
def graded_rule(n: int, beta: float, panels: int = 8, ratio: float = 0.5):
    """Composite rule for int_0^1 x^beta g(x) dx with smooth g.

    ``panels`` intervals [ratio^(i+1), ratio^i] plus the first one
    [0, ratio^(panels-1)], each with ``n`` nodes.
    """
    if panels < 1:
        raise ValueError("need at least one panel")
    edges = [0.0] + [ratio ** i for i in range(panels - 1, -1, -1)]
    xs, ws = [], []
    xj, wj = jacobi01(n, beta)
    h = edges[1]
    xs.append(h * xj)
    ws.append(h ** (1.0 + beta) * wj)
    xl, wl = legendre01(n)
    for lo, hi in zip(edges[1:-1], edges[2:]):
        x = lo + (hi - lo) * xl
        xs.append(x)
        ws.append((hi - lo) * wl * x ** beta)
    return _frozen(np.concatenate(xs), np.concatenate(ws))


def tensor_grid(rules) -> tuple[np.ndarray, np.ndarray]:
    """Product of 1-D (nodes, weights) rules: points (M, d) and weights (M,)."""
    pts = np.stack(np.meshgrid(*[r[0] for r in rules], indexing="ij"), -1)
    wts = functools.reduce(np.multiply.outer, [r[1] for r in rules])
    return pts.reshape(-1, len(rules)), np.asarray(wts).reshape(-1)


def nodes_for_level(level: int, base: int = 8, growth: float = 1.5) -> int:
    return int(np.ceil(base * growth ** level))
