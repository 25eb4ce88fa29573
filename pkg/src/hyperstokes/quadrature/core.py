"""Shared quadrature configuration, result type and the refinement loop."""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class IntegralValue:
    value: complex
    error_estimate: float
    nodes_used: int
    converged: bool = True
    level: int = 0


@dataclass(frozen=True)
class QuadConfig:
    """Refinement controls.

    Level L uses ceil(base_nodes * growth^L) nodes per panel and
    dimension; the error estimate is the difference between the last two
    levels. ``fixed_level`` skips the adaptive search (needed when values
    at nearby lambda are differenced). ``panels=None`` picks the panel
    count from the dimension, since tensor grids grow like panels^k.
    """

    rel_tol: float = 1e-8
    min_level: int = 1
    max_level: int = 5
    fixed_level: int | None = None
    base_nodes: int = 8
    growth: float = 1.5
    panels: int | None = None
    ratio: float = 0.5
    max_nodes: int = 20_000_000
    tail_tol: float | None = None

    def panels_for(self, k: int) -> int:
        if self.panels is not None:
            return self.panels
        return {1: 8, 2: 4}.get(k, 2)

    def truncation_radius(self, power: float) -> float:
        """R with exp(-R) (1 + R)^power below 1% of the tolerance."""
        target = 0.01 * (self.tail_tol if self.tail_tol is not None else self.rel_tol)
        r = -math.log(target)
        for _ in range(100):
            nxt = -math.log(target) + power * math.log1p(r)
            if abs(nxt - r) < 1e-12:
                break
            r = nxt
        return r


def refine(evaluate: Callable[[int], tuple[np.ndarray, int]], cfg: QuadConfig,
           cost: Callable[[int], int] | None = None):
    """Run ``evaluate(level)`` on increasing levels until two agree.

    ``evaluate`` returns the vector of component values and the node
    count; ``cost(level)``, when given, predicts that count so a level
    that would overrun ``max_nodes`` is never started.
    Returns (values, errors, nodes, level, converged).
    """
    if cfg.fixed_level is not None:
        a, n_a = evaluate(cfg.fixed_level)
        b, n_b = evaluate(cfg.fixed_level + 1)
        err = np.abs(b - a)
        scale = np.max(np.abs(b)) if b.size else 0.0
        ok = bool(np.all(err <= cfg.rel_tol * max(scale, 1e-300)))
        return b, err, n_a + n_b, cfg.fixed_level + 1, ok
    prev, used = evaluate(cfg.min_level)
    level = cfg.min_level
    while True:
        level += 1
        cur, n = evaluate(level)
        used += n
        err = np.abs(cur - prev)
        scale = np.max(np.abs(cur)) if cur.size else 0.0
        if np.all(err <= cfg.rel_tol * max(scale, 1e-300)):
            return cur, err, used, level, True
        over_budget = cost is not None and used + cost(level + 1) > cfg.max_nodes
        if level >= cfg.max_level or used >= cfg.max_nodes or over_budget:
            log.warning("quadrature not converged: level %d, max error %.3g, scale %.3g",
                        level, float(err.max()), scale)
            return cur, err, used, level, False
        prev = cur


def as_values(values, errors, nodes, level, converged) -> list[IntegralValue]:
    return [IntegralValue(complex(v), float(e), int(nodes), converged, level)
            for v, e in zip(values, errors)]
