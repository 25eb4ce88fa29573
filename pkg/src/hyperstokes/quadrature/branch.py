"""Continuous determination of w^alpha along a path in C minus 0."""

from __future__ import annotations

import cmath
from dataclasses import dataclass
from typing import Callable, Sequence

MAX_STEP = cmath.pi / 2


class BranchError(ValueError):
    pass


@dataclass(frozen=True)
class BranchPath:
    """Samples w_0, ..., w_m of a path, the exponent, and the starting log.

    ``start_log`` defaults to the principal log of the first sample.
    """

    samples: tuple[complex, ...]
    exponent: float
    start_log: complex | None = None

    @classmethod
    def trace(cls, fn: Callable[[float], complex], exponent: float, n: int = 16,
              start_log: complex | None = None, max_depth: int = 30) -> "BranchPath":
        """Sample ``fn`` on [0, 1], bisecting wherever the argument jumps too far."""
        ts = [i / n for i in range(n + 1)]
        values = [complex(fn(t)) for t in ts]
        out_t, out_v = [ts[0]], [values[0]]
        stack = list(zip(ts[1:], values[1:]))[::-1]
        depth = {t: 0 for t in ts}
        while stack:
            t1, v1 = stack.pop()
            t0, v0 = out_t[-1], out_v[-1]
            if v1 == 0:
                raise BranchError(f"path passes through 0 at t = {t1}")
            if abs(cmath.phase(v1 / v0)) >= MAX_STEP:
                d = depth.get(t1, 0)
                if d >= max_depth:
                    raise BranchError("argument step stays >= pi/2 after refinement")
                tm = 0.5 * (t0 + t1)
                vm = complex(fn(tm))
                depth[tm] = d + 1
                depth[t1] = d + 1
                stack.append((t1, v1))
                stack.append((tm, vm))
                continue
            out_t.append(t1)
            out_v.append(v1)
        return cls(tuple(out_v), exponent, start_log)


def accumulated_log(path: BranchPath) -> complex:
    if not path.samples:
        raise BranchError("empty path")
    w0 = path.samples[0]
    if w0 == 0:
        raise BranchError("path starts at 0")
    log = path.start_log if path.start_log is not None else cmath.log(w0)
    for a, b in zip(path.samples, path.samples[1:]):
        if b == 0:
            raise BranchError("path passes through 0")
        step = cmath.phase(b / a)
        if abs(step) >= MAX_STEP:
            raise BranchError("consecutive samples differ in argument by >= pi/2")
        log += complex(cmath.log(abs(b) / abs(a)), step)
    return log


def continue_branch(path: BranchPath) -> complex:
    """w^alpha at the end of the path, continued from the starting branch."""
    return cmath.exp(path.exponent * accumulated_log(path))


def segment(w0: complex, w1: complex) -> Callable[[float], complex]:
    return lambda t: w0 + t * (w1 - w0)


def arc(center: complex, radius: float, theta0: float, theta1: float) -> Callable[[float], complex]:
    return lambda t: center + radius * cmath.exp(1j * (theta0 + t * (theta1 - theta0)))

