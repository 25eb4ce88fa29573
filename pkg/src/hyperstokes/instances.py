"""Ready-made arrangements: points on a line, the triangle, random ones."""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

import numpy as np

from .arrangement import AffineForm, Arrangement, validate_genericity


def points_on_line(points: Sequence, weights: Sequence[float]) -> Arrangement:
    """k = 1, f_j(z) = z - X_j, f0(z) = z."""
    forms = [AffineForm((1,), -Fraction(p)) for p in points]
    return Arrangement(1, tuple(forms), tuple(weights), (1,))


def triangle(a, b, weights: Sequence[float]) -> Arrangement:
    """x, y, x + y - 1 in the plane with f0 = a x + b y (needs a > b > 0)."""
    a, b = Fraction(a), Fraction(b)
    if not a > b > 0:
        raise ValueError("the triangle example needs a > b > 0")
    forms = [AffineForm((1, 0), 0), AffineForm((0, 1), 0), AffineForm((1, 1), -1)]
    return Arrangement(2, tuple(forms), tuple(weights), (a, b))


def random_arrangement(rng: np.random.Generator, k: int, n: int, *,
                       coeff_range: int | None = None, weight_range=(0.2, 0.8),
                       max_tries: int = 1000) -> Arrangement:
    """Random generic arrangement with small integer coefficients."""
    if coeff_range is None:
        coeff_range = max(5, 4 * n)
    for _ in range(max_tries):
        forms = []
        for _ in range(n):
            lin = rng.integers(-coeff_range, coeff_range + 1, size=k)
            if not lin.any():
                lin[0] = 1
            forms.append(AffineForm(tuple(int(c) for c in lin),
                                    int(rng.integers(-coeff_range, coeff_range + 1))))
        f0 = tuple(Fraction(int(c), 7) + Fraction(1, 13 * (i + 2))
                   for i, c in enumerate(rng.integers(-coeff_range, coeff_range + 1, size=k)))
        weights = tuple(float(w) for w in rng.uniform(*weight_range, size=n))
        arr = Arrangement(k, tuple(forms), weights, f0)
        if not validate_genericity(arr):
            return arr
    raise RuntimeError("could not draw a generic arrangement")
