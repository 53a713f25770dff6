"""Closed-form rank and dimension predictors, in exact integer arithmetic.

The even-characteristic formulas involve powers of (1 +- sqrt(17))/2;
their sum is evaluated through the integer recurrence with
characteristic polynomial x^2 - x - 4 (root sum 1, root product -4),
never through floating point.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass

from lu3q.fields import factor_prime_power


@dataclass(frozen=True)
class RankPrediction:
    q: int
    t: int
    rank_pl: int
    rank_p1l1: int
    dim_lu: int
    parity: str  # "even" or "odd"


@functools.lru_cache(maxsize=None)
def lucas17(n: int) -> int:
    """Power sum s_n = r1^n + r2^n for the roots of x^2 - x - 4."""
    if n < 0:
        raise ValueError("n must be >= 0")
    a, b = 2, 1  # s_0, s_1
    if n == 0:
        return a
    for _ in range(n - 1):
        a, b = b, b + 4 * a
    return b


def predict_even(t: int) -> RankPrediction:
    """Rank/dimension predictions for q = 2^t."""
    if t < 1:
        raise ValueError("t must be >= 1")
    q = 2**t
    s = lucas17(2 * t)
    rank_pl = 1 + s
    rank_p1l1 = 1 + s - 2 ** (t + 1)
    dim_lu = 2 ** (3 * t) + 2 ** (t + 1) - 1 - s
    return RankPrediction(q, t, rank_pl, rank_p1l1, dim_lu, "even")


def predict_odd(q: int) -> RankPrediction:
    """Rank/dimension predictions for an odd prime power q."""
    p, t = factor_prime_power(q)
    if p == 2:
        raise ValueError(f"q={q} is even; use predict_even")
    rank_pl = (q**3 + 2 * q**2 + q + 2) // 2
    rank_p1l1 = (q**3 + 2 * q**2 - 3 * q + 2) // 2
    dim_lu = (q**3 - 2 * q**2 + 3 * q - 2) // 2
    return RankPrediction(q, t, rank_pl, rank_p1l1, dim_lu, "odd")


def predict(q: int) -> RankPrediction:
    """Prediction for any prime power q, dispatching on parity."""
    p, t = factor_prime_power(q)
    return predict_even(t) if p == 2 else predict_odd(q)
