"""Continued-fraction evaluation of minimal-solution ratios.

The ratio of successive minimal-solution elements of the three-term recurrence
K_{n+1} + a(n) K_n + b(n) K_{n-1} = 0 is

    R_n = -b(n+1) / (a(n+1) - b(n+2) / (a(n+2) - ...)).

The primary evaluator is forward modified Lentz with a depth-doubling residual
estimate; Miller-style backward recursion is the independent cross-check.
Both accept any object exposing ``a(n)`` and ``b(n)`` (and optionally
``tail_ratio_scale``), so surrogate coefficient sequences can be used in tests.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import CoefficientPole, DivisionBlowup

_TINY = 1e-30
_DENOM_FLOOR = 1e-300

DEFAULT_REL_TOL = 1e-12
DEFAULT_MAX_DEPTH = 2**20
_FIRST_CHECKPOINT = 64


@dataclass(frozen=True)
class CFValue:
    """Converged continued-fraction value with convergence metadata.

    ``residual`` is the absolute change of the value on the last depth
    doubling; ``converged`` means it met the requested relative tolerance.
    """

    value: float
    depth: int
    converged: bool
    residual: float


def eval_continued_fraction(
    coeffs,
    start: int = 0,
    rel_tol: float = DEFAULT_REL_TOL,
    max_depth: int = DEFAULT_MAX_DEPTH,
) -> CFValue:
    """Evaluate R_start by modified Lentz with depth doubling.

    The fraction is evaluated at depths 64, 128, 256, ... up to ``max_depth``;
    convergence is declared once successive checkpoint values agree to
    ``rel_tol`` relative to max(1, |value|).  Non-convergence is reported via
    the flag, not raised.
    """
    if rel_tol <= 0.0:
        raise ValueError("rel_tol must be positive")
    if max_depth < 8:
        raise ValueError("max_depth must be >= 8")

    f = _TINY
    c = f
    d = 0.0
    prev: float | None = None
    checkpoint = _FIRST_CHECKPOINT
    converged = False
    residual = math.inf
    depth = 0
    while depth < max_depth:
        depth += 1
        n = start + depth
        a_n = coeffs.a(n)
        b_n = -coeffs.b(n)
        if not (math.isfinite(a_n) and math.isfinite(b_n)):
            raise CoefficientPole(f"non-finite coefficient consumed at index {n}")
        d = a_n + b_n * d
        if d == 0.0:
            d = _TINY
        c = a_n + b_n / c
        if c == 0.0:
            c = _TINY
        d = 1.0 / d
        f *= c * d
        if depth == checkpoint:
            if prev is not None:
                residual = abs(f - prev)
                if residual <= rel_tol * max(1.0, abs(f)):
                    converged = True
                    break
            prev = f
            checkpoint *= 2
    return CFValue(value=f, depth=depth, converged=converged, residual=residual)


def backward_recursion_ratio(coeffs, start: int = 0, tail_depth: int = 1024) -> float:
    """Evaluate R_start by backward recursion from a zero-seeded tail.

    Iterates r_{n-1} = -b(n) / (a(n) + r_n) downward from ``tail_depth``.  When
    the coefficients advertise a minimal-ratio scale t2, the tail is seeded
    with t2 / tail_depth instead of 0, which accelerates convergence near the
    collapse regime.  Vanishing denominators are floored at 1e-300 with their
    sign preserved.
    """
    if tail_depth < start + 8:
        raise ValueError("tail_depth must be >= start + 8")
    scale = getattr(coeffs, "tail_ratio_scale", 0.0)
    r = scale / tail_depth if scale else 0.0
    for n in range(tail_depth, start, -1):
        a_n = coeffs.a(n)
        b_n = coeffs.b(n)
        if not (math.isfinite(a_n) and math.isfinite(b_n)):
            raise CoefficientPole(f"non-finite coefficient consumed at index {n}")
        den = a_n + r
        if abs(den) < _DENOM_FLOOR:
            den = math.copysign(_DENOM_FLOOR, den if den != 0.0 else 1.0)
        r = -b_n / den
    if not math.isfinite(r):
        raise DivisionBlowup("backward recursion produced a non-finite ratio")
    return r


def minimal_ratio_sequence(coeffs, n_lo: int, n_hi: int, rel_tol: float = DEFAULT_REL_TOL) -> list[float]:
    """Minimal-solution ratios r_n = K_{n+1}/K_n for n in [n_lo, n_hi].

    Each ratio is an independent continued-fraction evaluation at that start
    index; the sequence obeys n * r_n -> t2 (or the driven-model scale 2g/omega).
    """
    if not (n_hi > n_lo >= 0):
        raise ValueError("need n_hi > n_lo >= 0")
    return [
        eval_continued_fraction(coeffs, start=n, rel_tol=rel_tol).value
        for n in range(n_lo, n_hi + 1)
    ]
