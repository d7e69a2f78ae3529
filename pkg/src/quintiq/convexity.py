"""Divided differences and sampled higher-order convexity evidence.

A function is n-convex when every divided difference over n+2 points is
nonnegative; for C^(n+1) functions a nonnegative (n+1)-th derivative is
sufficient.  Sampling can only ever produce evidence, not proof, so the
checkers report *consistency* verdicts: a clean sign pattern, a violation
of both signs, or indeterminate when everything drowns in roundoff.

Divided differences amplify roundoff by the inverse point gap raised to the
order, so all zero-tests use a scale-aware tolerance
64 * eps * max|f| / gap^order and random tuples enforce a minimum gap.
"""
from __future__ import annotations

import random
from dataclasses import dataclass
from enum import Enum

from . import expr as expr_mod
from .rules import Integrand, Interval, call_integrand
from .scalars import DOUBLE


class Verdict(Enum):
    CONSISTENT_WITH_CONVEX = "consistent-with-convex"
    CONSISTENT_WITH_CONCAVE = "consistent-with-concave"
    VIOLATED = "violated"
    INDETERMINATE = "indeterminate"


@dataclass(frozen=True)
class DividedDifferenceTable:
    """Triangular table; row j holds all order-j divided differences."""

    points: tuple
    values: tuple
    rows: tuple

    @property
    def order(self) -> int:
        return len(self.points) - 1

    def top(self):
        """The single highest-order entry [x_0, ..., x_m; f]."""
        return self.rows[-1][0]


def _validate_points(points, values):
    if len(points) != len(values):
        raise ValueError(
            f"points and values must have equal length, got {len(points)} and {len(values)}"
        )
    if len(points) == 0:
        raise ValueError("at least one point is required")
    for i in range(len(points) - 1):
        if not points[i] < points[i + 1]:
            raise ValueError(
                f"points must be strictly increasing, got {points[i]} before {points[i + 1]} "
                f"(repeated nodes are out of scope)"
            )


def divided_difference_table(points, values) -> DividedDifferenceTable:
    _validate_points(points, values)
    rows = [tuple(values)]
    current = list(values)
    m = len(points) - 1
    for j in range(1, m + 1):
        current = [
            (current[i + 1] - current[i]) / (points[i + j] - points[i])
            for i in range(m + 1 - j)
        ]
        rows.append(tuple(current))
    return DividedDifferenceTable(tuple(points), tuple(values), tuple(rows))


def divided_difference(points, values):
    """[x_0, ..., x_m; f] via the triangular recursion."""
    return divided_difference_table(points, values).top()


@dataclass(frozen=True)
class ConvexityReport:
    order: int
    samples_tested: int
    min_divided_difference: float
    witness: tuple  # point tuple attaining the minimum
    max_divided_difference: float
    max_witness: tuple
    verdict: Verdict


def _classify(saw_negative: bool, saw_positive: bool) -> Verdict:
    if saw_negative and saw_positive:
        return Verdict.VIOLATED
    if saw_positive:
        return Verdict.CONSISTENT_WITH_CONVEX
    if saw_negative:
        return Verdict.CONSISTENT_WITH_CONCAVE
    return Verdict.INDETERMINATE


def check_n_convexity(
    f: Integrand,
    iv: Interval,
    order: int,
    samples: int,
    seed: int,
    ctx=DOUBLE,
) -> ConvexityReport:
    """Sample order+1 divided differences over point tuples in [a, b].

    Tuples are a deterministic blend: half sliding windows from an
    equispaced grid, half seeded random tuples with an enforced minimum gap
    of (b-a) * 1e-3 / samples.
    """
    if order < 1:
        raise ValueError(f"order must be >= 1, got {order}")
    if samples < 1:
        raise ValueError(f"samples must be >= 1, got {samples}")
    a, b = float(iv.a), float(iv.b)
    m = order + 2  # points per tuple
    tuples = _window_tuples(a, b, m, samples // 2)
    tuples += _random_tuples(a, b, m, samples - len(tuples), seed, (b - a) * 1e-3 / samples)

    saw_negative = saw_positive = False
    min_dd = max_dd = None
    min_witness = max_witness = ()
    for pts in tuples:
        xs = [ctx.const(p) for p in pts]
        vals = [call_integrand(f, x) for x in xs]
        top = float(divided_difference(xs, vals))
        min_gap = min(pts[i + 1] - pts[i] for i in range(m - 1))
        scale = max(abs(float(v)) for v in vals)
        tol = 64.0 * ctx.eps * scale / min_gap**order
        if top < -tol:
            saw_negative = True
        elif top > tol:
            saw_positive = True
        if min_dd is None or top < min_dd:
            min_dd, min_witness = top, pts
        if max_dd is None or top > max_dd:
            max_dd, max_witness = top, pts
    return ConvexityReport(
        order=order,
        samples_tested=len(tuples),
        min_divided_difference=min_dd,
        witness=min_witness,
        max_divided_difference=max_dd,
        max_witness=max_witness,
        verdict=_classify(saw_negative, saw_positive),
    )


def _window_tuples(a: float, b: float, m: int, count: int) -> list:
    if count < 1:
        return []
    grid_len = count + m - 1
    step = (b - a) / (grid_len - 1)
    grid = [a + i * step for i in range(grid_len - 1)] + [b]
    return [tuple(grid[i : i + m]) for i in range(count)]


def _random_tuples(a, b, m, count, seed, min_gap) -> list:
    rng = random.Random(seed)
    out = []
    for _ in range(count):
        for _attempt in range(100):
            pts = sorted(rng.uniform(a, b) for _ in range(m))
            if all(pts[i + 1] - pts[i] >= min_gap for i in range(m - 1)):
                out.append(tuple(pts))
                break
        else:
            # conditioning fallback: evenly spread tuple at a random offset
            span = (m - 1) * max(min_gap, (b - a) / (4 * m))
            lo = rng.uniform(a, b - span)
            out.append(tuple(lo + i * span / (m - 1) for i in range(m)))
    return out


def sixth_derivative_sign(f_expr, iv: Interval, grid: int, ctx=DOUBLE) -> ConvexityReport:
    """Sign pattern of the symbolic sixth derivative on an equispaced grid.

    A constant sign certifies (up to sampling) 5-convexity or 5-concavity;
    raises NotDifferentiable if the expression cannot be differentiated six
    times and propagates evaluation domain errors.
    """
    if grid < 1:
        raise ValueError(f"grid must be >= 1, got {grid}")
    d6 = f_expr
    for _ in range(6):
        d6 = expr_mod.differentiate(d6)
    a, b = ctx.const(iv.a), ctx.const(iv.b)
    width = b - a
    values = []
    for i in range(grid + 1):
        x = a if i == 0 else (b if i == grid else a + (i * width) / grid)
        values.append((float(expr_mod.evaluate(d6, x, ctx)), float(x)))
    scale = max(abs(v) for v, _ in values)
    tol = 64.0 * ctx.eps * scale
    saw_negative = any(v < -tol for v, _ in values)
    saw_positive = any(v > tol for v, _ in values)
    min_v, min_x = min(values, key=lambda t: t[0])
    max_v, max_x = max(values, key=lambda t: t[0])
    return ConvexityReport(
        order=5,
        samples_tested=grid + 1,
        min_divided_difference=min_v,
        witness=(min_x,),
        max_divided_difference=max_v,
        max_witness=(max_x,),
        verdict=_classify(saw_negative, saw_positive),
    )
