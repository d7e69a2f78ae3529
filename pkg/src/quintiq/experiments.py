"""Reproduction of the two benchmark tables.

Experiment 1: subdivisions needed for the integral of 1/x over [1, 2] at
tolerances 1e-1 .. 1e-16, for the quintic (Gauss/Lobatto) method and the
cubic (Chebyshev/Simpson) baseline.  Experiment 2: the same comparison for
exp over [0, b], b = 1..10, at a fixed tolerance of 1e-8.

Rows whose threshold 4*eps sits below the decidability floor of the active
precision are *skipped*, not computed: near the roundoff floor the measured
gap is noise and any reported n would be wrong.  Hardware doubles cannot
decide Experiment 1 below roughly 4e-13; the double-double default decides
all sixteen rows.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .adaptive import GapProbe, _search_doubling
from .composite import CUBIC_PAIR, QUINTIC_PAIR
from .rules import Interval
from .scalars import DOUBLE_DOUBLE

#: CSV cell emitted in place of n for rows the precision cannot decide.
SKIP_MARKER = "requires-extended-precision"


@dataclass(frozen=True)
class ExperimentRow:
    label: str  # tolerance (experiment 1) or right endpoint b (experiment 2)
    n_quintic: Optional[int]  # None when the row was skipped
    n_cubic: Optional[int]


def _decidability_floor(scale: float, ctx) -> float:
    """Smallest gap threshold the context can resolve against roundoff."""
    return 1024.0 * ctx.eps * max(1.0, abs(scale))


def _minimal_n(probe: GapProbe, eps: Fraction, ctx, n_max: int = 10**6) -> int:
    threshold = 4 * ctx.const(eps)
    n, _history = _search_doubling(probe, threshold, n_max, ctx.const(eps))
    return n


def experiment1(ctx=DOUBLE_DOUBLE) -> list[ExperimentRow]:
    """Tolerance sweep 1e-1 .. 1e-16 for the integral of 1/x over [1, 2]."""
    one = ctx.const(1)
    f = lambda x: one / x
    iv = Interval(ctx.const(1), ctx.const(2))
    quintic = GapProbe(f, iv, ctx, QUINTIC_PAIR)
    cubic = GapProbe(f, iv, ctx, CUBIC_PAIR)
    floor = _decidability_floor(float(quintic.pair(1).q_n), ctx)
    rows = []
    for k in range(1, 17):
        eps = Fraction(1, 10**k)
        if 4 * float(eps) < floor:
            rows.append(ExperimentRow(f"1e-{k}", None, None))
            continue
        rows.append(
            ExperimentRow(f"1e-{k}", _minimal_n(quintic, eps, ctx), _minimal_n(cubic, eps, ctx))
        )
    return rows


def experiment2(ctx=DOUBLE_DOUBLE) -> list[ExperimentRow]:
    """Interval sweep [0, b], b = 1..10, for exp at a fixed eps = 1e-8."""
    eps = Fraction(1, 10**8)
    f = ctx.exp
    rows = []
    for b in range(1, 11):
        iv = Interval(ctx.const(0), ctx.const(b))
        quintic = GapProbe(f, iv, ctx, QUINTIC_PAIR)
        cubic = GapProbe(f, iv, ctx, CUBIC_PAIR)
        floor = _decidability_floor(float(quintic.pair(1).q_n), ctx)
        if 4 * float(eps) < floor:
            rows.append(ExperimentRow(str(b), None, None))
            continue
        rows.append(
            ExperimentRow(str(b), _minimal_n(quintic, eps, ctx), _minimal_n(cubic, eps, ctx))
        )
    return rows
