"""Adaptive integration driven by the two-rule gap stopping criterion.

For a 5-convex or 5-concave integrand of class C^6 the blended composite
value Q_n = (3 G_n + L_n)/4 satisfies |integral - Q_n| <= |L_n - G_n|/4, so
the search stops at the first n with |L_n - G_n| <= 4 eps and returns Q_n
with a guaranteed error of at most eps.  The same machinery drives the
lower-order Chebyshev/Simpson method for 3-convex integrands, stopping on
|S_n - C_n| <= 4 eps.

The error guarantee is conditional on the convexity hypothesis; it is the
caller's responsibility (see ``quintiq.convexity`` for sampled evidence).
"""
from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

from .composite import CUBIC_PAIR, QUINTIC_PAIR, CompositePair, composite_pair
from .rules import Integrand, Interval
from .scalars import DOUBLE


class Method(Enum):
    QUINTIC = "quintic"  # Gauss-3 / Lobatto-4, for 5-convex or 5-concave f
    CUBIC = "cubic"  # Chebyshev-3 / Simpson, for 3-convex or 3-concave f


class SearchStrategy(Enum):
    #: n = 1, 2, 3, ... -- returns the smallest admissible n unconditionally
    LINEAR_MINIMAL = "linear"
    #: double n until the criterion holds, then bisect; minimal n whenever
    #: the gap sequence is non-increasing, and far fewer evaluations
    DOUBLING_BISECT = "doubling"


@dataclass(frozen=True)
class AdaptiveResult:
    value: object  # Q_n at the final n
    n_final: int
    gap_final: object  # |L_n - G_n| at the final n
    epsilon: object
    evaluations: int
    history: tuple  # ((n, gap), ...) in the order the search probed
    method: Method


class BudgetExceeded(Exception):
    """No n <= n_max satisfied the stopping criterion."""

    def __init__(self, n_max: int, epsilon, best_n: int, best_gap):
        super().__init__(
            f"no n <= {n_max} reached gap <= 4*eps (eps = {epsilon}); "
            f"best gap {best_gap} at n = {best_n}"
        )
        self.n_max = n_max
        self.epsilon = epsilon
        self.best_n = best_n
        self.best_gap = best_gap


class GapProbe:
    """Memoized composite-pair evaluator; counts fresh integrand calls."""

    def __init__(self, f: Integrand, iv: Interval, ctx=DOUBLE, rule_pair=QUINTIC_PAIR):
        self.f = f
        self.iv = iv
        self.ctx = ctx
        self.rule_pair = rule_pair
        self.evaluations = 0
        self._cache: dict[int, CompositePair] = {}

    def pair(self, n: int) -> CompositePair:
        hit = self._cache.get(n)
        if hit is None:
            hit = composite_pair(self.f, self.iv, n, self.ctx, self.rule_pair)
            self._cache[n] = hit
            self.evaluations += hit.evaluation_count
        return hit

    def gap(self, n: int):
        p = self.pair(n)
        return abs(p.l_n - p.g_n)


def _best(history):
    return min(history, key=lambda item: item[1])


def _search_linear(probe: GapProbe, threshold, n_max: int, epsilon):
    history = []
    for n in range(1, n_max + 1):
        gap = probe.gap(n)
        history.append((n, gap))
        if gap <= threshold:
            return n, history
    best_n, best_gap = _best(history)
    raise BudgetExceeded(n_max, epsilon, best_n, best_gap)


def _search_doubling(probe: GapProbe, threshold, n_max: int, epsilon):
    history = []
    lo, n = 0, 1
    while True:
        gap = probe.gap(n)
        history.append((n, gap))
        if gap <= threshold:
            break
        lo = n
        if n >= n_max:
            best_n, best_gap = _best(history)
            raise BudgetExceeded(n_max, epsilon, best_n, best_gap)
        n = min(2 * n, n_max)
    hi = n
    # exact minimal n in (lo, hi] provided the gap is non-increasing there
    while hi - lo > 1:
        mid = (lo + hi) // 2
        gap = probe.gap(mid)
        history.append((mid, gap))
        if gap <= threshold:
            hi = mid
        else:
            lo = mid
    if history[-1][0] != hi:
        history.append((hi, probe.gap(hi)))
    return hi, history


_SEARCHES = {
    SearchStrategy.LINEAR_MINIMAL: _search_linear,
    SearchStrategy.DOUBLING_BISECT: _search_doubling,
}


def _run(f, iv, eps, strategy, n_max, ctx, rule_pair, method) -> AdaptiveResult:
    eps_s = ctx.const(eps)
    if not eps_s > 0:
        raise ValueError(f"tolerance must be positive, got {eps}")
    if n_max < 1:
        raise ValueError(f"n_max must be >= 1, got {n_max}")
    threshold = 4 * eps_s
    probe = GapProbe(f, iv, ctx, rule_pair)
    n_final, history = _SEARCHES[strategy](probe, threshold, n_max, eps_s)
    final = probe.pair(n_final)
    return AdaptiveResult(
        value=final.q_n,
        n_final=n_final,
        gap_final=abs(final.l_n - final.g_n),
        epsilon=eps_s,
        evaluations=probe.evaluations,
        history=tuple(history),
        method=method,
    )


def integrate_adaptive(
    f: Integrand,
    iv: Interval,
    eps,
    strategy: SearchStrategy = SearchStrategy.LINEAR_MINIMAL,
    n_max: int = 10**6,
    ctx=DOUBLE,
) -> AdaptiveResult:
    """Adaptive Gauss/Lobatto integration of a 5-convex or 5-concave f.

    Starts at n = 1 and searches for n with |L_n - G_n| <= 4 eps; the
    returned value is Q_n, within eps of the integral whenever the
    convexity precondition holds.  Raises BudgetExceeded past n_max.
    """
    return _run(f, iv, eps, strategy, n_max, ctx, QUINTIC_PAIR, Method.QUINTIC)


def integrate_adaptive_cubic(
    f: Integrand,
    iv: Interval,
    eps,
    strategy: SearchStrategy = SearchStrategy.LINEAR_MINIMAL,
    n_max: int = 10**6,
    ctx=DOUBLE,
) -> AdaptiveResult:
    """Chebyshev/Simpson analogue of ``integrate_adaptive`` for 3-convex or
    3-concave integrands: stops on |S_n - C_n| <= 4 eps, returns (3C+S)/4."""
    return _run(f, iv, eps, strategy, n_max, ctx, CUBIC_PAIR, Method.CUBIC)


def stopping_gap(f: Integrand, iv: Interval, n: int, ctx=DOUBLE):
    """|L_n - G_n| for the Gauss/Lobatto pair at a fixed n."""
    p = composite_pair(f, iv, n, ctx)
    return abs(p.l_n - p.g_n)
