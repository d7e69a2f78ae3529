"""Shared test oracles and frozen reference values.

Everything here is independent of the package's quadrature path: the exact
polynomial oracle works in Fraction arithmetic from the rules' algebraic
definitions (symmetric node pairs have rational squared offsets, so even
powers rationalize), and transcendental references are mpmath at 50 digits
or frozen decimal strings derived from it.
"""
from __future__ import annotations

import math
from fractions import Fraction

import mpmath

mpmath.mp.dps = 50

# Paper benchmark tables: subdivisions for 1/x on [1,2] at eps = 1e-1..1e-16
PAPER_EXP1_QUINTIC = [1, 1, 1, 1, 2, 2, 3, 4, 6, 9, 13, 19, 27, 39, 57, 84]
PAPER_EXP1_CUBIC = [1, 1, 1, 2, 3, 5, 9, 16, 28, 50, 89, 158, 280, 498, 884, 1572]
# and for exp on [0,b], b = 1..10, at eps = 1e-8
PAPER_EXP2_QUINTIC = [2, 5, 9, 14, 21, 29, 40, 54, 71, 93]
PAPER_EXP2_CUBIC = [12, 33, 64, 111, 178, 275, 412, 604, 872, 1244]

# High-precision constants, frozen from a 50-digit mpmath evaluation
LN2 = "0.693147180559945309417232121458176568075500134"
TWO_LN2_MINUS_1 = "0.386294361119890618834464242916353136151000269"
EXP_MINUS_1 = {
    1: "1.71828182845904523536028747135266249775724709",
    2: "6.38905609893065022723042746057500781318031557",
    3: "19.0855369231876677409285296545817178969879078",
    4: "53.598150033144239078110261202860878402790737",
    5: "147.413159102576603421115580040552279623487668",
    6: "402.428793492735122608387180543388279605899897",
    7: "1095.63315842845859926372023828812143244221913",
    8: "2979.95798704172827474359209945288867375596794",
    9: "8102.08392757538400770999668943275996501147609",
    10: "22025.4657948067165169579006452842443663535126",
}
# |L_n - G_n| for 1/x on [1,2]
GAP_1X_N4 = "3.07083929218582231948549218077e-8"
GAP_1X_N3 = "1.62768657819609346448394818459e-7"

# For f = 1/x on [1,2] the symmetric node pairs rationalize, so the simple
# rule values are exact rationals.
G_1X_12 = Fraction(131, 189)
L_1X_12 = Fraction(61, 88)
Q_1X_12 = Fraction(15371, 22176)
GAP_1X_N1 = Fraction(1, 16632)  # = L - G

# Canonical rule data for the exact polynomial oracle: symmetric pairs are
# (squared node offset, weight); "middle" is the weight at t = 0.
_RULE_DATA = {
    "gauss3": {"pairs": [(Fraction(3, 5), Fraction(5, 9))], "middle": Fraction(8, 9)},
    "lobatto4": {
        "pairs": [(Fraction(1), Fraction(1, 6)), (Fraction(1, 5), Fraction(5, 6))],
        "middle": None,
    },
    "simpson": {"pairs": [(Fraction(1), Fraction(1, 3))], "middle": Fraction(4, 3)},
    "chebyshev3": {"pairs": [(Fraction(1, 2), Fraction(2, 3))], "middle": Fraction(2, 3)},
}


def _pair_power_sum(m: Fraction, s2: Fraction, k: int) -> Fraction:
    """(m+s)^k + (m-s)^k where s^2 = s2; odd powers of s cancel."""
    total = Fraction(0)
    for j in range(0, k + 1, 2):
        total += 2 * math.comb(k, j) * m ** (k - j) * s2 ** (j // 2)
    return total


def exact_rule_poly(rule_name: str, coeffs, a: Fraction, b: Fraction) -> Fraction:
    """Exact simple-rule value for sum_k coeffs[k] x^k over [a, b]."""
    a, b = Fraction(a), Fraction(b)
    h = (b - a) / 2
    m = (a + b) / 2
    data = _RULE_DATA[rule_name]
    total = Fraction(0)
    for k, c in enumerate(coeffs):
        if c == 0:
            continue
        c = Fraction(c)
        node_sum = Fraction(0)
        for s2, w in data["pairs"]:
            node_sum += w * _pair_power_sum(m, h * h * s2, k)
        if data["middle"] is not None:
            node_sum += data["middle"] * m**k
        total += c * node_sum
    return h * total


def exact_integral_poly(coeffs, a: Fraction, b: Fraction) -> Fraction:
    a, b = Fraction(a), Fraction(b)
    return sum(
        Fraction(c) * (b ** (k + 1) - a ** (k + 1)) / (k + 1)
        for k, c in enumerate(coeffs)
        if c != 0
    )


def mp_simple_rule(rule_name: str, f, a, b):
    """The paper-form simple rules, written directly in mpmath."""
    a, b = mpmath.mpf(a), mpmath.mpf(b)
    h = (b - a) / 2
    m = (a + b) / 2
    if rule_name == "gauss3":
        r = mpmath.sqrt(15) / 5
        return (b - a) / 18 * (5 * f(m - h * r) + 8 * f(m) + 5 * f(m + h * r))
    if rule_name == "lobatto4":
        r = mpmath.sqrt(5) / 5
        return (b - a) / 12 * (f(a) + 5 * f(m - h * r) + 5 * f(m + h * r) + f(b))
    if rule_name == "simpson":
        return (b - a) / 6 * (f(a) + 4 * f(m) + f(b))
    if rule_name == "chebyshev3":
        r = mpmath.sqrt(2) / 2
        return (b - a) / 3 * (f(m - h * r) + f(m) + f(m + h * r))
    raise ValueError(rule_name)


def dd_to_mpf(x):
    return mpmath.mpf(x.hi) + mpmath.mpf(x.lo)


def rel_err(value, reference) -> float:
    v = float(value)
    r = float(reference)
    if r == 0.0:
        return abs(v)
    return abs(v - r) / abs(r)
