"""Interpolation constants with a computable value."""
import math

from scipy.optimize import bisect

from surfarea.constants import A2_BRACKET


def a2_residual(x: float) -> float:
    """1/x + tan(1/x); the constant A_2 is its largest positive zero."""
    y = 1.0 / x
    return y + math.tan(y)


def babuska_aziz_a2() -> float:
    """The constant A_2 ~ 0.49291 of the Lagrange interpolation estimate.

    Solved for y = 1/x on (pi/2, pi), where y + tan(y) increases from -inf
    to pi with no pole, then inverted.
    """
    lo, hi = A2_BRACKET
    y = bisect(lambda t: t + math.tan(t), lo + 1e-9, hi, xtol=1e-15)
    return 1.0 / y
