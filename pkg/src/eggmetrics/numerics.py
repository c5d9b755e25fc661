"""Scalar numerics: stable powers, safeguarded root finding, difference stencils."""

from __future__ import annotations

import math
from typing import Callable, Sequence

import numpy as np

from .errors import NumericalError

ROOT_MAX_ITER = 200


def abs_pow(x: float, exponent: float) -> float:
    """|x|**exponent evaluated as exp(exponent*log|x|), with an exact 0 at x = 0.

    Non-integer exponents on tiny magnitudes stay accurate this way, and the
    x = 0 case never produces log-underflow artifacts.
    """
    if x == 0.0:
        return 0.0
    return math.exp(exponent * math.log(abs(x)))


def single_term_root(coef: float, power: float) -> float:
    """Positive root of coef * x**power = 1; inf when it exceeds float range.

    Used to bound bracketing intervals; safe for subnormal coefficients,
    where a naive power would overflow.
    """
    if coef == 0.0:
        return math.inf
    t = -math.log(coef) / power
    return math.inf if t > 700.0 else math.exp(t)


def solve_bracketed(
    f: Callable[[float], float],
    lo: float,
    hi: float,
    df: Callable[[float], float] | None = None,
    rtol: float = 1e-15,
    max_iter: int = ROOT_MAX_ITER,
) -> float:
    """Root of f on [lo, hi] with f(lo) <= 0 <= f(hi): safeguarded Newton, bisection fallback.

    Newton steps are accepted only while they stay strictly inside the current
    bracket; every iteration shrinks the bracket, so convergence is guaranteed
    for continuous f. Raises NumericalError (carrying the last bracket) if the
    input is not a sign-change interval or the iteration budget runs out.
    """
    flo, fhi = f(lo), f(hi)
    if flo == 0.0:
        return lo
    if fhi == 0.0:
        return hi
    if flo > 0.0 or fhi < 0.0:
        raise NumericalError(
            f"no sign change on bracket [{lo!r}, {hi!r}]: f={flo!r}, {fhi!r}",
            bracket=(lo, hi),
        )
    x = 0.5 * (lo + hi)
    dx_old = hi - lo
    for _ in range(max_iter):
        fx = f(x)
        if fx == 0.0:
            return x
        if fx < 0.0:
            lo = x
        else:
            hi = x
        width = hi - lo
        # relative to the bracket location, so roots far below the initial
        # bracket scale are still resolved to full relative accuracy
        if width <= rtol * max(abs(lo), abs(hi)):
            return 0.5 * (lo + hi)
        step_ok = False
        if df is not None:
            d = df(x)
            if d != 0.0 and math.isfinite(d):
                cand = x - fx / d
                # accept Newton only inside the bracket and when the step at
                # least halves the previous one; otherwise bisect. This keeps
                # the worst case at bisection speed (slowly contracting
                # Newton tails would otherwise starve the bracket).
                if lo < cand < hi and abs(cand - x) <= 0.5 * dx_old:
                    # a vanishing Newton step means x has converged even if
                    # the far bracket end is still distant (root at an edge
                    # or tiny relative to the bracket); relative to the
                    # iterate so tiny roots keep full relative accuracy
                    if abs(cand - x) <= rtol * abs(cand):
                        return cand
                    dx_old = abs(cand - x)
                    x = cand
                    step_ok = True
        if not step_ok:
            dx_old = 0.5 * width
            x = 0.5 * (lo + hi)
    raise NumericalError(
        f"root solve did not converge in {max_iter} iterations", bracket=(lo, hi)
    )


def richardson(values: Sequence, order: int = 2, ratio: float = 2.0):
    """Richardson ladder for approximations at steps h, h/ratio, h/ratio^2, ...

    ``order`` is the leading error exponent of the base rule (central
    differences: 2). Returns the highest-order extrapolant.
    """
    vals = [np.asarray(v, dtype=complex) if np.iscomplexobj(v) else np.asarray(v, dtype=float)
            for v in values]
    n = len(vals)
    if n == 1:
        return vals[0]
    for j in range(1, n):
        fac = ratio ** (order * j)
        for k in range(n - 1, j - 1, -1):
            vals[k] = (fac * vals[k] - vals[k - 1]) / (fac - 1.0)
    return vals[-1]


def central_diff(f: Callable[[float], float], x0: float, order: int, h: float):
    """Central finite difference of given derivative order, O(h^2) accurate."""
    if order == 1:
        return (f(x0 + h) - f(x0 - h)) / (2 * h)
    if order == 2:
        return (f(x0 + h) - 2 * f(x0) + f(x0 - h)) / (h * h)
    if order == 3:
        return (f(x0 + 2 * h) - 2 * f(x0 + h) + 2 * f(x0 - h) - f(x0 - 2 * h)) / (2 * h ** 3)
    raise ValueError(f"unsupported derivative order {order}")


def derivative(f: Callable[[float], float], x0: float, order: int,
               h0: float, levels: int = 4):
    """Derivative by central differences with a Richardson ladder over halved steps."""
    ests = []
    h = h0
    for _ in range(levels):
        ests.append(central_diff(f, x0, order, h))
        h *= 0.5
    return richardson(ests, order=2, ratio=2.0)


def centered_difference_sum(f: Callable[[float], float], q: int, h: float) -> float:
    """q-th order centered difference of f about 0 with step h (nodes (q/2 - i)h)."""
    total = 0.0
    for i in range(q + 1):
        total += (-1) ** i * math.comb(q, i) * f((q / 2 - i) * h)
    return total


def onesided_weights(q: int, nodes: np.ndarray) -> np.ndarray:
    """Finite-difference weights for the q-th derivative at 0 from the given nodes."""
    npts = len(nodes)
    V = np.vander(nodes, npts, increasing=True).T
    rhs = np.zeros(npts)
    rhs[q] = math.factorial(q)
    return np.linalg.solve(V, rhs)


def onesided_derivative(f: Callable[[float], float], q: int, h: float,
                        side: int, extra: int = 3) -> float:
    """One-sided q-th derivative estimate at 0 using nodes 0, h, ..., on one side."""
    nodes = side * h * np.arange(q + extra, dtype=float)
    w = onesided_weights(q, nodes)
    return float(np.dot(w, [f(x) for x in nodes]))
