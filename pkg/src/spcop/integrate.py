"""Adaptive Simpson quadrature for the 1-D reductions used by eta estimates."""

from __future__ import annotations

__all__ = ["integrate_adaptive"]


def _simpson(fa, fm, fb, h):
    return h / 6.0 * (fa + 4.0 * fm + fb)


def integrate_adaptive(f, a: float, b: float, tol: float, max_depth: int = 52) -> float:
    """Integrate f on [a,b] to absolute tolerance tol.

    Classic adaptive Simpson with Richardson correction; recursion depth is
    capped, which bounds work near endpoint derivative singularities (the
    sqrt-type kinks the order-statistics family produces) while keeping the
    local error far below tol/interval.
    """
    if not (b > a):
        return 0.0
    fa, fb = f(a), f(b)
    m = 0.5 * (a + b)
    fm = f(m)
    whole = _simpson(fa, fm, fb, b - a)
    return _recurse(f, a, fa, b, fb, m, fm, whole, tol, max_depth)


def _recurse(f, a, fa, b, fb, m, fm, whole, tol, depth):
    lm = 0.5 * (a + m)
    rm = 0.5 * (m + b)
    flm, frm = f(lm), f(rm)
    left = _simpson(fa, flm, fm, m - a)
    right = _simpson(fm, frm, fb, b - m)
    delta = left + right - whole
    if depth <= 0 or abs(delta) <= 15.0 * tol:
        return left + right + delta / 15.0
    half = 0.5 * tol
    return (_recurse(f, a, fa, m, fm, lm, flm, left, half, depth - 1)
            + _recurse(f, m, fm, b, fb, rm, frm, right, half, depth - 1))
