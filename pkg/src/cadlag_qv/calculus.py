"""
Pathwise (Föllmer) integrals and the residual of the pathwise Itô formula.

For ``f`` in C^2 and a path with quadratic variation along the partitions,

    f(x(t)) - f(x(0)) = int f'(x) dx + 1/2 int f''(x) d[x]^c
                        + sum_{s <= t} [f(x(s)) - f(x(s-)) - f'(x(s-)) dx(s)]

where the first integral is the limit of left Riemann sums. At a finite
level the residual of this identity is computed over the completed
partition intervals ``t_{j+1} <= t``; with that convention the identity is
exact for ``f(v) = v**2`` at every partition point.
"""

import math
from dataclasses import dataclass

import numpy as np
from numpy.polynomial import Polynomial

from .paths import PathFormatError
from .qv import increments


@dataclass(frozen=True)
class SmoothFunction:
    """``f`` with its first two derivatives, cross-checked on construction."""

    f: object
    df: object
    d2f: object
    name: str = "f"
    check: bool = True

    def __post_init__(self):
        if self.check:
            check_derivatives(self)

    def __call__(self, v):
        return self.f(v)


def check_derivatives(fn, points=None, h=1e-4, rtol=1e-5):
    """Central-difference consistency of ``f'`` and ``f''`` at sample points."""
    v = np.linspace(-2.0, 2.0, 9) if points is None else np.asarray(points, dtype=float)
    for g, dg, label in ((fn.f, fn.df, "f'"), (fn.df, fn.d2f, "f''")):
        fd = (g(v + h) - g(v - h)) / (2 * h)
        exact = dg(v)
        tol = rtol * (1.0 + np.abs(exact)) + 1e-10 * (1.0 + np.abs(g(v))) / h
        if np.any(np.abs(fd - exact) > tol):
            raise ValueError(f"{label} of {fn.name} disagrees with finite differences")


def polynomial(coeffs, name=None):
    """``sum_k c_k v**k`` with exact derivatives."""
    coeffs = [float(c) for c in coeffs]
    if not coeffs:
        raise ValueError("need at least one coefficient")
    p = Polynomial(coeffs)
    return SmoothFunction(p, p.deriv(1), p.deriv(2), name or f"poly{tuple(coeffs)}", check=False)


def parse_function(spec):
    """``poly:c0,c1,...`` -> :class:`SmoothFunction`."""
    if not spec.startswith("poly:"):
        raise ValueError(f"unsupported function spec {spec!r} (expected poly:c0,c1,...)")
    try:
        coeffs = [float(c) for c in spec[5:].split(",") if c.strip()]
    except ValueError:
        raise ValueError(f"bad coefficients in {spec!r}") from None
    return polynomial(coeffs, spec)


def _counted(x, p, t, convention):
    x._check(t)
    left, dx = increments(x, p)
    right = np.append(left[1:], p.successor(left[-1]))
    if convention == "left":
        keep = left <= t
    elif convention == "completed":
        keep = right <= t
    else:
        raise ValueError(f"unknown convention {convention!r}")
    return left[keep], right[keep], dx[keep]


def follmer_integral(g, x, p, t, convention="left"):
    """Left Riemann sum ``sum g(x(t_j)) (x(t_{j+1}) - x(t_j))``.

    ``convention="left"`` sums over ``t_j <= t`` (the counting used by
    ``q_n``); ``"completed"`` sums over ``t_{j+1} <= t``.
    """
    left, _, dx = _counted(x, p, t, convention)
    return math.fsum((np.asarray(g(x._value_at(left)), dtype=float) * dx).tolist())


def stieltjes_integral(h, a, t, x=None, atol=0.0):
    """``int_[0,t] h(x(s)) da(s)`` for a non-decreasing step path ``a``.

    The value ``a(0)`` counts as an atom at 0. Without ``x`` the integrand
    is ``h(s)``.
    """
    if np.any(np.diff(a.knot_values) < -atol):
        raise PathFormatError("integrator must be non-decreasing")
    times = a.times[a.times <= t]
    mass = np.diff(np.concatenate([[0.0], a._value_at(times)]))
    arg = times if x is None else x._value_at(times)
    return math.fsum((np.asarray(h(arg), dtype=float) * mass).tolist())


def stieltjes_error_bound(dh_sup, mesh, total):
    """Left-point sum error bound ``sup|h'| * mesh * a(t)`` for a fine step approximation."""
    return float(dh_sup) * float(mesh) * float(total)


def jump_compensator(f, x, t):
    """``sum_{s <= t} f(x(s)) - f(x(s-)) - f'(x(s-)) dx(s)`` over declared jumps."""
    terms = []
    for s, d in x.jumps_up_to(t):
        before = x.left_limit(s)
        terms.append(float(f.f(before + d) - f.f(before) - f.df(before) * d))
    return math.fsum(terms)


@dataclass
class ItoTerms:
    lhs: float
    integral: float
    second_order: float
    compensator: float

    @property
    def residual(self):
        return self.lhs - self.integral - self.second_order - self.compensator


def ito_terms(f, x, p, t):
    """Terms of the level-``n`` Itô identity at time ``t``.

    The continuous part of the quadratic variation is proxied on each
    completed interval by ``dx_j**2`` minus the squared declared jumps inside
    ``(t_j, t_{j+1}]``.
    """
    left, right, dx = _counted(x, p, t, "completed")
    xj = x._value_at(left)
    jt, js = x.jump_times, x.jump_sizes
    sq = np.concatenate([[0.0], np.cumsum(js ** 2)])
    inside = sq[np.searchsorted(jt, right, side="right")] - sq[np.searchsorted(jt, left, side="right")]
    cont = dx * dx - inside
    integral = math.fsum((np.asarray(f.df(xj), dtype=float) * dx).tolist())
    second = 0.5 * math.fsum((np.asarray(f.d2f(xj), dtype=float) * cont).tolist())
    lhs = float(f.f(x.evaluate(t)) - f.f(x.evaluate(0.0)))
    return ItoTerms(lhs, integral, second, jump_compensator(f, x, t))


def ito_residual(f, x, scheme, n, t):
    """Signed residual of the pathwise Itô formula at level ``n`` and time ``t``."""
    return ito_terms(f, x, scheme.generate(n), t).residual


def continuous_part_proxy(x, p):
    """Level-``n`` proxy of ``[x]^c`` as a step path (may dip where a jump straddles an interval)."""
    from .qv import _signed_cumulative

    left, dx = increments(x, p)
    right = np.append(left[1:], p.successor(left[-1]))
    jt, js = x.jump_times, x.jump_sizes
    sq = np.concatenate([[0.0], np.cumsum(js ** 2)])
    inside = sq[np.searchsorted(jt, right, side="right")] - sq[np.searchsorted(jt, left, side="right")]
    return _signed_cumulative(left, dx * dx - inside, x.horizon)


__all__ = ["SmoothFunction", "polynomial", "parse_function", "follmer_integral",
           "stieltjes_integral", "stieltjes_error_bound", "jump_compensator", "ito_terms",
           "ito_residual", "continuous_part_proxy"]
