"""
Discrete quadratic-variation approximants along a partition and their limit.

For a path ``x`` and a partition ``t_0 = 0 < t_1 < ... < t_k``:

    q_n(t)  = sum_{t_i <= t}      (x(t_{i+1}) - x(t_i))**2
    s_n(t)  = sum_i               (x(t_{i+1} ^ t) - x(t_i ^ t))**2
    p_n(t)  = sum_{t_{i+1} <= t}  (x(t_{i+1}) - x(t_i))**2

``q_n`` counts the full forward increment as soon as its left endpoint is
reached, which is what makes it converge in J1 to the quadratic variation
even when ``p_n`` does not. The path is extended as a constant beyond its
horizon, so a partition may overshoot the horizon.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from .measures import DiscreteMeasure
from .paths import CadlagPath, DomainError, StepIncreasing, path_to_csv_string


class LConditionError(ValueError):
    """The limit has an atom that is not a squared jump of the path."""

    def __init__(self, time, mass, expected):
        self.time = float(time)
        self.mass = float(mass)
        self.expected = float(expected)
        super().__init__(f"atom of mass {self.mass:.6g} at t={self.time:.10g}, "
                         f"expected {self.expected:.6g} from the path's jump there")


class InternalConsistencyError(AssertionError):
    """An exact algebraic identity failed beyond rounding tolerance."""


def _check_partition(x, p):
    if p.last < x.horizon:
        raise DomainError(f"partition ends at {p.last!r} before path horizon {x.horizon!r}")


def increments(x, p):
    """Left endpoints ``t_i < horizon`` and forward increments ``x(t_{i+1}) - x(t_i)``."""
    _check_partition(x, p)
    left, right = p.intervals(x.horizon)
    return left, x._value_at(right) - x._value_at(left)


def q_n(x, p):
    left, dx = increments(x, p)
    return StepIncreasing.from_atoms(left, dx * dx, x.horizon)


def p_n(x, p):
    _check_partition(x, p)
    left, right = p.intervals(x.horizon)
    dx = x._value_at(right) - x._value_at(left)
    keep = right <= x.horizon
    return StepIncreasing.from_atoms(right[keep], dx[keep] ** 2, x.horizon)


def mu_n(x, p):
    left, dx = increments(x, p)
    keep = dx != 0
    return DiscreteMeasure(left[keep], dx[keep] ** 2)


def cross_q_n(x, y, p):
    """``sum_{t_i <= t} dx_i dy_i`` as a signed step path."""
    if x.horizon != y.horizon:
        raise DomainError("horizon mismatch")
    left, dx = increments(x, p)
    _, dy = increments(y, p)
    return _signed_cumulative(left, dx * dy, x.horizon)


def _signed_cumulative(times, masses, horizon):
    """Right-continuous cumulative sum with declared jumps at non-zero masses."""
    keep = masses != 0
    t, m = times[keep], masses[keep]
    start = 0.0
    if t.size and t[0] == 0.0:
        start, t, m = float(m[0]), t[1:], m[1:]
    cum = start + np.cumsum(m)
    before = np.concatenate([[start], cum])[:-1]
    kt = np.concatenate([[0.0], np.repeat(t, 2)])
    kv = np.concatenate([[start], np.column_stack([before, cum]).ravel()])
    return CadlagPath(kt, kv, horizon)


def _q_value(x, p, t):
    left, dx = increments(x, p)
    return math.fsum((dx[left <= t] ** 2).tolist())


def s_n(x, p, t):
    """Capped-increment sum at a single time ``t``."""
    _check_partition(x, p)
    x._check(t)
    pts = p.points
    a = x._value_at(np.minimum(pts[:-1], t))
    b = x._value_at(np.minimum(pts[1:], t))
    return math.fsum(((b - a) ** 2).tolist())


def quartic_jump_sum(x, p, t):
    """``sum_{t_i <= t} (x(t_{i+1}) - x(t_i))**4``."""
    x._check(t)
    left, dx = increments(x, p)
    return math.fsum((dx[left <= t] ** 4).tolist())


def sn_qn_discrepancy(x, p, t, rtol=1e-12):
    """``|s_n(t) - q_n(t)|``, cross-checked against its closed form.

    With ``t_i`` the last partition point at or before ``t``, the two sums
    differ only in the interval containing ``t``, and
    ``|s_n - q_n| = |a**2 + 2 a b|`` with ``a = x(t_{i+1}) - x(t)`` and
    ``b = x(t) - x(t_i)``.
    """
    s = s_n(x, p, t)
    q = _q_value(x, p, t)
    ti = p.last_at_or_before(t)
    nxt = p.successor(ti)
    xt = x._value_at(t)
    a = float(x._value_at(nxt) - xt) if ti < x.horizon else 0.0
    b = float(xt - x._value_at(ti))
    lhs = abs(s - q)
    rhs = abs(a * a + 2 * a * b)
    scale = max(abs(s), abs(q), a * a, abs(a * b), np.finfo(float).tiny)
    if abs(lhs - rhs) > rtol * scale:
        raise InternalConsistencyError(
            f"|s_n - q_n| = {lhs!r} but closed form gives {rhs!r} at t={t!r}")
    return lhs


# ----------------------------------------------------------------- decomposition

@dataclass
class QVDecomposition:
    """``total = continuous_part + sum of jump masses up to t``."""

    total: StepIncreasing
    continuous_part: StepIncreasing
    jump_part: list

    def to_dict(self):
        return {"total": path_to_csv_string(self.total),
                "continuous_part": path_to_csv_string(self.continuous_part),
                "jump_part": [[float(s), float(m)] for s, m in self.jump_part]}


def lebesgue_decompose(limit, x, atol):
    """Split ``limit`` into a jump-free part and the squared jumps of ``x``.

    Every atom of ``limit`` must either sit at a declared jump ``s`` of ``x``
    with mass within ``atol`` of ``dx(s)**2``, or be no larger than ``atol``.
    Anything else raises :class:`LConditionError`.
    """
    H = limit.horizon
    times, masses = limit.atoms()
    jt = x.jump_times
    keep = jt <= H
    jt, js = jt[keep], x.jump_sizes[keep]
    on = np.isin(times, jt)
    lookup = dict(zip(times[on].tolist(), masses[on].tolist()))
    jumps = []
    for s, d in zip(jt.tolist(), js.tolist()):
        m = lookup.get(s, 0.0)
        if abs(m - d * d) > atol:
            raise LConditionError(s, m, d * d)
        jumps.append((s, m))
    off_t, off_m = times[~on], masses[~on]
    big = off_m > atol
    if np.any(big):
        k = int(np.flatnonzero(big)[0])
        raise LConditionError(off_t[k], off_m[k], 0.0)
    if off_t.size and off_t[0] == 0.0:
        start, off_t, off_m = float(off_m[0]), off_t[1:], off_m[1:]
    else:
        start = 0.0
    cont = StepIncreasing(np.concatenate([[0.0], off_t]),
                          start + np.concatenate([[0.0], np.cumsum(off_m)]), H)
    return QVDecomposition(limit, cont, jumps)


# ------------------------------------------------------------------------- limit

@dataclass
class ConvergenceReport:
    levels: list
    meshes: list
    distances: list            # J1 distance between consecutive levels
    distances_to_finest: list  # J1 distance of each level to the finest
    uniform_to_limit: list
    j1_to_limit: list
    mode: str
    converged: bool
    tol: float
    atol: float
    limit: StepIncreasing = field(repr=False)
    violation: str = None

    def to_dict(self):
        return {"levels": self.levels, "meshes": self.meshes,
                "distances": self.distances,
                "distances_to_finest": self.distances_to_finest,
                "uniform_to_limit": self.uniform_to_limit,
                "j1_to_limit": self.j1_to_limit,
                "mode": self.mode, "converged": self.converged,
                "tol": self.tol, "atol": self.atol,
                "limit": path_to_csv_string(self.limit),
                "violation": self.violation}


def aligned_limit(x, p, H=None):
    """Finest-level ``q_n`` with each jump-carrying atom moved onto its jump.

    The increment over the interval covering a declared jump ``s`` is booked
    by ``q_n`` at ``t'_n = max{t_i < s}``; as the mesh shrinks that atom
    converges to ``s``, so the limit estimate places it there.
    """
    H = x.horizon if H is None else H
    m = mu_n(x, p)
    t, mass = m.times.copy(), m.masses
    for s in x.jump_times:
        if 0 < s <= H:
            tp = p.last_strictly_before(s)
            hit = t == tp
            t[hit] = s
    return StepIncreasing.from_atoms(t, mass, H)


def default_atol(x, p):
    big = float(np.max(np.abs(x.jump_sizes))) if x.jump_times.size else 0.0
    return 8.0 * math.sqrt(p.mesh(x.horizon)) * max(1.0, big)


def qv_limit(x, scheme, levels, tol=1e-3, atol=None):
    """Estimate ``[x]`` along ``scheme`` and decompose it.

    Convergence is declared when every pairwise J1 distance among the last
    three levels is ``<= tol`` (a Cauchy test on the tail). Returns
    ``(decomposition or None, report)``.
    """
    from .skorokhod import classify_convergence_mode, j1_distance_compact, uniform_distance

    levels = list(levels)
    if len(levels) < 3:
        raise ValueError("need at least 3 levels")
    H = x.horizon
    parts = [scheme.generate(n) for n in levels]
    qs = [q_n(x, p) for p in parts]

    def j1(a, b):
        return j1_distance_compact(a, b, H, with_witness=False)[0]

    consecutive = [j1(a, b) for a, b in zip(qs[:-1], qs[1:])]
    to_finest = [j1(q, qs[-1]) for q in qs]
    # Cauchy test on the tail: all pairwise distances among the last 3 levels
    diameter = max(consecutive[-2:] + [to_finest[-3]])
    converged = diameter <= tol

    limit = aligned_limit(x, parts[-1])
    uni = [uniform_distance(q, limit, H) for q in qs]
    j1l = [j1(q, limit) for q in qs]
    if atol is None:
        atol = default_atol(x, parts[-1])
    if converged:
        mode = classify_convergence_mode(qs, limit, H, tol, distances=(np.array(uni), np.array(j1l)))
        if mode == "divergent":
            # Cauchy at the finest levels but the distances to the estimate are
            # not yet monotone; J1 is the weakest mode the Cauchy test supports
            mode = "j1"
    else:
        mode = "divergent"
    report = ConvergenceReport(levels, [p.mesh(H) for p in parts], consecutive, to_finest,
                               uni, j1l, mode, converged, tol, atol, limit)
    if not converged:
        return None, report
    try:
        dec = lebesgue_decompose(limit, x, atol)
    except LConditionError as exc:
        report.violation = str(exc)
        return None, report
    return dec, report
