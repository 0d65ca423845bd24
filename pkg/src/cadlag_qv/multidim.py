"""
Matrix quadratic variation of vector paths and covariation by polarization.

``matrix_q_n`` sums outer products of vector increments, so every increment
of the result is positive semidefinite by construction. Convergence is
tested entry by entry: all entries share the same jump-locating sequence
``t'_n``, which is what makes componentwise J1 convergence sufficient here.
Note that J1 convergence is not preserved by addition in general, so
``x + y`` is formed pointwise and analysed on its own.
"""

from dataclasses import dataclass, field

import numpy as np

from .paths import CadlagPath, DomainError, StepIncreasing, path_to_csv_string, pointwise_combine
from .qv import (InternalConsistencyError, LConditionError, _signed_cumulative, default_atol,
                 increments, q_n, qv_limit)


class UndecidedConvergenceError(RuntimeError):
    """A limit required by the computation could not be established."""

    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report


@dataclass(frozen=True)
class MatrixStepPath:
    """Symmetric ``m x m`` array of step paths on a common horizon."""

    entries: tuple

    def __post_init__(self):
        rows = tuple(tuple(r) for r in self.entries)
        m = len(rows)
        if m == 0 or any(len(r) != m for r in rows):
            raise ValueError("entries must form a non-empty square array")
        if len({e.horizon for r in rows for e in r}) != 1:
            raise DomainError("entries have different horizons")
        object.__setattr__(self, "entries", rows)

    @property
    def dimension(self):
        return len(self.entries)

    @property
    def horizon(self):
        return self.entries[0][0].horizon

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i][j]

    @property
    def times(self):
        return np.unique(np.concatenate([e.times for r in self.entries for e in r]))

    def evaluate(self, t):
        """Matrix value(s); shape ``(m, m)`` or ``(len(t), m, m)``."""
        vals = np.array([[e.evaluate(t) for e in r] for r in self.entries])
        return np.moveaxis(vals, (0, 1), (-2, -1)) if vals.ndim == 3 else vals

    def _value_at(self, t):
        vals = np.array([[e._value_at(t) for e in r] for r in self.entries])
        return np.moveaxis(vals, (0, 1), (-2, -1)) if vals.ndim == 3 else vals

    def to_dict(self):
        return {"dimension": self.dimension,
                "entries": [[path_to_csv_string(e) for e in r] for r in self.entries]}


def _build(left, dX, horizon, diag_monotone=True):
    m = dX.shape[1]
    rows = [[None] * m for _ in range(m)]
    for i in range(m):
        for j in range(i, m):
            mass = dX[:, i] * dX[:, j]
            if i == j and diag_monotone:
                e = StepIncreasing.from_atoms(left, mass, horizon)
            else:
                e = _signed_cumulative(left, mass, horizon)
            rows[i][j] = rows[j][i] = e
    return MatrixStepPath(rows)


def _vector_increments(x, p):
    cols = [increments(c, p) for c in x.components]
    return cols[0][0], np.column_stack([d for _, d in cols])


def matrix_q_n(x, p):
    """``sum_{t_i <= t} dx_i dx_i^T`` with ``dx_i = x(t_{i+1}) - x(t_i)``."""
    left, dX = _vector_increments(x, p)
    return _build(left, dX, x.horizon)


def polarization_gap(x, y, p):
    """Largest relative defect of ``q(x+y) = q(x) + q(y) + 2 q(x, y)`` over knot times."""
    from .qv import cross_q_n

    s = pointwise_combine(x, y, (1.0, 1.0))
    qs, qx, qy, qxy = q_n(s, p), q_n(x, p), q_n(y, p), cross_q_n(x, y, p)
    t = np.unique(np.concatenate([qs.times, qx.times, qy.times, qxy.times]))
    a, b, c, d = (z._value_at(t) for z in (qs, qx, qy, qxy))
    scale = np.maximum.reduce([np.abs(a), np.abs(b), np.abs(c), np.abs(d),
                               np.full(t.size, np.finfo(float).tiny)])
    return float(np.max(np.abs(a - b - c - 2 * d) / scale))


def covariation_polarization(x, y, scheme, levels, tol=1e-3, atol=None, rtol=1e-12):
    """``([x+y] - [x] - [y]) / 2`` from three quadratic-variation limits.

    The per-level identity ``q(x+y) = q(x) + q(y) + 2 q(x, y)`` is checked on
    every level before the limits are taken.
    """
    for n in levels:
        gap = polarization_gap(x, y, scheme.generate(n))
        if gap > rtol:
            raise InternalConsistencyError(f"polarization identity off by {gap:.3g} at level {n}")
    s = pointwise_combine(x, y, (1.0, 1.0))
    limits = []
    for name, z in (("x+y", s), ("x", x), ("y", y)):
        dec, rep = qv_limit(z, scheme, levels, tol, atol)
        if dec is None:
            raise UndecidedConvergenceError(f"quadratic variation of {name} undecided", rep)
        limits.append(dec.total)
    ls, lx, ly = limits
    half = pointwise_combine(ls, lx, (0.5, -0.5))
    return pointwise_combine(half, ly, (1.0, -0.5))


# ------------------------------------------------------------------------ limits

def _aligned_entry(left, mass, jump_times, p, horizon, monotone):
    t = left.copy()
    for s in jump_times:
        if 0 < s <= horizon:
            t[t == p.last_strictly_before(s)] = s
    order = np.argsort(t, kind="stable")
    t, mass = t[order], mass[order]
    if monotone:
        return StepIncreasing.from_atoms(t, mass, horizon)
    uniq, inv = np.unique(t, return_inverse=True)
    agg = np.zeros(uniq.size)
    np.add.at(agg, inv, mass)
    return _signed_cumulative(uniq, agg, horizon)


def _signed_atoms(path):
    inc = np.diff(np.concatenate([[0.0], path.values]))
    keep = inc != 0
    return path.times[keep], inc[keep]


@dataclass
class MatrixQVReport:
    levels: list
    entries: list           # per (i, j), i <= j: dict with distances, mode, status
    converged: bool
    violations: list = field(default_factory=list)

    def to_dict(self):
        return {"levels": self.levels, "entries": self.entries,
                "converged": self.converged, "violations": self.violations}


def matrix_qv_limit(x, scheme, levels, tol=1e-3, atol=None):
    """Entrywise Cauchy test and decomposition of the matrix limit.

    Returns ``(limit, report)``; ``limit`` is ``None`` when some entry does not
    converge. Jump masses of entry ``(i, j)`` must match ``dx^i dx^j`` at every
    declared jump within ``atol``.
    """
    from .skorokhod import classify_convergence_mode, j1_distance_compact, uniform_distance

    levels = list(levels)
    if len(levels) < 3:
        raise ValueError("need at least 3 levels")
    H = x.horizon
    parts = [scheme.generate(n) for n in levels]
    mats = [matrix_q_n(x, p) for p in parts]
    left, dX = _vector_increments(x, parts[-1])
    jt = x.jump_times
    jt = jt[jt <= H]
    if atol is None:
        atol = max(default_atol(c, parts[-1]) for c in x.components)
    m = x.dimension
    rows = [[None] * m for _ in range(m)]
    entries, violations, ok = [], [], True
    for i in range(m):
        for j in range(i, m):
            seq = [q[i, j] for q in mats]
            lim = _aligned_entry(left, dX[:, i] * dX[:, j], jt, parts[-1], H, i == j)
            rows[i][j] = rows[j][i] = lim
            dists = [j1_distance_compact(a, b, H, with_witness=False)[0]
                     for a, b in zip(seq[:-1], seq[1:])]
            fin = [j1_distance_compact(a, seq[-1], H, with_witness=False)[0] for a in seq]
            conv = max(dists[-2:] + [fin[-3]]) <= tol
            uni = np.array([uniform_distance(a, lim, H) for a in seq])
            j1l = np.array([j1_distance_compact(a, lim, H, with_witness=False)[0] for a in seq])
            mode = classify_convergence_mode(seq, lim, H, tol, distances=(uni, j1l)) if conv else "divergent"
            if conv and mode == "divergent":
                mode = "j1"
            entry = {"entry": [i, j], "distances": dists, "mode": mode, "converged": conv}
            if not conv:
                ok = False
                violations.append({"entry": [i, j], "reason": "not Cauchy"})
            else:
                err = _entry_decomposition_error(lim, x[i], x[j], jt, atol)
                if err is not None:
                    ok = False
                    violations.append({"entry": [i, j], "reason": str(err), "time": err.time})
            entries.append(entry)
    report = MatrixQVReport(levels, entries, ok, violations)
    return (MatrixStepPath(rows) if ok else None), report


def _entry_decomposition_error(lim, xi, xj, jt, atol):
    times, masses = _signed_atoms(lim)
    on = np.isin(times, jt)
    lookup = dict(zip(times[on].tolist(), masses[on].tolist()))
    for s in jt.tolist():
        want = xi.jump_at(s) * xj.jump_at(s)
        got = lookup.get(s, 0.0)
        if abs(got - want) > atol:
            return LConditionError(s, got, want)
    off = np.abs(masses[~on]) > atol
    if np.any(off):
        k = int(np.flatnonzero(off)[0])
        return LConditionError(times[~on][k], masses[~on][k], 0.0)
    return None


# ------------------------------------------------------------------- diagnostics

@dataclass
class PSDReport:
    passed: bool
    min_eigenvalue: float
    violations: list

    def to_dict(self):
        return dict(self.__dict__)


def psd_increment_check(q, times=None, atol=1e-10):
    """Smallest eigenvalue of ``q(t_{k+1}) - q(t_k)`` over consecutive times.

    ``times`` defaults to all knot times; the value at the first time is
    compared with the zero matrix.
    """
    m = q.dimension
    t = q.times if times is None else np.asarray(times, dtype=float)
    vals = q._value_at(t)
    if vals.ndim == 2:
        vals = vals[None]
    prev = np.concatenate([np.zeros((1, m, m)), vals[:-1]])
    inc = vals - prev
    if not np.array_equal(inc, np.swapaxes(inc, 1, 2)):
        raise ValueError("matrix path is not symmetric")
    eig = np.linalg.eigvalsh(inc)[:, 0]
    bad = np.flatnonzero(eig < -atol)
    lo_t = np.concatenate([[np.nan], t[:-1]])
    viol = [{"from": float(lo_t[k]), "to": float(t[k]), "eigenvalue": float(eig[k])} for k in bad]
    return PSDReport(bad.size == 0, float(eig.min()), viol)


@dataclass
class AlignmentReport:
    levels: list
    t_n: list
    observed: list          # per level: m x m jump matrices of q_n at t_n
    expected: list          # m x m target jump matrix at t
    gaps: list
    passed: bool

    def to_dict(self):
        return dict(self.__dict__)


def jump_alignment_check(x, scheme, t, levels, tol=1e-9):
    """Jumps of every entry of ``q_n`` at the single sequence ``t'_n``.

    Observed ``dq_n^{ij}(t'_n)`` is compared with ``dx^i(t) dx^j(t)`` for all
    entries at once.
    """
    from .measures import gaps_decay

    dx = np.array([c.jump_at(t) for c in x.components])
    want = np.outer(dx, dx)
    tn, obs, gaps = [], [], []
    for n in levels:
        p = scheme.generate(n)
        tp = p.last_strictly_before(t)
        nxt = p.successor(tp)
        inc = x._value_at(nxt) - x._value_at(tp)
        got = np.outer(inc, inc)
        tn.append(float(tp))
        obs.append(got.tolist())
        gaps.append(float(np.max(np.abs(got - want))))
    return AlignmentReport(list(levels), tn, obs, want.tolist(), gaps, gaps_decay(gaps, tol))
