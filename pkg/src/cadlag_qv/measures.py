"""
Discrete measures on ``[0, inf)`` and numerical vague / weak convergence checks.

Convergence over finitely many levels is judged by the same rule used for
quadratic-variation limits: the tail maximum of the gaps over the last three
levels must lie below ``tol``.
"""

from dataclasses import dataclass, field

import numpy as np

from .paths import StepIncreasing


@dataclass(frozen=True)
class DiscreteMeasure:
    """Finite sum of point masses ``sum_i m_i delta(t_i)``."""

    times: np.ndarray
    masses: np.ndarray

    def __post_init__(self):
        t = np.asarray(self.times, dtype=float).ravel()
        m = np.asarray(self.masses, dtype=float).ravel()
        if t.size != m.size:
            raise ValueError("times and masses must have equal length")
        if np.any(m < 0):
            raise ValueError("masses must be non-negative")
        if np.any(t < 0):
            raise ValueError("atoms must lie in [0, inf)")
        uniq, inv = np.unique(t, return_inverse=True)
        mass = np.zeros(uniq.size)
        np.add.at(mass, inv, m)
        object.__setattr__(self, "times", uniq)
        object.__setattr__(self, "masses", mass)

    @classmethod
    def empty(cls):
        return cls(np.empty(0), np.empty(0))

    @property
    def total(self):
        return float(self.masses.sum())

    def __len__(self):
        return self.times.size

    def mass_at(self, t):
        i = np.searchsorted(self.times, t)
        if i < self.times.size and self.times[i] == t:
            return float(self.masses[i])
        return 0.0

    def cdf(self, t):
        """``mu([0, t])``, vectorised over ``t``."""
        cum = np.concatenate([[0.0], np.cumsum(self.masses)])
        out = cum[np.searchsorted(self.times, t, side="right")]
        return float(out) if np.ndim(out) == 0 else out

    def distribution(self, horizon):
        """Distribution function on ``[0, horizon]`` as a step path."""
        keep = self.times <= horizon
        return StepIncreasing.from_atoms(self.times[keep], self.masses[keep], horizon)

    def restricted(self, T):
        keep = self.times <= T
        return DiscreteMeasure(self.times[keep], self.masses[keep])


@dataclass(frozen=True)
class TestFunction:
    """Continuous test function vanishing beyond ``support_bound``.

    ``support_bound = inf`` marks a function that is only used on a bounded
    window ``[0, T]`` (weak convergence), not a compactly supported one.
    """

    __test__ = False  # keep pytest from collecting this class

    evaluator: object
    support_bound: float = np.inf
    name: str = ""

    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        out = np.asarray(self.evaluator(t), dtype=float)
        if np.isfinite(self.support_bound):
            out = np.where(t <= self.support_bound, out, 0.0)
        return out

    def sup_norm(self, T=None, samples=1000):
        T = self.support_bound if T is None else T
        grid = np.linspace(0.0, T, samples)
        return float(np.max(np.abs(self(grid))))


def hat(center, half_width):
    """Tent function peaking at ``center`` with value 1."""
    def f(t):
        return np.clip(1.0 - np.abs(t - center) / half_width, 0.0, None)
    return TestFunction(f, center + half_width, f"hat({center:g},{half_width:g})")


def ramp(slope, top):
    """Lipschitz ramp rising as ``slope * t`` up to ``top``, then back to 0 at ``2 top``."""
    def f(t):
        return slope * np.clip(np.minimum(t, 2.0 * top - t), 0.0, None)
    return TestFunction(f, 2.0 * top, f"ramp({slope:g},{top:g})")


def hat_battery(horizon, level=3):
    """Hats centred on the dyadic points ``k 2^-level`` of ``[0, horizon]``."""
    h = 2.0 ** -level
    centers = np.arange(0.0, horizon + h / 2, h)
    return [hat(float(c), h) for c in centers]


def default_battery(horizon, level=3):
    """Hat functions at dyadic centres plus two Lipschitz ramps."""
    return hat_battery(horizon, level) + [ramp(1.0, horizon), ramp(4.0, horizon / 2)]


def integrate(f, m):
    """``sum_i f(t_i) m_i`` over atoms inside the support of ``f``."""
    if len(m) == 0:
        return 0.0
    return float(np.dot(f(m.times), m.masses))


def taper_extensions(f, T, eps):
    """Continuous compactly supported functions sandwiching ``f 1_[0,T]``.

    Returns ``(upper, lower)`` with ``lower <= f 1_[0,T] <= upper`` for
    ``f >= 0``: ``upper`` extends ``f`` past ``T`` by a linear taper of
    ``f(T)`` down to 0 on ``(T, T + eps]``; ``lower`` damps ``f`` by the
    factor ``(T - t) / eps`` on ``(T - eps, T]`` and vanishes past ``T``.
    """
    if eps <= 0:
        raise ValueError("eps must be positive")
    T = float(T)
    fT = float(f(np.asarray(T)))

    def upper(t):
        t = np.asarray(t, dtype=float)
        base = np.where(t <= T, f(np.minimum(t, T)), 0.0)
        tail = np.where((t > T) & (t <= T + eps), fT * (1.0 + (T - t) / eps), 0.0)
        return base + tail

    def lower(t):
        t = np.asarray(t, dtype=float)
        damp = np.clip((T - t) / eps, 0.0, 1.0)
        return np.where(t <= T, f(np.minimum(t, T)) * damp, 0.0)

    name = f.name or "f"
    return (TestFunction(upper, T + eps, f"upper[{name}]"),
            TestFunction(lower, T, f"lower[{name}]"))


def sandwich_holds(f, T, eps, samples=1000, horizon=None):
    """Sampled check of ``0 <= lower <= f 1_[0,T] <= upper <= sup f``."""
    upper, lower = taper_extensions(f, T, eps)
    right = T + eps if horizon is None else max(horizon, T + eps)
    grid = np.linspace(0.0, right, samples)
    mid = np.where(grid <= T, f(grid), 0.0)
    lo, hi = lower(grid), upper(grid)
    bound = max(np.max(np.abs(f(np.linspace(0.0, T, samples)))), np.max(np.abs(mid)))
    tiny = 1e-12 * max(1.0, bound)
    return bool(np.all(lo >= -tiny) and np.all(lo <= mid + tiny)
                and np.all(mid <= hi + tiny) and np.all(hi <= bound + tiny))


def gaps_decay(gaps, tol, window=3):
    """Finite-level proxy for ``gaps -> 0``.

    The running tail maximum ``max_{m >= k} gaps[m]`` is non-increasing by
    construction and must be ``<= tol`` over the last ``window`` levels,
    which amounts to the last ``window`` gaps all being ``<= tol``. Using the
    tail maximum instead of the raw gaps keeps sampling noise in Monte Carlo
    fixtures from masquerading as divergence.
    """
    g = np.asarray(gaps, dtype=float)
    if g.size < window:
        return False
    envelope = np.maximum.accumulate(g[::-1])[::-1]
    return bool(np.all(envelope[-window:] <= tol))


def strictly_decaying(values, bound, window=3):
    """Last ``window`` values non-increasing with the final one ``<= bound``."""
    v = np.asarray(values, dtype=float)
    if v.size < window:
        return False
    tail = v[-window:]
    return bool(tail[-1] <= bound and np.all(np.diff(tail) <= 0))


@dataclass
class ConvergenceCheck:
    """Per-test-function gap table from a vague or weak convergence check."""

    names: list
    gaps: np.ndarray  # shape (n_functions, n_levels)
    passed: bool
    per_function: list
    bounds: dict = field(default_factory=dict)

    def to_dict(self):
        out = {"functions": self.names, "gaps": self.gaps.tolist(),
               "passed": self.passed, "per_function": self.per_function}
        if self.bounds:
            out["bounds"] = {k: np.asarray(v).tolist() for k, v in self.bounds.items()}
        return out


def vague_convergence_check(seq, target, fns, tol):
    """Gaps ``|int f dmu_n - int f dmu|`` for compactly supported ``f``."""
    if len(seq) < 3:
        raise ValueError("need at least 3 measures")
    for f in fns:
        if not np.isfinite(f.support_bound):
            raise ValueError(f"test function {f.name or f!r} is not compactly supported")
    ref = np.array([integrate(f, target) for f in fns])
    gaps = np.array([[abs(integrate(f, m) - ref[k]) for m in seq] for k, f in enumerate(fns)])
    per = [gaps_decay(row, tol) for row in gaps]
    return ConvergenceCheck([f.name for f in fns], gaps, all(per), per)


class AtomAtHorizonError(ValueError):
    """The weak check was asked for a horizon carrying an atom of the target."""


def weak_convergence_check(seq, target, T, fns, tol, eps=None):
    """Gaps of ``int_[0,T] f dmu_n`` against the target for continuous ``f``.

    ``T`` must not be an atom of the target. The taper sandwich bounds
    ``int lower dmu_n <= int_[0,T] f dmu_n <= int upper dmu_n`` are reported
    for the non-negative part of each test function.
    """
    if len(seq) < 3:
        raise ValueError("need at least 3 measures")
    if target.mass_at(T) > 0:
        raise AtomAtHorizonError(f"T={T!r} is an atom of the target (mass {target.mass_at(T)!r})")
    if eps is None:
        eps = 0.5 * min([abs(T - s) for s in target.times if s != T] + [T])
    window = [TestFunction(f.evaluator, np.inf, f.name) for f in fns]

    def on_window(f, m):
        return integrate(f, m.restricted(T))

    ref = np.array([on_window(f, target) for f in window])
    gaps = np.array([[abs(on_window(f, m) - ref[k]) for m in seq] for k, f in enumerate(window)])
    lows, highs = [], []
    for f in window:
        pos = TestFunction(lambda t, f=f: np.maximum(f(t), 0.0), np.inf, f.name)
        upper, lower = taper_extensions(pos, T, eps)
        lows.append([integrate(lower, m) for m in seq])
        highs.append([integrate(upper, m) for m in seq])
    per = [gaps_decay(row, tol) for row in gaps]
    return ConvergenceCheck([f.name for f in fns], gaps, all(per), per,
                            {"lower": np.array(lows), "upper": np.array(highs), "eps": eps})
