"""
Piecewise-constant càdlàg paths with explicit jump bookkeeping.

A path is stored as a list of knots ``(time, value)`` sorted by time. A time
may appear twice: the first row holds the left limit ``x(t-)`` and the second
the value ``x(t)``. Such a duplicated time with distinct values is a
*declared jump*. Between knots the path is constant (right-continuous step
interpretation), so densely sampled continuous paths are represented as step
paths with an empty declared jump set.
"""

import csv
from dataclasses import dataclass

import numpy as np


class DomainError(ValueError):
    """Raised when a path is queried outside of its time domain."""


class PathFormatError(ValueError):
    """Raised for malformed knot data or CSV input."""


class CadlagPath:
    """Real-valued càdlàg step path on ``[0, horizon]``.

    Parameters
    ----------
    times : array_like
        Knot times, non-decreasing, starting at 0. A time may be repeated
        once to encode a jump (left-limit row first, value row second).
    values : array_like
        Knot values, same length as ``times``.
    horizon : float, optional
        Largest represented time; defaults to the last knot time. The path is
        constant between the last knot and the horizon.
    """

    def __init__(self, times, values, horizon=None):
        t = np.asarray(times, dtype=float).ravel()
        v = np.asarray(values, dtype=float).ravel()
        if t.size == 0 or t.size != v.size:
            raise PathFormatError("times and values must be non-empty and of equal length")
        if not (np.all(np.isfinite(t)) and np.all(np.isfinite(v))):
            raise PathFormatError("knots must be finite")
        if t[0] != 0.0:
            raise PathFormatError(f"first knot must be at time 0, got {t[0]!r}")
        dt = np.diff(t)
        if np.any(dt < 0):
            raise PathFormatError("knot times must be non-decreasing")
        dup = dt == 0
        if np.any(dup[1:] & dup[:-1]):
            raise PathFormatError("a knot time may appear at most twice")
        if dup.size and dup[0]:
            raise PathFormatError("a path cannot jump at time 0")
        horizon = float(t[-1]) if horizon is None else float(horizon)
        if horizon < t[-1] or horizon <= 0:
            raise PathFormatError(f"horizon {horizon!r} must be positive and >= last knot time")

        self._knot_t = t
        self._knot_v = v
        self.horizon = horizon

        # collapse duplicated times into (time, left, value) triples
        keep = np.ones(t.size, dtype=bool)
        keep[:-1][dup] = False
        self._t = t[keep]
        self._v = v[keep]
        left = self._v.copy()
        second = np.flatnonzero(dup) + 1
        idx = np.searchsorted(self._t, t[second])
        left[idx] = v[second - 1]
        self._left = left
        self._jump_mask = left != self._v

    # ------------------------------------------------------------------ factories

    @classmethod
    def step(cls, jumps, horizon, initial=0.0):
        """Pure-jump path from ``[(time, size), ...]`` starting at ``initial``."""
        jumps = sorted((float(s), float(d)) for s, d in jumps)
        times, values = [0.0], [float(initial)]
        level = float(initial)
        for s, d in jumps:
            if not 0.0 < s <= horizon:
                raise DomainError(f"jump time {s!r} outside (0, {horizon!r}]")
            if times[-1] == s:
                raise PathFormatError(f"duplicate jump time {s!r}")
            times += [s, s]
            values += [level, level + d]
            level += d
        return cls(times, values, horizon)

    @classmethod
    def from_samples(cls, times, values, horizon=None):
        """Sampled path with no declared jumps."""
        times = np.asarray(times, dtype=float)
        if np.any(np.diff(times) <= 0):
            raise PathFormatError("sample times must be strictly increasing")
        return cls(times, values, horizon)

    @classmethod
    def zero(cls, horizon):
        return cls([0.0], [0.0], horizon)

    # ------------------------------------------------------------------ accessors

    @property
    def knot_times(self):
        return self._knot_t.copy()

    @property
    def knot_values(self):
        return self._knot_v.copy()

    @property
    def times(self):
        """Distinct knot times."""
        return self._t

    @property
    def values(self):
        """Right-continuous value at each distinct knot time."""
        return self._v

    @property
    def left_values(self):
        """Left limit at each distinct knot time (equal to the value off jumps)."""
        return self._left

    @property
    def jump_times(self):
        return self._t[self._jump_mask]

    @property
    def jump_sizes(self):
        return (self._v - self._left)[self._jump_mask]

    def __repr__(self):
        return (f"CadlagPath(knots={self._t.size}, jumps={int(self._jump_mask.sum())}, "
                f"horizon={self.horizon:g})")

    # ----------------------------------------------------------------- evaluation

    def _check(self, t, allow_zero=True):
        t = np.asarray(t, dtype=float)
        lo_bad = t < 0 if allow_zero else t <= 0
        if np.any(lo_bad) or np.any(t > self.horizon):
            raise DomainError(f"time outside {'[' if allow_zero else '('}0, {self.horizon:g}]")
        return t

    def evaluate(self, t):
        """Right-continuous value ``x(t)``; vectorised over ``t``."""
        t = self._check(t)
        idx = np.searchsorted(self._t, t, side="right") - 1
        out = self._v[idx]
        return float(out) if out.ndim == 0 else out

    def left_limit(self, t):
        """Left limit ``x(t-)`` for ``0 < t <= horizon``."""
        t = self._check(t, allow_zero=False)
        idx = np.searchsorted(self._t, t, side="right") - 1
        at_knot = self._t[idx] == t
        out = np.where(at_knot, self._left[idx], self._v[idx])
        return float(out) if out.ndim == 0 else out

    def jump_at(self, t):
        """``x(t) - x(t-)``; zero off the declared jump times."""
        t = self._check(t, allow_zero=False)
        idx = np.searchsorted(self._t, t, side="right") - 1
        at_knot = self._t[idx] == t
        out = np.where(at_knot, self._v[idx] - self._left[idx], 0.0)
        return float(out) if out.ndim == 0 else out

    def jumps_up_to(self, t):
        """Sorted ``[(s, dx(s))]`` over declared jumps with ``s <= t``."""
        self._check(t)
        times, sizes = self.jump_times, self.jump_sizes
        keep = times <= t
        return list(zip(times[keep].tolist(), sizes[keep].tolist()))

    def _value_at(self, t):
        """Evaluation with constant extension beyond the horizon."""
        t = np.asarray(t, dtype=float)
        idx = np.searchsorted(self._t, t, side="right") - 1
        return self._v[idx]

    # -------------------------------------------------------------- manipulation

    def step_breakpoints(self):
        """Step-function view used by the distance solvers.

        Returns the initial value, the times where the step function changes
        value, and the value taken from each such time on.
        """
        change = np.flatnonzero(self._v[1:] != self._v[:-1]) + 1
        return float(self._v[0]), self._t[change], self._v[change]

    def restrict(self, horizon):
        """The same path viewed on ``[0, horizon]``."""
        horizon = float(horizon)
        if not 0 < horizon <= self.horizon:
            raise DomainError(f"cannot restrict to horizon {horizon!r}")
        keep = self._knot_t <= horizon
        return CadlagPath(self._knot_t[keep], self._knot_v[keep], horizon)

    def scaled(self, c):
        return pointwise_combine(self, self, (float(c), 0.0))

    def __add__(self, other):
        return pointwise_combine(self, other, (1.0, 1.0))

    def __sub__(self, other):
        return pointwise_combine(self, other, (1.0, -1.0))

    def __neg__(self):
        return self.scaled(-1.0)


def _knots_from_triples(t, left, value, jump):
    """Knot arrays from per-time (left, value) pairs; duplicates only at jumps."""
    jump = jump & (left != value)
    reps = np.where(jump, 2, 1)
    times = np.repeat(t, reps)
    values = np.repeat(value, reps)
    first = np.cumsum(reps) - reps
    values[first[jump]] = left[jump]
    return times, values


def pointwise_combine(a, b, weights):
    """Path ``w1 * a + w2 * b`` on the merged knot set.

    Declared jumps of the result are the union of the declared jump times of
    ``a`` and ``b`` where the combined left limit and value differ.
    """
    if a.horizon != b.horizon:
        raise DomainError(f"horizon mismatch: {a.horizon!r} vs {b.horizon!r}")
    w1, w2 = (float(w) for w in weights)
    t = np.union1d(a.times, b.times)
    value = w1 * a._value_at(t) + w2 * b._value_at(t)
    jump = np.isin(t, a.jump_times) | np.isin(t, b.jump_times)
    left = value.copy()
    if np.any(jump):
        tj = t[jump]
        left[jump] = w1 * _left_at(a, tj) + w2 * _left_at(b, tj)
    times, values = _knots_from_triples(t, left, value, jump)
    return CadlagPath(times, values, a.horizon)


def _left_at(path, t):
    idx = np.searchsorted(path.times, t, side="right") - 1
    at_knot = path.times[idx] == t
    return np.where(at_knot, path.left_values[idx], path.values[idx])


@dataclass(frozen=True)
class VectorCadlagPath:
    """An ``R^m``-valued càdlàg path stored as ``m`` scalar components."""

    components: tuple

    def __post_init__(self):
        comps = tuple(self.components)
        if not comps:
            raise PathFormatError("a vector path needs at least one component")
        horizons = {c.horizon for c in comps}
        if len(horizons) != 1:
            raise DomainError(f"components have different horizons: {sorted(horizons)}")
        object.__setattr__(self, "components", comps)

    @property
    def dimension(self):
        return len(self.components)

    @property
    def horizon(self):
        return self.components[0].horizon

    @property
    def jump_times(self):
        return np.unique(np.concatenate([c.jump_times for c in self.components]))

    def __getitem__(self, i):
        return self.components[i]

    def evaluate(self, t):
        return np.stack([c.evaluate(t) for c in self.components], axis=-1)

    def left_limit(self, t):
        return np.stack([c.left_limit(t) for c in self.components], axis=-1)

    def jump_at(self, t):
        return np.stack([c.jump_at(t) for c in self.components], axis=-1)

    def _value_at(self, t):
        return np.stack([c._value_at(t) for c in self.components], axis=-1)


# ----------------------------------------------------------------------- CSV I/O

def _read_rows(source):
    with open(source, newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = [h.strip() for h in next(reader)]
        except StopIteration:
            raise PathFormatError(f"{source}: empty file") from None
        rows = [r for r in reader if r and any(c.strip() for c in r)]
    if len(header) < 2 or header[0] != "t":
        raise PathFormatError(f"{source}: header must be 't,v' or 't,v1,...,vm'")
    try:
        data = np.array([[float(c) for c in r] for r in rows], dtype=float)
    except ValueError as exc:
        raise PathFormatError(f"{source}: {exc}") from None
    if data.ndim != 2 or data.shape[0] == 0 or data.shape[1] != len(header):
        raise PathFormatError(f"{source}: ragged or empty rows")
    return header, data


def read_csv(source, horizon=None):
    """Read a ``t,v`` or ``t,v1,...,vm`` file.

    Returns a :class:`CadlagPath` for one value column and a
    :class:`VectorCadlagPath` otherwise.
    """
    header, data = _read_rows(source)
    t = data[:, 0]
    comps = [CadlagPath(t, data[:, k], horizon) for k in range(1, data.shape[1])]
    if len(comps) == 1 and header[1] == "v":
        return comps[0]
    return VectorCadlagPath(tuple(comps))


def path_to_rows(path):
    """Knot rows ``[(t, v1, ..., vm)]`` for scalar or vector paths, ending at the horizon."""
    if isinstance(path, CadlagPath):
        rows = list(zip(path.knot_times.tolist(), path.knot_values.tolist()))
        if path.horizon > rows[-1][0]:
            # a closing row carries the horizon, which is the last knot time on reading
            rows.append((path.horizon, rows[-1][1]))
        return rows
    comps = path.components
    t = np.unique(np.concatenate([c.times for c in comps]))
    jump = np.isin(t, path.jump_times)
    value = path._value_at(t)
    left = value.copy()
    for k, c in enumerate(comps):
        left[jump, k] = _left_at(c, t[jump])
    rows = []
    for i, ti in enumerate(t):
        if jump[i]:
            rows.append((float(ti), *left[i].tolist()))
        rows.append((float(ti), *value[i].tolist()))
    if path.horizon > rows[-1][0]:
        rows.append((path.horizon, *rows[-1][1:]))
    return rows


def write_csv(path, dest):
    rows = path_to_rows(path)
    m = len(rows[0]) - 1
    header = ["t", "v"] if isinstance(path, CadlagPath) else ["t"] + [f"v{k + 1}" for k in range(m)]
    with open(dest, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        for r in rows:
            writer.writerow([repr(float(c)) for c in r])


def path_to_csv_string(path):
    """Inline CSV text of the knots, used when embedding paths in reports."""
    rows = path_to_rows(path)
    m = len(rows[0]) - 1
    head = "t,v" if m == 1 else "t," + ",".join(f"v{k + 1}" for k in range(m))
    return "\n".join([head] + [",".join(repr(float(c)) for c in r) for r in rows])


class StepIncreasing(CadlagPath):
    """Non-negative, non-decreasing step path (the type of ``q_n``, ``p_n`` and QV limits).

    Every value change away from time 0 is a declared jump. The value at 0
    is the mass sitting at time 0, which is non-zero for ``q_n`` at a finite
    level (the first forward increment is counted at ``t_0 = 0``).
    """

    def __init__(self, times, values, horizon=None, atol=0.0):
        super().__init__(times, values, horizon)
        if np.any(self._v < -atol) or np.any(np.diff(self._knot_v) < -atol):
            raise PathFormatError("step-increasing path must be non-negative and non-decreasing")

    @classmethod
    def from_atoms(cls, times, masses, horizon):
        """Distribution function ``t -> sum of masses at times <= t``."""
        times = np.asarray(times, dtype=float).ravel()
        masses = np.asarray(masses, dtype=float).ravel()
        if np.any(masses < 0):
            raise PathFormatError("masses must be non-negative")
        order = np.argsort(times, kind="stable")
        times, masses = times[order], masses[order]
        if times.size and (times[0] < 0 or times[-1] > horizon):
            raise DomainError("atom outside [0, horizon]")
        uniq, inv = np.unique(times, return_inverse=True)
        mass = np.zeros(uniq.size)
        np.add.at(mass, inv, masses)
        keep = mass > 0
        uniq, mass = uniq[keep], mass[keep]
        at_zero = uniq.size > 0 and uniq[0] == 0.0
        start = float(mass[0]) if at_zero else 0.0
        if at_zero:
            uniq, mass = uniq[1:], mass[1:]
        cum = start + np.cumsum(mass)
        before = np.concatenate([[start], cum])[:-1]
        t = np.concatenate([[0.0], np.repeat(uniq, 2)])
        v = np.concatenate([[start], np.column_stack([before, cum]).ravel()])
        return cls(t, v, horizon)

    def atoms(self):
        """``(times, masses)`` of the associated discrete measure."""
        t, v = self._t, self._v
        inc = np.diff(np.concatenate([[0.0], v]))
        keep = inc != 0
        return t[keep], inc[keep]
