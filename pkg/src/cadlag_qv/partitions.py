"""
Partition sequences of ``[0, horizon]`` and point-location queries.

Dyadic points are generated as ``k / 2**n``, which is exact in binary
floating point, so membership tests against partition points use plain
equality.
"""

from dataclasses import dataclass, field

import numpy as np


class PartitionError(ValueError):
    pass


class Partition:
    """Strictly increasing finite set of times starting at 0."""

    def __init__(self, points):
        p = np.asarray(points, dtype=float).ravel()
        if p.size < 2:
            raise PartitionError("a partition needs at least two points")
        if p[0] != 0.0:
            raise PartitionError(f"partition must start at 0, got {p[0]!r}")
        if np.any(np.diff(p) <= 0):
            raise PartitionError("partition points must be strictly increasing")
        self.points = p
        self.points.setflags(write=False)

    def __len__(self):
        return self.points.size

    def __repr__(self):
        return f"Partition({self.points.size} points, last={self.points[-1]:g})"

    def __eq__(self, other):
        return isinstance(other, Partition) and np.array_equal(self.points, other.points)

    @property
    def last(self):
        return float(self.points[-1])

    def contains(self, t):
        i = np.searchsorted(self.points, t)
        return i < self.points.size and self.points[i] == t

    def mesh(self, T=None):
        """Largest spacing among intervals ``[t_i, t_{i+1}]`` meeting ``[0, T]``."""
        p = self.points
        T = p[-1] if T is None else float(T)
        if T > p[-1]:
            raise PartitionError(f"T={T!r} beyond the last partition point {p[-1]!r}")
        gaps = np.diff(p)
        n = max(1, int(np.searchsorted(p, T, side="left")))
        return float(gaps[:n].max())

    def last_at_or_before(self, t):
        """``max{t_i <= t}``; 0 when ``t < t_1``."""
        t = np.asarray(t, dtype=float)
        if np.any(t < 0):
            raise PartitionError("t must be non-negative")
        i = np.searchsorted(self.points, t, side="right") - 1
        out = self.points[i]
        return float(out) if out.ndim == 0 else out

    def last_strictly_before(self, t):
        """``max{t_i < t}`` for ``t > 0``."""
        t = np.asarray(t, dtype=float)
        if np.any(t <= 0):
            raise PartitionError("t must be positive")
        i = np.searchsorted(self.points, t, side="left") - 1
        out = self.points[i]
        return float(out) if out.ndim == 0 else out

    def successor(self, ti):
        """Next partition point; the last point maps to itself."""
        i = int(np.searchsorted(self.points, ti))
        if i == self.points.size or self.points[i] != ti:
            raise PartitionError(f"{ti!r} is not a partition point")
        return float(self.points[min(i + 1, self.points.size - 1)])

    def predecessor(self, ti):
        """Previous partition point; 0 maps to itself."""
        i = int(np.searchsorted(self.points, ti))
        if i == self.points.size or self.points[i] != ti:
            raise PartitionError(f"{ti!r} is not a partition point")
        return float(self.points[max(i - 1, 0)])

    def intervals(self, horizon=None):
        """Left endpoints and right endpoints of intervals with ``t_i < horizon``."""
        p = self.points
        if horizon is not None:
            n = int(np.searchsorted(p, horizon, side="left"))
            n = max(n, 1)
            return p[:n], p[1:n + 1]
        return p[:-1], p[1:]


@dataclass(frozen=True)
class PartitionScheme:
    """Sequence of partitions ``pi_n`` of ``[0, horizon]``.

    ``kind`` is ``"dyadic"`` (points ``k 2^-n``), ``"uniform"`` (``n + 1``
    equal intervals) or ``"explicit"`` (one user-supplied list per level).
    Schemes need not be nested.
    """

    kind: str
    horizon: float = 1.0
    explicit: tuple = field(default=(), repr=False)

    def __post_init__(self):
        if self.kind not in ("dyadic", "uniform", "explicit"):
            raise PartitionError(f"unknown scheme kind {self.kind!r}")
        if self.horizon <= 0:
            raise PartitionError("horizon must be positive")
        if self.kind == "explicit":
            levels = tuple(Partition(p) for p in self.explicit)
            if not levels:
                raise PartitionError("explicit scheme needs at least one level")
            object.__setattr__(self, "explicit", levels)

    @property
    def max_level(self):
        return len(self.explicit) - 1 if self.kind == "explicit" else None

    def generate(self, n):
        if n < 0:
            raise PartitionError("level must be non-negative")
        H = float(self.horizon)
        if self.kind == "dyadic":
            k = int(np.floor(H * 2.0**n))
            pts = np.arange(k + 1, dtype=float) / 2.0**n
            if pts[-1] < H:
                pts = np.append(pts, H)
            return Partition(pts)
        if self.kind == "uniform":
            return Partition(np.arange(n + 2, dtype=float) * H / (n + 1))
        if n >= len(self.explicit):
            raise PartitionError(f"explicit scheme has no level {n}")
        return self.explicit[n]

    @classmethod
    def from_file(cls, source, horizon=None):
        """One partition per line, comma-separated times."""
        levels = []
        with open(source) as fh:
            for line in fh:
                line = line.strip()
                if line and not line.startswith("#"):
                    levels.append([float(c) for c in line.split(",")])
        if not levels:
            raise PartitionError(f"{source}: no partitions")
        H = max(lv[-1] for lv in levels) if horizon is None else float(horizon)
        return cls("explicit", H, tuple(levels))


def parse_scheme(spec, horizon=1.0):
    """``dyadic``, ``uniform`` or ``file:<path>``."""
    if spec in ("dyadic", "uniform"):
        return PartitionScheme(spec, horizon)
    if spec.startswith("file:"):
        return PartitionScheme.from_file(spec[5:])
    raise PartitionError(f"unknown scheme {spec!r}")


def parse_levels(spec):
    """``a..b`` (inclusive) or a single integer."""
    spec = str(spec).strip()
    try:
        if ".." in spec:
            a, b = spec.split("..", 1)
            levels = list(range(int(a), int(b) + 1))
        else:
            levels = [int(spec)]
    except ValueError:
        raise PartitionError(f"bad level range {spec!r}") from None
    if not levels or levels[0] < 0:
        raise PartitionError(f"empty or negative level range {spec!r}")
    return levels
