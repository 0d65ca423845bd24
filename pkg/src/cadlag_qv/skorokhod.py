"""
Skorokhod J1 distances between càdlàg step functions.

For step functions ``x`` (breakpoints ``s_1 < ... < s_K``, values
``X_0, ..., X_K``) and ``y`` (breakpoints ``r_1 < ... < r_L``, values
``Y_0, ..., Y_L``) on ``[0, T]``, the distance

    d(x, y) = inf_lambda max(||lambda - id||, sup_t |x(lambda(t)) - y(t)|)

is decided for a given ``eps`` by a sweep over the constant segments of
``y``: composing with a time change only relocates the jumps of ``x`` to times
``u_i`` with ``|u_i - s_i| <= eps`` (order preserved), so a feasible
``lambda`` is a monotone lattice path through cells ``(a, b)`` (x-index,
y-segment) with ``|X_a - Y_b| <= eps``. An x-jump may also coincide with a
y-jump (diagonal move). The infimum is attained in the closure of this
problem, and its value is one of finitely many critical gaps (time gaps
``|s_i - r_j|``, boundary gaps, value gaps ``|X_a - Y_b|``); bisection
followed by snapping to the critical set returns it exactly.

When ``x`` is monotone, every reachable set is an index interval and a
feasibility test costs ``O((K + L) log K)``; otherwise a banded scan is used.
"""

from dataclasses import dataclass

import numpy as np
from numba import njit

from .paths import CadlagPath, DomainError
from .measures import gaps_decay


# --------------------------------------------------------------------- time change

@dataclass(frozen=True)
class TimeChange:
    """Piecewise-linear increasing bijection of ``[0, T]`` through anchors.

    ``lambda(domain[k]) = image[k]``; both arrays start at 0, end at ``T``
    and are strictly increasing.
    """

    domain: np.ndarray
    image: np.ndarray

    def __post_init__(self):
        d = np.asarray(self.domain, dtype=float)
        im = np.asarray(self.image, dtype=float)
        if d.shape != im.shape or d.size < 2:
            raise ValueError("anchor arrays must match and hold at least two points")
        if d[0] != 0 or im[0] != 0 or d[-1] != im[-1]:
            raise ValueError("time change must fix 0 and T")
        if np.any(np.diff(d) <= 0) or np.any(np.diff(im) <= 0):
            raise ValueError("time change must be strictly increasing")
        object.__setattr__(self, "domain", d)
        object.__setattr__(self, "image", im)

    @classmethod
    def identity(cls, T):
        return cls(np.array([0.0, T]), np.array([0.0, T]))

    @property
    def horizon(self):
        return float(self.domain[-1])

    def __call__(self, t):
        return np.interp(t, self.domain, self.image)

    def inverse(self, t):
        return np.interp(t, self.image, self.domain)

    def sup_distance_to_identity(self):
        return float(np.max(np.abs(self.image - self.domain)))

    def anchors(self):
        return list(zip(self.domain.tolist(), self.image.tolist()))


# ----------------------------------------------------------------- step views

def _step_view(path, T):
    if T > path.horizon:
        raise DomainError(f"T={T!r} beyond path horizon {path.horizon!r}")
    x0, s, xv = path.step_breakpoints()
    keep = s <= T
    X = np.concatenate([[x0], xv[keep]])
    return X, np.ascontiguousarray(s[keep])


def uniform_distance(x, y, T=None):
    """``sup_{t <= T} |x(t) - y(t)|``, exact for step paths."""
    T = min(x.horizon, y.horizon) if T is None else float(T)
    t = np.union1d(x.times, y.times)
    t = t[t <= T]
    return float(np.max(np.abs(x._value_at(t) - y._value_at(t))))


def _monotone(X):
    d = np.diff(X)
    if np.all(d >= 0):
        return 1
    if np.all(d <= 0):
        return -1
    return 0


# ------------------------------------------------------------------------ kernels

@njit(cache=True, nogil=True)
def _windows(s, T, eps):
    K = s.size
    wl = np.empty(K)
    wr = np.empty(K)
    for i in range(K):
        if s[i] >= T:
            wl[i] = T
            wr[i] = T
        else:
            wl[i] = max(s[i] - eps, 0.0)
            wr[i] = min(s[i] + eps, T)
    return wl, wr


@njit(cache=True, nogil=True)
def _value_band(Xs, Yb, eps):
    # indices a with |Xs[a] - Yb| <= eps for increasing Xs
    K1 = Xs.size
    lo = np.searchsorted(Xs, Yb - eps)
    hi = np.searchsorted(Xs, Yb + eps, side="right") - 1
    while lo > 0 and abs(Xs[lo - 1] - Yb) <= eps:
        lo -= 1
    while lo < K1 and abs(Xs[lo] - Yb) > eps:
        lo += 1
    while hi < K1 - 1 and abs(Xs[hi + 1] - Yb) <= eps:
        hi += 1
    while hi >= 0 and abs(Xs[hi] - Yb) > eps:
        hi -= 1
    return lo, hi


@njit(cache=True, nogil=True)
def _mono_reach(X, s, Y, r, T, eps, sign):
    """Interval-valued sweep for monotone X. Returns (ok, tables)."""
    K = s.size
    L = r.size
    wl, wr = _windows(s, T, eps)
    Xs = X * sign
    p = np.full(L + 1, -1, dtype=np.int64)
    q = np.full(L + 1, -1, dtype=np.int64)
    v0 = np.full(L + 1, 0, dtype=np.int64)
    v1 = np.full(L + 1, -1, dtype=np.int64)
    dl = np.full(L + 1, 1, dtype=np.int64)
    dh = np.full(L + 1, 0, dtype=np.int64)
    for b in range(L + 1):
        Rb = 0.0 if b == 0 else r[b - 1]
        Rn = T if b == L else r[b]
        hi_t = np.searchsorted(wl, Rn, side="right")
        lo_t = np.searchsorted(wr, Rb)
        lo_v, hi_v = _value_band(Xs, Y[b] * sign, eps)
        a0 = max(lo_t, lo_v)
        a1 = min(hi_t, hi_v)
        v0[b] = a0
        v1[b] = a1
        if a0 > a1:
            return False, p, q, v0, v1, dl, dh
        if b == 0:
            if a0 != 0:
                return False, p, q, v0, v1, dl, dh
            p[0] = 0
            q[0] = a1
            continue
        pp = p[b - 1]
        qq = q[b - 1]
        big = K + 10
        e = big
        c0 = max(pp, a0)
        c1 = min(qq, a1)
        if c0 <= c1:
            e = c0
        dlo = lo_t + 1
        dhi = np.searchsorted(wl, Rb, side="right")
        if b == L and Rb >= T and s[K - 1] < T:
            # only a jump of x sitting at T can meet a jump of y at T
            dhi = min(dhi, K - 1)
        dl[b] = dlo
        dh[b] = dhi
        d0 = max(max(pp + 1, a0), dlo)
        d1 = min(min(qq + 1, a1), dhi)
        if d0 <= d1 and d0 < e:
            e = d0
        if e == big:
            return False, p, q, v0, v1, dl, dh
        if b == L and Rb >= T:
            # point segment at T: no room for in-segment moves
            if (c0 <= K <= c1) or (d0 <= K <= d1):
                p[b] = K
                q[b] = K
            else:
                return False, p, q, v0, v1, dl, dh
        else:
            p[b] = e
            q[b] = a1
    ok = p[L] <= K <= q[L]
    return ok, p, q, v0, v1, dl, dh


@njit(cache=True, nogil=True)
def _general_bounds(s, r, T, eps):
    K = s.size
    L = r.size
    wl, wr = _windows(s, T, eps)
    lo = np.empty(L + 1, dtype=np.int64)
    hi = np.empty(L + 1, dtype=np.int64)
    for b in range(L + 1):
        Rb = 0.0 if b == 0 else r[b - 1]
        Rn = T if b == L else r[b]
        hi[b] = np.searchsorted(wl, Rn, side="right")
        lo[b] = np.searchsorted(wr, Rb)
    return wl, wr, lo, hi


@njit(cache=True, nogil=True)
def _general_reach(X, s, Y, r, T, eps, record):
    """Banded boolean sweep for arbitrary X."""
    K = s.size
    L = r.size
    wl, wr, lo, hi = _general_bounds(s, r, T, eps)
    offs = np.zeros(L + 2, dtype=np.int64)
    if record:
        for b in range(L + 1):
            offs[b + 1] = offs[b] + max(hi[b] - lo[b] + 1, 0)
    table = np.zeros(offs[L + 1] if record else 0, dtype=np.bool_)
    prev = np.zeros(K + 1, dtype=np.bool_)
    cur = np.zeros(K + 1, dtype=np.bool_)
    plo = 0
    phi = -1
    for b in range(L + 1):
        Rb = 0.0 if b == 0 else r[b - 1]
        point = b == L and b > 0 and Rb >= T
        any_true = False
        for a in range(lo[b], hi[b] + 1):
            ok = abs(X[a] - Y[b]) <= eps
            if ok:
                if b == 0:
                    ent = a == 0
                else:
                    ent = prev[a] or (a >= 1 and prev[a - 1] and wl[a - 1] <= Rb and Rb <= wr[a - 1]
                                      and (not point or s[a - 1] >= T))
                if point:
                    ok = ent and a == K
                else:
                    ok = ent or (a > lo[b] and cur[a - 1])
            cur[a] = ok
            if ok:
                any_true = True
            if record:
                table[offs[b] + a - lo[b]] = ok
        for a in range(plo, phi + 1):
            prev[a] = False
        prev, cur = cur, prev
        plo = lo[b]
        phi = hi[b]
        if not any_true:
            return False, table, offs, lo, hi
    ok = plo <= K <= phi and prev[K]
    return ok, table, offs, lo, hi


# --------------------------------------------------------------- solver object

class _Problem:
    """Step data of one ``(x, y, T)`` instance plus its feasibility oracle."""

    def __init__(self, x, y, T):
        self.T = float(T)
        self.X, self.s = _step_view(x, self.T)
        self.Y, self.r = _step_view(y, self.T)
        self.sign = _monotone(self.X)

    @property
    def lower_bound(self):
        return max(abs(self.X[0] - self.Y[0]), abs(self.X[-1] - self.Y[-1]))

    def feasible(self, eps):
        if eps < self.lower_bound:
            return False
        if self.sign != 0:
            return bool(_mono_reach(self.X, self.s, self.Y, self.r, self.T, eps, self.sign)[0])
        return bool(_general_reach(self.X, self.s, self.Y, self.r, self.T, eps, False)[0])

    def critical_values(self, lo, hi):
        """Critical gaps in ``[lo, hi]``, ascending."""
        out = []
        s, r, T = self.s, self.r, self.T
        if s.size:
            out.append(s[(s >= lo) & (s <= hi)])
            out.append((T - s)[(T - s >= lo) & (T - s <= hi)])
            if r.size:
                for sign in (1.0, -1.0):
                    a = np.searchsorted(r, s + sign * lo if sign > 0 else s - hi)
                    b = np.searchsorted(r, s + sign * hi if sign > 0 else s - lo, side="right")
                    cnt = b - a
                    if cnt.sum():
                        i = np.repeat(np.arange(s.size), cnt)
                        j = np.concatenate([np.arange(a[k], b[k]) for k in np.flatnonzero(cnt)])
                        out.append(np.abs(r[j] - s[i]))
        Ys = np.sort(self.Y)
        a = np.searchsorted(Ys, self.X + lo)
        b = np.searchsorted(Ys, self.X + hi, side="right")
        c = np.searchsorted(Ys, self.X - hi)
        d = np.searchsorted(Ys, self.X - lo, side="right")
        for start, stop in ((a, b), (c, d)):
            cnt = stop - start
            if cnt.sum():
                i = np.repeat(np.arange(self.X.size), cnt)
                j = np.concatenate([np.arange(start[k], stop[k]) for k in np.flatnonzero(cnt)])
                out.append(np.abs(Ys[j] - self.X[i]))
        vals = np.concatenate(out) if out else np.empty(0)
        vals = vals[(vals >= lo) & (vals <= hi)]
        return np.unique(vals)

    def solve(self, hi=None, rtol=1e-13):
        lo = self.lower_bound
        if self.feasible(lo):
            return float(lo)
        if hi is None:
            hi = self.uniform()
        while not self.feasible(hi):  # guards against rounding in the uniform bound
            hi = hi * (1 + 1e-12) + 1e-300
        while hi - lo > rtol * max(1.0, hi):
            mid = 0.5 * (lo + hi)
            if self.feasible(mid):
                hi = mid
            else:
                lo = mid
        for c in self.critical_values(lo, hi):
            if self.feasible(c):
                return float(c)
        return float(hi)

    def uniform(self):
        t = np.union1d(self.s, self.r)
        t = np.concatenate([[0.0], t])
        xi = np.searchsorted(self.s, t, side="right")
        yi = np.searchsorted(self.r, t, side="right")
        return float(np.max(np.abs(self.X[xi] - self.Y[yi])))

    # ----------------------------------------------------------------- witness

    def witness(self, eps):
        """A strictly increasing time change achieving ``eps`` up to rounding."""
        X, s, Y, r, T = self.X, self.s, self.Y, self.r, self.T
        K, L = s.size, r.size
        wl, wr = _windows(s, T, eps)
        if self.sign != 0:
            ok, p, q, v0, v1, dl, dh = _mono_reach(X, s, Y, r, T, eps, self.sign)

            def reach(b, a):
                return p[b] <= a <= q[b]

            def entry(b, a):
                if b == 0:
                    return "start" if a == 0 else None
                if not v0[b] <= a <= v1[b]:
                    return None
                if p[b - 1] <= a <= q[b - 1]:
                    return "carry"
                if p[b - 1] + 1 <= a <= q[b - 1] + 1 and dl[b] <= a <= dh[b]:
                    return "diag"
                return None
        else:
            ok, table, offs, lo, hi = _general_reach(X, s, Y, r, T, eps, True)

            def reach(b, a):
                return lo[b] <= a <= hi[b] and bool(table[offs[b] + a - lo[b]])

            def entry(b, a):
                if b == 0:
                    return "start" if a == 0 else None
                if abs(X[a] - Y[b]) > eps:
                    return None
                if reach(b - 1, a):
                    return "carry"
                Rb = r[b - 1]
                if b == L and Rb >= T and s[a - 1] < T:
                    return None
                if a >= 1 and reach(b - 1, a - 1) and wl[a - 1] <= Rb <= wr[a - 1]:
                    return "diag"
                return None
        if not ok:
            raise ValueError(f"eps={eps!r} is not feasible")

        u = np.empty(K)
        seg = np.empty(K, dtype=np.int64)
        diag = np.zeros(K, dtype=bool)
        a = K
        for b in range(L, -1, -1):
            Rb = 0.0 if b == 0 else r[b - 1]
            top = a
            kind = entry(b, a)
            while kind is None:
                a -= 1
                kind = entry(b, a)
            for i in range(a + 1, top + 1):
                u[i - 1] = max(Rb, wl[i - 1])
                seg[i - 1] = b
            if kind == "start":
                break
            if kind == "diag":
                u[a - 1] = Rb
                seg[a - 1] = b
                diag[a - 1] = True
                a -= 1
        return self._strict_time_change(u, seg, diag)

    def _strict_time_change(self, u, seg, diag):
        """Spread tied relocation times while keeping the lattice order.

        Moves booked in the segment before a y-jump at ``tau`` go just below
        ``tau``, a diagonal move stays at ``tau`` and later moves go just
        above it; the extra time cost is a few ``delta``.
        """
        s, r, T = self.s, self.r, self.T
        K = s.size
        if K == 0:
            return TimeChange.identity(T)
        pts = np.unique(np.concatenate([[0.0, T], u, r]))
        gap = np.min(np.diff(pts)) if pts.size > 1 else T
        delta = min(1e-12 * max(T, 1.0), 1e-3 * gap / (K + 2))
        rpos = {float(v): c + 1 for c, v in enumerate(r)}
        v = u.copy()
        i = 0
        while i < K:
            j = i
            while j + 1 < K and u[j + 1] == u[i]:
                j += 1
            tau = float(u[i])
            block = list(range(i, j + 1))
            if tau >= T:
                pinned = s[j] >= T
                for m, k in enumerate(reversed(block)):
                    v[k] = T - (m + (0 if pinned else 1)) * delta
            elif tau in rpos:
                c = rpos[tau]
                before = [k for k in block if seg[k] < c]
                after = [k for k in block if seg[k] >= c and not diag[k]]
                for m, k in enumerate(reversed(before)):
                    v[k] = tau - (m + 1) * delta
                for m, k in enumerate(after):
                    v[k] = tau + (m + 1) * delta
            else:
                lift = 0 if tau > 0 else 1
                for m, k in enumerate(block):
                    v[k] = tau + (m + lift) * delta
            i = j + 1
        keep = s < T
        dom = np.concatenate([[0.0], v[keep], [T]])
        img = np.concatenate([[0.0], s[keep], [T]])
        return TimeChange(dom, img)


# ------------------------------------------------------------------ public API

def j1_distance_compact(x, y, T=None, with_witness=True):
    """Exact J1 distance on ``[0, T]`` and a witnessing time change.

    ``x`` and ``y`` are interpreted as step functions (their knot values,
    held constant between knots).
    """
    T = min(x.horizon, y.horizon) if T is None else float(T)
    prob = _Problem(x, y, T)
    d = prob.solve()
    if not with_witness:
        return d, None
    return d, prob.witness(d)


def j1_within(x, y, eps, T=None):
    """``True`` iff the J1 distance on ``[0, T]`` is at most ``eps``."""
    T = min(x.horizon, y.horizon) if T is None else float(T)
    prob = _Problem(x, y, T)
    if eps < prob.lower_bound:
        return False
    if prob.uniform() <= eps:
        return True
    return prob.feasible(eps)


def j1_objective(x, y, lam):
    """``max(||lambda - id||, sup_t |x(lambda(t)) - y(t)|)`` for a given time change."""
    T = lam.horizon
    X, s = _step_view(x, T)
    Y, r = _step_view(y, T)
    moved = lam.inverse(s)
    t = np.unique(np.concatenate([[0.0], moved, r]))
    xi = np.searchsorted(moved, t, side="right")
    yi = np.searchsorted(r, t, side="right")
    value = float(np.max(np.abs(X[xi] - Y[yi])))
    return max(lam.sup_distance_to_identity(), value)


def j1_distance_halfline(x, y, eps_h=1e-6):
    """``sum_k 2^-k min(1, d_{T_k}(x, y))`` over integer horizons ``T_k <= H``.

    ``T_k = k`` unless either path has a jump within ``eps_h`` of ``k``, in
    which case ``T_k = k - eps_h``.
    """
    H = min(x.horizon, y.horizon)
    jumps = np.union1d(_step_view(x, H)[1], _step_view(y, H)[1])
    total = 0.0
    for k in range(1, int(np.floor(H)) + 1):
        Tk = float(k)
        if jumps.size and np.min(np.abs(jumps - k)) <= eps_h:
            Tk = k - eps_h
        d, _ = j1_distance_compact(x.restrict(Tk), y.restrict(Tk), Tk, with_witness=False)
        total += 2.0 ** -k * min(1.0, d)
    return total


# ------------------------------------------------------------------ grid oracle

@njit(cache=True, nogil=True)
def _frechet_grid(xg, yg, g):
    M = g.size
    F = np.empty((M, M))
    for i in range(M):
        for j in range(M):
            if (i == M - 1) != (j == M - 1):
                # lambda maps [0, T) onto [0, T): the endpoint only pairs with itself
                F[i, j] = np.inf
                continue
            c = max(abs(g[i] - g[j]), abs(xg[i] - yg[j]))
            if i == 0 and j == 0:
                best = c
            else:
                m = np.inf
                if i > 0:
                    m = min(m, F[i - 1, j])
                if j > 0:
                    m = min(m, F[i, j - 1])
                if i > 0 and j > 0:
                    m = min(m, F[i - 1, j - 1])
                best = max(c, m)
            F[i, j] = best
    return F[M - 1, M - 1]


def j1_distance_grid_oracle(x, y, T=None, step=1e-3):
    """Brute-force J1 over time changes restricted to a uniform time grid.

    Couples grid times ``g_i`` (for ``x``) and ``g_j`` (for ``y``) along every
    monotone lattice path from ``(0, 0)`` to ``(T, T)`` and minimises the
    largest ``max(|g_i - g_j|, |x(g_i) - y(g_j)|)``. The result is within
    ``2 * step`` of the exact distance.
    """
    T = min(x.horizon, y.horizon) if T is None else float(T)
    M = int(round(T / step))
    g = np.linspace(0.0, T, M + 1)
    return float(_frechet_grid(x._value_at(g), y._value_at(g), g))


# -------------------------------------------------------------- classification

def distance_table(seq, candidate, T=None):
    """Uniform and J1 distances of each element of ``seq`` to ``candidate``."""
    T = candidate.horizon if T is None else T
    uni = np.array([uniform_distance(q, candidate, T) for q in seq])
    j1 = np.array([j1_distance_compact(q, candidate, T, with_witness=False)[0] for q in seq])
    return uni, j1


def classify_convergence_mode(seq, candidate, T=None, tol=1e-3, distances=None):
    """``"uniform"``, ``"j1"`` or ``"divergent"`` for a sequence of paths.

    A metric counts as converging when its distances to ``candidate`` over
    the last three elements are ``<= tol`` (see :func:`gaps_decay`).
    """
    if len(seq) < 3:
        raise ValueError("need at least 3 elements")
    uni, j1 = distance_table(seq, candidate, T) if distances is None else distances
    if gaps_decay(uni, tol):
        return "uniform"
    if gaps_decay(j1, tol):
        return "j1"
    return "divergent"


@dataclass
class OneSidedReport:
    case: str
    levels: list
    t_n: list
    observed: list
    expected: float
    gaps: list
    passed: bool

    def to_dict(self):
        return dict(self.__dict__)


ONE_SIDED_CASES = {
    # case: (how t_n relates to t'_n, evaluate left limit?, compares with [x](t-)?)
    "le": ("t_n = t'_n", True, True),
    "lt": ("t_n = predecessor(t'_n)", False, True),
    "ge": ("t_n = t'_n", False, False),
    "gt": ("t_n = successor(t'_n)", True, False),
}


def _left_value(path, t):
    return 0.0 if t <= 0 else path.left_limit(t)


def one_sided_limit_check(x, scheme, t, levels, which, limit, tol=1e-9):
    """Observed ``q_n(t_n)`` or ``q_n(t_n-)`` against ``[x](t-)`` / ``[x](t)``.

    ``which`` selects one of the four cases ``le``, ``lt``, ``ge``, ``gt``
    (``t_n <= t'_n``, ``t_n < t'_n``, ``t_n >= t'_n``, ``t_n > t'_n``) where
    ``t'_n`` is the last partition point strictly before ``t``. ``limit`` is
    the quadratic variation estimate ``[x]``.
    """
    from .qv import q_n

    if which not in ONE_SIDED_CASES:
        raise ValueError(f"unknown case {which!r}")
    _, use_left, want_left = ONE_SIDED_CASES[which]
    expected = _left_value(limit, t) if want_left else limit.evaluate(t)
    tn, obs = [], []
    for n in levels:
        p = scheme.generate(n)
        tp = p.last_strictly_before(t)
        if which == "lt":
            tp = p.predecessor(tp)
        elif which == "gt":
            tp = p.successor(tp)
        q = q_n(x, p)
        tn.append(float(tp))
        obs.append(_left_value(q, tp) if use_left else q.evaluate(tp))
    gaps = [abs(o - expected) for o in obs]
    passed = bool(max(gaps[-3:]) <= tol)
    return OneSidedReport(which, list(levels), tn, obs, float(expected), gaps, passed)


def jump_carriers(x, scheme, t, levels, mass, window, atol=1e-9):
    """Partition points near ``t`` whose ``q_n`` jump matches ``mass``.

    For each level, lists every partition point ``p`` in ``[t - window,
    t + window]`` with ``|Delta q_n(p) - mass| <= atol``, together with the
    first such point ``p`` where ``q_n(p-)`` already carries the mass. The
    expected answers are ``[t'_n]`` and ``successor(t'_n)``.
    """
    from .qv import q_n

    rows = []
    for n in levels:
        p = scheme.generate(n)
        q = q_n(x, p)
        pts = p.points[(p.points >= t - window) & (p.points <= t + window)]
        left = np.array([_left_value(q, v) for v in pts])
        val = q.evaluate(pts)
        carriers = pts[np.abs(val - left - mass) <= atol].tolist()
        before = q.evaluate(max(t - window, 0.0))
        first = pts[np.abs(left - before - mass) <= atol]
        tp = p.last_strictly_before(t)
        rows.append({"level": n, "t_prime": tp, "successor": p.successor(tp),
                     "carriers": carriers,
                     "first_left_match": float(first[0]) if first.size else None})
    return rows


@dataclass
class FunctionalReport:
    values: list
    candidate_value: float
    gaps: list

    def to_dict(self):
        return dict(self.__dict__)


def functional_limit(F, seq, candidate):
    """Tabulate ``F(q_n)`` against ``F(candidate)``."""
    vals = [float(F(q)) for q in seq]
    ref = float(F(candidate))
    return FunctionalReport(vals, ref, [abs(v - ref) for v in vals])
