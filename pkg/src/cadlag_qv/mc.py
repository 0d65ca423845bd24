"""
Seeded ensembles of sample paths and convergence-in-probability diagnostics.

Path ``i`` of an ensemble with base seed ``S`` is drawn from
``np.random.SeedSequence([S, i])``, so any path can be regenerated on its
own and results do not depend on evaluation order. Brownian components are
simulated on a grid two dyadic levels finer than the finest analysed
partition; jump times are continuous random variables and therefore miss
every dyadic point almost surely.
"""

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .measures import strictly_decaying
from .paths import CadlagPath, StepIncreasing, VectorCadlagPath, pointwise_combine
from .qv import q_n
from .skorokhod import j1_within, uniform_distance

KINDS = ("brownian", "poisson", "compound_poisson", "jump_diffusion", "white_noise", "zero")
SAMPLERS = ("const", "normal", "uniform", "exponential")


class ModelError(ValueError):
    pass


@dataclass(frozen=True)
class ProcessModel:
    """A one-dimensional process on ``[0, horizon]``.

    Parameters
    ----------
    kind : str
        One of ``brownian``, ``poisson``, ``compound_poisson``,
        ``jump_diffusion``, ``white_noise`` or ``zero``.
    sigma : float
        Diffusion coefficient (``brownian``, ``jump_diffusion``) or noise
        scale (``white_noise``).
    rate : float
        Jump intensity.
    jump : float
        Jump size (``sampler="const"``) or scale of the jump distribution.
    sampler : str
        Jump-size law: ``const``, ``normal`` (``N(0, jump^2)``), ``uniform``
        (on ``[-jump, jump]``) or ``exponential`` (mean ``jump``).
    resolution : int
        Simulation grid is ``2**-resolution``.
    """

    kind: str
    horizon: float = 1.0
    sigma: float = 1.0
    rate: float = 0.0
    jump: float = 1.0
    sampler: str = "const"
    resolution: int = 16

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ModelError(f"unknown model kind {self.kind!r}")
        if self.sigma < 0:
            raise ModelError("sigma must be non-negative")
        if self.rate < 0:
            raise ModelError("jump rate must be non-negative")
        if self.horizon <= 0:
            raise ModelError("horizon must be positive")
        if self.sampler not in SAMPLERS:
            raise ModelError(f"unknown jump sampler {self.sampler!r}")

    @property
    def continuous(self):
        return self.kind in ("brownian", "zero") or (self.kind == "jump_diffusion" and self.rate == 0)

    def check_levels(self, levels):
        """Analysed dyadic levels must stay two levels below the grid."""
        if self.kind in ("brownian", "jump_diffusion", "white_noise") and max(levels) + 2 > self.resolution:
            raise ModelError(f"resolution 2^-{self.resolution} too coarse for level {max(levels)}")


def parse_model(spec, horizon=1.0, resolution=None):
    """``kind:key=value,...``, e.g. ``brownian:sigma=1`` or ``poisson:lambda=2,jump=1``."""
    kind, _, rest = spec.partition(":")
    aliases = {"compound": "compound_poisson", "jd": "jump_diffusion"}
    kind = aliases.get(kind.strip(), kind.strip())
    kw = {}
    keys = {"sigma": "sigma", "lambda": "rate", "rate": "rate", "jump": "jump",
            "sampler": "sampler", "resolution": "resolution"}
    for item in filter(None, (s.strip() for s in rest.split(","))):
        k, eq, v = item.partition("=")
        if not eq or k.strip() not in keys:
            raise ModelError(f"bad model parameter {item!r}")
        name = keys[k.strip()]
        kw[name] = v.strip() if name == "sampler" else (int(v) if name == "resolution" else float(v))
    if kind == "poisson":
        kw.setdefault("sampler", "const")
    if resolution is not None:
        kw.setdefault("resolution", int(resolution))
    return ProcessModel(kind, horizon, **kw)


def _jump_sizes(model, rng, k):
    if model.sampler == "const":
        return np.full(k, model.jump)
    if model.sampler == "normal":
        return rng.normal(0.0, model.jump, k)
    if model.sampler == "uniform":
        return rng.uniform(-model.jump, model.jump, k)
    return rng.exponential(model.jump, k)


def _grid(model):
    n = int(math.ceil(model.horizon * 2 ** model.resolution))
    t = np.arange(n + 1, dtype=float) / 2 ** model.resolution
    t[-1] = model.horizon
    return t


def _brownian(model, rng):
    t = _grid(model)
    if model.sigma == 0:
        return CadlagPath.zero(model.horizon)
    dw = rng.normal(0.0, 1.0, t.size - 1) * model.sigma * np.sqrt(np.diff(t))
    return CadlagPath.from_samples(t, np.concatenate([[0.0], np.cumsum(dw)]), model.horizon)


def _jumps(model, rng):
    if model.rate == 0:
        return CadlagPath.zero(model.horizon)
    times = []
    s = rng.exponential(1.0 / model.rate)
    while s <= model.horizon:
        times.append(s)
        s += rng.exponential(1.0 / model.rate)
    sizes = _jump_sizes(model, rng, len(times))
    return CadlagPath.step([(a, b) for a, b in zip(times, sizes) if b != 0], model.horizon)


def sample_path(model, seed):
    """One realisation; ``seed`` is an int or a ``SeedSequence``."""
    rng = np.random.default_rng(seed)
    if model.kind == "zero":
        return CadlagPath.zero(model.horizon)
    if model.kind == "brownian":
        return _brownian(model, rng)
    if model.kind in ("poisson", "compound_poisson"):
        return _jumps(model, rng)
    if model.kind == "jump_diffusion":
        w = _brownian(model, rng)
        return pointwise_combine(w, _jumps(model, rng), (1.0, 1.0))
    t = _grid(model)
    v = np.concatenate([[0.0], rng.normal(0.0, model.sigma, t.size - 1)])
    return CadlagPath.from_samples(t, v, model.horizon)


def qv_target(model, path):
    """Known quadratic variation of a sampled path (``None`` when it has none)."""
    H = model.horizon
    if model.kind == "white_noise":
        return None
    jumps = StepIncreasing.from_atoms(path.jump_times, path.jump_sizes ** 2, H)
    if model.kind in ("brownian", "jump_diffusion") and model.sigma > 0:
        t = _grid(model)
        cont = CadlagPath.from_samples(t, model.sigma ** 2 * t, H)
        return StepIncreasing(*_knots(pointwise_combine(cont, jumps, (1.0, 1.0))), H)
    return jumps


def _knots(path):
    return path.knot_times, path.knot_values


@dataclass(frozen=True)
class VectorModel:
    """Components are models or an int ``k`` meaning "a copy of component ``k``"."""

    components: tuple

    def __post_init__(self):
        comps = tuple(self.components)
        for i, c in enumerate(comps):
            if isinstance(c, int) and not 0 <= c < i:
                raise ModelError(f"component {i} copies unknown component {c}")
        if isinstance(comps[0], int):
            raise ModelError("first component must be a model")
        object.__setattr__(self, "components", comps)

    @property
    def horizon(self):
        return self.components[0].horizon

    @property
    def dimension(self):
        return len(self.components)

    def check_levels(self, levels):
        for c in self.components:
            if not isinstance(c, int):
                c.check_levels(levels)


def sample_vector_path(model, seed):
    seeds = np.random.SeedSequence(seed).spawn(model.dimension) if not isinstance(
        seed, np.random.SeedSequence) else seed.spawn(model.dimension)
    out = []
    for c, s in zip(model.components, seeds):
        out.append(out[c] if isinstance(c, int) else sample_path(c, s))
    return VectorCadlagPath(tuple(out))


@dataclass(frozen=True)
class Ensemble:
    model: object
    n_paths: int
    seed: int

    def __post_init__(self):
        if self.n_paths < 1:
            raise ModelError("an ensemble needs at least one path")

    def seed_of(self, i):
        return np.random.SeedSequence([int(self.seed), int(i)])

    def path(self, i):
        if isinstance(self.model, VectorModel):
            return sample_vector_path(self.model, self.seed_of(i))
        return sample_path(self.model, self.seed_of(i))

    def target(self, i, path=None):
        return qv_target(self.model, self.path(i) if path is None else path)


def _threads():
    try:
        return max(1, int(os.environ.get("CADLAG_QV_THREADS", "1")))
    except ValueError:
        return 1


def _map(fn, n):
    k = _threads()
    if k == 1:
        return [fn(i) for i in range(n)]
    with ThreadPoolExecutor(max_workers=k) as pool:
        return list(pool.map(fn, range(n)))


def _exceeds(a, b, eps, metric, T):
    if metric == "uniform":
        return uniform_distance(a, b, T) > eps
    if metric == "j1":
        return not j1_within(a, b, eps, T)
    raise ValueError(f"unknown metric {metric!r}")


def _fraction_passes(fr, delta):
    return strictly_decaying(fr, delta)


@dataclass
class FractionReport:
    levels: list
    fractions: list
    eps: float
    delta: float
    metric: str
    passed: bool
    extra: dict = field(default_factory=dict)

    def to_dict(self):
        out = {"levels": self.levels, "fractions": self.fractions, "eps": self.eps,
               "delta": self.delta, "metric": self.metric, "passed": self.passed}
        out.update(self.extra)
        return out


def cauchy_in_probability(e, scheme, levels, eps, delta=0.05, metric="j1"):
    """Fraction of paths with ``d(q_n, q_{n+1}) > eps`` for consecutive levels.

    Passes when the last fraction is ``<= delta`` and the last three are
    non-increasing. ``levels[k]`` labels the pair ``(levels[k], levels[k+1])``.
    """
    levels = list(levels)
    if len(levels) < 4:
        raise ValueError("need at least 4 levels (3 consecutive pairs)")
    e.model.check_levels(levels)
    parts = [scheme.generate(n) for n in levels]
    T = e.model.horizon

    def one(i):
        x = e.path(i)
        qs = [q_n(x, p) for p in parts]
        vals = [q.evaluate(T) for q in qs]
        return [_exceeds(a, b, eps, metric, T) for a, b in zip(qs[:-1], qs[1:])], vals

    rows = _map(one, e.n_paths)
    flags = np.array([r[0] for r in rows], dtype=bool)
    values = np.array([r[1] for r in rows])
    fr = flags.mean(axis=0).tolist()
    return FractionReport(levels[:-1], fr, eps, delta, metric, _fraction_passes(fr, delta),
                          {"pairs": [[a, b] for a, b in zip(levels[:-1], levels[1:])],
                           "mean_q_at_horizon": values.mean(axis=0).tolist()})


def prob_convergence_estimate(e, scheme, levels, eps, target=None, metric="j1", delta=0.05):
    """Fraction of paths with ``d(q_n, target) > eps`` per level.

    ``target(i, path)`` returns the known quadratic variation of path ``i``;
    it defaults to the model's own target.
    """
    levels = list(levels)
    e.model.check_levels(levels)
    parts = [scheme.generate(n) for n in levels]
    T = e.model.horizon
    target = e.target if target is None else target

    def one(i):
        x = e.path(i)
        ref = target(i, x)
        if ref is None:
            raise ValueError("model has no quadratic-variation target")
        return [_exceeds(q_n(x, p), ref, eps, metric, T) for p in parts]

    fr = np.array(_map(one, e.n_paths), dtype=bool).mean(axis=0).tolist()
    return FractionReport(levels, fr, eps, delta, metric, _fraction_passes(fr, delta))


@dataclass
class UCPReport:
    levels: list
    uniform: list
    j1: list
    verdict: str

    def to_dict(self):
        return dict(self.__dict__)


def ucp_vs_j1(e, scheme, levels, eps, delta=0.05):
    """``"UCP"``, ``"J1-only"`` or ``"neither"`` from per-level fractions to the target."""
    levels = list(levels)
    e.model.check_levels(levels)
    parts = [scheme.generate(n) for n in levels]
    T = e.model.horizon

    def one(i):
        x = e.path(i)
        ref = e.target(i, x)
        if ref is None:
            raise ValueError("model has no quadratic-variation target")
        uni, j1 = [], []
        for p in parts:
            q = q_n(x, p)
            far = uniform_distance(q, ref, T) > eps
            uni.append(far)
            # d_J1 <= d_uniform, so only uniform misses need the J1 check
            j1.append(far and not j1_within(q, ref, eps, T))
        return uni, j1

    rows = _map(one, e.n_paths)
    uni = np.array([r[0] for r in rows]).mean(axis=0).tolist()
    j1 = np.array([r[1] for r in rows]).mean(axis=0).tolist()
    if _fraction_passes(uni, delta):
        verdict = "UCP"
    elif _fraction_passes(j1, delta):
        verdict = "J1-only"
    else:
        verdict = "neither"
    return UCPReport(levels, uni, j1, verdict)


@dataclass
class ComponentwiseReport:
    levels: list
    entries: list       # [{"entry": [i, j], "fractions": [...], "passed": bool}]
    passed: bool

    def to_dict(self):
        return dict(self.__dict__)


def componentwise_reduction(e, scheme, levels, eps, delta=0.05, metric="j1"):
    """Entrywise Cauchy-in-probability test of the matrix ``q_n``."""
    from .multidim import matrix_q_n

    if not isinstance(e.model, VectorModel) or e.model.dimension < 2:
        raise ValueError("componentwise reduction needs a vector model of dimension >= 2")
    levels = list(levels)
    e.model.check_levels(levels)
    parts = [scheme.generate(n) for n in levels]
    T = e.model.horizon
    m = e.model.dimension
    pairs = [(i, j) for i in range(m) for j in range(i, m)]

    def one(k):
        x = e.path(k)
        mats = [matrix_q_n(x, p) for p in parts]
        return [[_exceeds(a[i, j], b[i, j], eps, metric, T) for a, b in zip(mats[:-1], mats[1:])]
                for i, j in pairs]

    flags = np.array(_map(one, e.n_paths), dtype=bool)   # (paths, entries, pairs)
    fr = flags.mean(axis=0)
    entries = [{"entry": [i, j], "fractions": fr[k].tolist(), "passed": _fraction_passes(fr[k], delta)}
               for k, (i, j) in enumerate(pairs)]
    return ComponentwiseReport(levels[:-1], entries, all(x["passed"] for x in entries))
