import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from cadlag_qv import (CadlagPath, PartitionScheme, StepIncreasing, TimeChange,
                       classify_convergence_mode, j1_distance_compact, j1_distance_halfline,
                       j1_within, q_n, uniform_distance)
from cadlag_qv.skorokhod import (functional_limit, j1_distance_grid_oracle, j1_objective,
                                 jump_carriers, one_sided_limit_check)

from conftest import T0, random_step

a03 = CadlagPath.step([(0.3, 1.0)], 1.0)
a04 = CadlagPath.step([(0.4, 1.0)], 1.0)


def test_hand_cases():
    d, lam = j1_distance_compact(a03, a03)
    assert d == 0.0 and lam.sup_distance_to_identity() == 0.0
    d, lam = j1_distance_compact(a03, a04)
    assert d == pytest.approx(0.1, abs=1e-9)
    assert j1_objective(a03, a04, lam) == pytest.approx(0.1, abs=1e-9)
    d, _ = j1_distance_compact(a03, CadlagPath.step([(0.3, 3.0)], 1.0))
    assert d == 2.0


def test_uniform_distance():
    assert uniform_distance(a03, a03) == 0.0
    assert uniform_distance(a03, a04) == 1.0
    shifted = CadlagPath(a03.knot_times, a03.knot_values + 2.5, 1.0)
    assert uniform_distance(a03, shifted) == 2.5


def test_matching_jump_far_away_costs_the_time_gap():
    b = CadlagPath.step([(0.9, 1.0)], 1.0)
    assert j1_distance_compact(a03, b, with_witness=False)[0] == pytest.approx(0.6)
    # terminal values differ by 0.8, which no time change can hide
    small = CadlagPath.step([(0.9, 0.2)], 1.0)
    assert j1_distance_compact(a03, small, with_witness=False)[0] == pytest.approx(0.8)


def test_jump_at_horizon_cannot_move():
    x = CadlagPath.step([(1.0, 1.0)], 1.0)
    y = CadlagPath.step([(0.95, 1.0)], 1.0)
    assert j1_distance_compact(x, y, with_witness=False)[0] == pytest.approx(1.0)
    assert j1_distance_compact(y, x, with_witness=False)[0] == pytest.approx(1.0)


def test_halfline():
    assert j1_distance_halfline(a03, a03) == 0.0
    assert j1_distance_halfline(a03, a04) == pytest.approx(0.05)
    x = CadlagPath.zero(2.0)
    y = CadlagPath.step([(1.0, 1.0)], 2.0)
    assert j1_distance_halfline(x, y) == pytest.approx(0.25)


def test_time_change():
    lam = TimeChange([0, 0.5, 1], [0, 0.4, 1])
    assert lam(0.5) == 0.4
    assert lam.inverse(0.4) == 0.5
    assert lam.sup_distance_to_identity() == pytest.approx(0.1)
    with pytest.raises(ValueError):
        TimeChange([0, 0.5, 1], [0, 0.6, 0.5])
    with pytest.raises(ValueError):
        TimeChange([0, 1], [0, 0.9])


def test_classify(remark, linear, dyadic):
    lines = [q_n(linear, dyadic.generate(n)) for n in range(10, 14)]
    zero = StepIncreasing.from_atoms([], [], 1.0)
    assert classify_convergence_mode(lines, zero) == "uniform"
    qs = [q_n(remark, dyadic.generate(n)) for n in range(8, 14)]
    target = StepIncreasing.from_atoms([T0], [1.0], 1.0)
    assert classify_convergence_mode(qs, target, tol=0.01) == "j1"
    for n, q in zip(range(8, 14), qs):
        assert uniform_distance(q, target) >= 1.0
        assert j1_distance_compact(q, target, with_witness=False)[0] <= 2.0 ** -n
    assert classify_convergence_mode([a03] * 3, a04, tol=0.01) == "divergent"


CASES = {"le": 0.0, "lt": 0.0, "ge": 1.0, "gt": 1.0}


@pytest.mark.parametrize("which", sorted(CASES))
def test_one_sided(remark, dyadic, which):
    target = StepIncreasing.from_atoms([T0], [1.0], 1.0)
    rep = one_sided_limit_check(remark, dyadic, T0, range(6, 15), which, target)
    assert rep.passed
    assert rep.observed == [CASES[which]] * 9


@pytest.mark.parametrize("which", sorted(CASES))
def test_one_sided_continuous(linear, dyadic, which):
    zero = StepIncreasing.from_atoms([], [], 1.0)
    rep = one_sided_limit_check(linear, dyadic, 0.3, range(11, 15), which, zero, tol=1e-3)
    assert rep.passed


def test_one_sided_rejects_unknown_case(remark, dyadic):
    with pytest.raises(ValueError):
        one_sided_limit_check(remark, dyadic, T0, range(3), "eq", remark)


def test_jump_carriers(remark, dyadic):
    rows = jump_carriers(remark, dyadic, T0, range(6, 10), 1.0, 0.05)
    for r in rows:
        assert r["carriers"] == [r["t_prime"]]
        assert r["first_left_match"] == r["successor"]


def test_functional_limit(remark, dyadic):
    qs = [q_n(remark, dyadic.generate(n)) for n in range(4, 10)]
    target = StepIncreasing.from_atoms([T0], [1.0], 1.0)
    rep = functional_limit(lambda q: q.evaluate(1.0), qs, target)
    assert rep.values == [1.0] * 6 and rep.gaps == [0.0] * 6
    rep = functional_limit(lambda q: q.evaluate(0.3), qs, target)
    assert max(rep.gaps) == 0.0
    rep = functional_limit(lambda q: q.evaluate(0.0), qs, target)
    assert rep.values == [0.0] * 6


# ------------------------------------------------------------------ properties

def grid_step(rng, k):
    """Step path with jumps on a coarse grid, so ties between paths are common."""
    times = np.unique(rng.integers(1, 20, k)) / 20.0
    sizes = rng.choice([-1.0, 1.0, 2.0, 0.5], times.size)
    return CadlagPath.step(list(zip(times, sizes)), 1.0, float(rng.choice([0.0, 1.0])))


pairs = st.builds(
    lambda seed, grid: (lambda r: ((grid_step(r, 4), grid_step(r, 4)) if grid
                                   else (random_step(r, r.integers(0, 5)), random_step(r, r.integers(0, 5)))))(
        np.random.default_rng(seed)),
    st.integers(0, 2**32 - 1), st.booleans())


@given(pairs)
@settings(max_examples=40, deadline=None)
def test_agrees_with_oracle(xy):
    x, y = xy
    d, lam = j1_distance_compact(x, y)
    assert abs(d - j1_distance_grid_oracle(x, y)) <= 2e-3
    # the witness attains the distance up to rounding
    assert j1_objective(x, y, lam) <= d + 1e-9
    assert j1_within(x, y, d + 1e-12)
    if d > 1e-9:
        assert not j1_within(x, y, d * (1 - 1e-6))


@given(pairs, st.integers(0, 2**32 - 1))
@settings(max_examples=60, deadline=None)
def test_pseudometric(xy, seed):
    x, y = xy
    z = random_step(np.random.default_rng(seed), 3)
    dxy = j1_distance_compact(x, y, with_witness=False)[0]
    assert dxy == pytest.approx(j1_distance_compact(y, x, with_witness=False)[0], abs=1e-12)
    assert dxy <= uniform_distance(x, y) + 1e-12
    dxz = j1_distance_compact(x, z, with_witness=False)[0]
    dzy = j1_distance_compact(z, y, with_witness=False)[0]
    assert dxy <= dxz + dzy + 1e-9
    assert dxy >= abs(x.evaluate(0.0) - y.evaluate(0.0)) - 1e-12
    assert dxy >= abs(x.evaluate(1.0) - y.evaluate(1.0)) - 1e-12


@given(st.integers(0, 2**32 - 1))
@settings(max_examples=30, deadline=None)
def test_time_shift_bound(seed):
    rng = np.random.default_rng(seed)
    x = random_step(rng, 3, initial=0.0)
    h = 0.01
    jt, js = x.jump_times, x.jump_sizes
    if jt.size and jt.max() + h >= 1.0:
        return
    y = CadlagPath.step(list(zip(jt + h, js)), 1.0)
    assert j1_distance_compact(x, y, with_witness=False)[0] <= h + 1e-12
