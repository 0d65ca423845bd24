import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from cadlag_qv import CadlagPath, PartitionScheme, StepIncreasing, q_n
from cadlag_qv.calculus import (SmoothFunction, continuous_part_proxy, follmer_integral,
                                ito_residual, ito_terms, jump_compensator, parse_function,
                                polynomial, stieltjes_error_bound, stieltjes_integral)
from cadlag_qv.mc import ProcessModel, sample_path

from conftest import T0, random_step

square = polynomial([0, 0, 1])
cube = polynomial([0, 0, 0, 1])


def test_follmer_examples(two_jump, dyadic):
    p = dyadic.generate(3)
    for t in (0.1, 0.25, 0.8, 1.0):
        star = p.successor(p.last_at_or_before(t))
        assert follmer_integral(lambda v: np.ones_like(v), two_jump, p, t) == two_jump.evaluate(star)
    for k in (4, 10):
        pts = PartitionScheme("uniform").generate(k - 1)
        line = CadlagPath.from_samples(pts.points, pts.points, 1.0)
        assert follmer_integral(lambda v: 2 * v, line, pts, 1.0) == pytest.approx(1 - 1 / k)


def test_follmer_conventions(two_jump, dyadic):
    p = dyadic.generate(3)
    g = lambda v: np.ones_like(v)
    assert follmer_integral(g, two_jump, p, 0.3, "completed") == 1.0
    assert follmer_integral(g, two_jump, p, 0.3, "left") == 1.0
    assert follmer_integral(g, two_jump, p, 0.7, "completed") == 1.0
    assert follmer_integral(g, two_jump, p, 0.7, "left") == 3.0
    with pytest.raises(ValueError):
        follmer_integral(g, two_jump, p, 0.7, "right")


def test_stieltjes(remark):
    a = StepIncreasing.from_atoms([0.2, 0.5], [1.0, 2.0], 1.0)
    one = lambda v: np.ones_like(np.asarray(v, dtype=float))
    assert stieltjes_integral(one, a, 1.0) == 3.0
    assert stieltjes_integral(one, a, 0.3) == 1.0
    assert stieltjes_integral(one, StepIncreasing.from_atoms([], [], 1.0), 1.0) == 0.0
    jump = StepIncreasing.from_atoms([T0], [1.0], 1.0)
    assert stieltjes_integral(lambda v: v, jump, 1.0, x=remark) == 1.0
    assert stieltjes_integral(lambda v: v, jump, 0.5, x=remark) == 0.0
    # the value at 0 is an atom at 0
    b = StepIncreasing.from_atoms([0.0, 0.5], [0.5, 1.0], 1.0)
    assert stieltjes_integral(lambda s: 1 + s, b, 1.0) == pytest.approx(0.5 + 1.5)
    with pytest.raises(ValueError):
        stieltjes_integral(one, CadlagPath([0, 0.5, 0.5], [1, 1, 0], 1.0), 1.0)
    assert stieltjes_error_bound(2.0, 0.01, 3.0) == pytest.approx(0.06)


def test_compensator(remark, linear):
    assert jump_compensator(square, linear, 1.0) == 0.0
    assert jump_compensator(square, remark, 1.0) == 1.0
    assert jump_compensator(square, remark, 0.5) == 0.0
    assert jump_compensator(polynomial([3, -2]), remark, 1.0) == 0.0


def test_ito_square_remark(remark, dyadic):
    for n in range(4, 14):
        assert ito_residual(square, remark, dyadic, n, T0) == 0.0
        assert ito_residual(square, remark, dyadic, n, 1.0) == 0.0


def test_ito_cube_brownian(dyadic):
    x = sample_path(ProcessModel("brownian"), 2024)
    res = [abs(ito_residual(cube, x, dyadic, n, 1.0)) for n in range(8, 15)]
    assert res[-1] < 0.05
    assert res[-1] < res[0]


def test_ito_cube_jump_path(two_jump, dyadic):
    # no continuous part: the residual vanishes once each jump sits alone in an interval
    for n in range(3, 10):
        assert ito_residual(cube, two_jump, dyadic, n, 1.0) == pytest.approx(0.0, abs=1e-12)


def test_continuous_part_proxy(two_jump, linear, dyadic):
    p = dyadic.generate(4)
    assert np.all(continuous_part_proxy(two_jump, p).values == 0.0)
    assert continuous_part_proxy(linear, p).evaluate(1.0) == pytest.approx(1 / 16)


def test_function_parsing():
    f = parse_function("poly:1,0,2")
    assert f(2.0) == 9.0 and f.df(2.0) == 8.0 and f.d2f(2.0) == 4.0
    for bad in ("sin", "poly:a,b"):
        with pytest.raises(ValueError):
            parse_function(bad)
    with pytest.raises(ValueError):
        polynomial([])


def test_derivative_check():
    SmoothFunction(np.sin, np.cos, lambda v: -np.sin(v), "sin")
    with pytest.raises(ValueError):
        SmoothFunction(np.sin, np.sin, lambda v: -np.sin(v), "wrong")


@given(st.integers(0, 2**32 - 1), st.integers(1, 9), st.data())
@settings(max_examples=100, deadline=None)
def test_square_identity_at_partition_points(seed, n, data):
    x = random_step(np.random.default_rng(seed), 6)
    p = PartitionScheme("dyadic").generate(n)
    t = data.draw(st.sampled_from(p.points.tolist()))
    terms = ito_terms(square, x, p, t)
    scale = max(1.0, abs(terms.lhs), abs(terms.integral), abs(terms.second_order))
    assert abs(terms.residual) <= 1e-10 * scale
    lin = polynomial([0.5, -3.0])
    assert abs(ito_terms(lin, x, p, t).residual) <= 1e-10 * max(1.0, abs(x.evaluate(t)))


@given(st.integers(0, 2**32 - 1), st.integers(1, 9), st.floats(0, 1))
@settings(max_examples=100, deadline=None)
def test_telescoping_with_q_n(seed, n, t):
    x = random_step(np.random.default_rng(seed), 5)
    p = PartitionScheme("dyadic").generate(n)
    star = p.successor(p.last_at_or_before(t))
    lhs = q_n(x, p).evaluate(t) + follmer_integral(lambda v: 2 * v, x, p, t)
    want = x._value_at(star) ** 2 - x.evaluate(0.0) ** 2
    assert lhs == pytest.approx(want, abs=1e-10 * max(1.0, abs(want)))
