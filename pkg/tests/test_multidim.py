import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from cadlag_qv import CadlagPath, VectorCadlagPath, q_n
from cadlag_qv.multidim import (MatrixStepPath, UndecidedConvergenceError, covariation_polarization,
                                jump_alignment_check, matrix_q_n, matrix_qv_limit,
                                polarization_gap, psd_increment_check)

from conftest import T0, random_step


def test_identical_components(remark, dyadic):
    q = matrix_q_n(VectorCadlagPath((remark, remark)), dyadic.generate(6))
    np.testing.assert_array_equal(q.evaluate(1.0), [[1, 1], [1, 1]])


def test_opposite_components(two_jump, dyadic):
    q = matrix_q_n(VectorCadlagPath((two_jump, -two_jump)), dyadic.generate(5))
    v = q.evaluate(np.linspace(0, 1, 9))
    np.testing.assert_array_equal(v[:, 0, 1], -v[:, 0, 0])


def test_dimension_one_is_q_n(two_jump, dyadic):
    p = dyadic.generate(4)
    q = matrix_q_n(VectorCadlagPath((two_jump,)), p)
    np.testing.assert_array_equal(q[0, 0].values, q_n(two_jump, p).values)


def test_polarization_examples(remark, two_jump, dyadic):
    levels = range(8, 14)
    lx = covariation_polarization(remark, remark, dyadic, levels, tol=0.01)
    assert lx.evaluate(1.0) == pytest.approx(1.0)
    assert lx.jump_times.tolist() == [T0]
    neg = covariation_polarization(remark, -remark, dyadic, levels, tol=0.01)
    assert neg.evaluate(1.0) == pytest.approx(-1.0)
    a = CadlagPath.step([(0.3, 1.0)], 1.0)
    c = covariation_polarization(a, remark, dyadic, levels, tol=0.01)
    assert np.all(c.values == 0.0)


def test_polarization_undecided(remark, dyadic):
    from cadlag_qv.mc import ProcessModel, sample_path
    w = sample_path(ProcessModel("white_noise", resolution=12), 0)
    with pytest.raises(UndecidedConvergenceError):
        covariation_polarization(w, remark, dyadic, range(6, 10), tol=0.01)


def test_matrix_limit_examples(remark, dyadic, linear):
    lim, rep = matrix_qv_limit(VectorCadlagPath((remark, remark)), dyadic, range(8, 13), tol=0.01)
    assert rep.converged
    np.testing.assert_array_equal(lim.evaluate(1.0), [[1, 1], [1, 1]])
    assert all(e["mode"] == "j1" for e in rep.entries)
    a = CadlagPath.step([(0.3, 1.0)], 1.0)
    lim, rep = matrix_qv_limit(VectorCadlagPath((a, remark)), dyadic, range(8, 13), tol=0.01)
    np.testing.assert_array_equal(lim.evaluate(1.0), [[1, 0], [0, 1]])
    assert lim[0, 0].jump_times.tolist() == [0.3]
    assert lim[1, 1].jump_times.tolist() == [T0]
    lim, rep = matrix_qv_limit(VectorCadlagPath((linear,)), dyadic, range(10, 14), tol=0.01)
    assert lim.evaluate(1.0)[0, 0] == pytest.approx(2.0 ** -10)
    assert rep.to_dict()["converged"]


def test_psd_examples(remark, dyadic):
    q = matrix_q_n(VectorCadlagPath((remark, remark)), dyadic.generate(5))
    assert psd_increment_check(q).passed
    d = CadlagPath.step([(0.5, 1.0)], 1.0)
    o = CadlagPath.step([(0.5, 2.0)], 1.0)
    bad = MatrixStepPath(((d, o), (o, d)))
    rep = psd_increment_check(bad)
    assert not rep.passed
    assert rep.min_eigenvalue == pytest.approx(-1.0)
    assert rep.violations[0]["to"] == 0.5
    zero = CadlagPath.zero(1.0)
    assert psd_increment_check(MatrixStepPath(((zero,),))).passed


def test_jump_alignment(remark, linear, dyadic):
    rep = jump_alignment_check(VectorCadlagPath((remark, remark)), dyadic, T0, range(5, 10))
    assert rep.passed and rep.expected == [[1, 1], [1, 1]]
    rep = jump_alignment_check(VectorCadlagPath((remark, remark)), dyadic, 0.3, range(5, 10))
    assert rep.passed and rep.expected == [[0, 0], [0, 0]]
    rep = jump_alignment_check(VectorCadlagPath((remark, linear)), dyadic, T0, range(9, 14), tol=1e-2)
    assert rep.passed
    assert abs(rep.observed[-1][0][1]) < 1e-2


def test_matrix_validation(remark):
    with pytest.raises(ValueError):
        MatrixStepPath(((remark, remark),))


vec = st.builds(lambda seed: VectorCadlagPath(tuple(random_step(np.random.default_rng([seed, k]), 4)
                                                    for k in range(3))),
                st.integers(0, 2**32 - 1))


@given(vec, st.integers(1, 8))
@settings(max_examples=50, deadline=None)
def test_psd_property(x, n):
    from cadlag_qv import PartitionScheme
    q = matrix_q_n(x, PartitionScheme("dyadic").generate(n))
    assert psd_increment_check(q).min_eigenvalue >= -1e-10


@given(st.integers(0, 2**32 - 1), st.integers(1, 10))
@settings(max_examples=50, deadline=None)
def test_polarization_identity(seed, n):
    from cadlag_qv import PartitionScheme
    rng = np.random.default_rng(seed)
    x, y = random_step(rng, 5), random_step(rng, 5)
    assert polarization_gap(x, y, PartitionScheme("dyadic").generate(n)) <= 1e-12
