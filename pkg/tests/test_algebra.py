"""Multimatrix algebras: structure constants, involution, Wedderburn."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from wka import (
    AlgElement,
    Functional,
    StarAlgebraData,
    SubalgebraBasis,
    block_trace,
    center,
    check_conditional_expectation,
    commutant,
    make_algebra,
    minimal_central_projections,
    regular_trace,
    wedderburn_realize,
)
from wka.errors import NotSemisimple
from wka.tensorkit import dagger, max_abs, subspace_distance

SHAPES = [(1,), (2,), (1, 1), (1, 2), (2, 2), (1, 1, 3)]


@pytest.mark.parametrize("shape", SHAPES)
def test_associativity_all_basis_triples(shape):
    alg = make_algebra(shape)
    mult = alg.mult_tensor()
    lhs = np.einsum("abx,xcy->abcy", mult, mult)
    rhs = np.einsum("bcx,axy->abcy", mult, mult)
    assert max_abs(lhs - rhs) == 0.0


@pytest.mark.parametrize("shape", SHAPES)
def test_unit_and_star_involution(shape):
    alg = make_algebra(shape)
    for a in range(alg.dim):
        v = np.zeros(alg.dim, dtype=complex)
        v[a] = 1.0
        assert max_abs(alg.mul(alg.unit, v) - v) == 0.0
        assert max_abs(alg.mul(v, alg.unit) - v) == 0.0
        assert max_abs(alg.star(alg.star(v)) - v) == 0.0


def test_star_antimultiplicative():
    alg = make_algebra((2, 3))
    rng = np.random.default_rng(1)
    for _ in range(20):
        x = rng.standard_normal(alg.dim) + 1j * rng.standard_normal(alg.dim)
        y = rng.standard_normal(alg.dim) + 1j * rng.standard_normal(alg.dim)
        assert max_abs(alg.star(alg.mul(x, y)) - alg.mul(alg.star(y), alg.star(x))) < 1e-12


def test_matrix_units_multiply_as_matrices():
    alg = make_algebra((3,))
    e = lambda i, j: np.eye(9)[alg.matrix_unit_index(0, i, j)]
    assert max_abs(alg.mul(e(0, 1), e(1, 2)) - e(0, 2)) == 0.0
    assert max_abs(alg.mul(e(0, 1), e(0, 1))) == 0.0
    assert max_abs(alg.star(e(0, 1)) - e(1, 0)) == 0.0


@given(st.integers(min_value=0, max_value=2 ** 31 - 1))
@settings(max_examples=100, deadline=None)
def test_regular_trace_positive_faithful(seed):
    alg = make_algebra((1, 2))
    tau = regular_trace(alg)
    rng = np.random.default_rng(seed)
    x = rng.standard_normal(alg.dim) + 1j * rng.standard_normal(alg.dim)
    val = tau(alg.mul(alg.star(x), x))
    assert abs(val.imag) < 1e-10
    assert val.real > 0 or np.allclose(x, 0)


def test_regular_trace_values():
    # trace of the left regular representation: theta(P_i) = d_i^2
    alg = make_algebra((2, 1))
    tau = regular_trace(alg)
    assert tau(np.asarray(alg.unit)) == pytest.approx(5.0)
    assert tau(alg.block_identity(0)) == pytest.approx(4.0)
    assert tau(np.eye(alg.dim)[alg.matrix_unit_index(0, 0, 0)]) == pytest.approx(2.0)


def test_center_and_minimal_central_projections():
    alg = make_algebra((2, 1, 3))
    z = center(alg)
    assert z.dim == 3
    ps = minimal_central_projections(alg)
    assert len(ps) == 3
    total = sum(p.coeffs for p in ps)
    assert max_abs(total - alg.unit) == 0.0
    for p in ps:
        assert max_abs(alg.mul(p.coeffs, p.coeffs) - p.coeffs) == 0.0
        assert max_abs(alg.star(p.coeffs) - p.coeffs) == 0.0


def test_double_commutant():
    # relative double commutant inside a multimatrix algebra equals the
    # subalgebra generated together with the center; my span contains the
    # center here, so S'' = S
    alg = make_algebra((2, 2, 1))
    zs = [np.asarray(alg.block_identity(i), dtype=complex) for i in range(3)]
    span = SubalgebraBasis(alg, np.stack(zs, axis=1))
    dc = commutant(commutant(span))
    assert dc.dim == 3
    assert subspace_distance(dc.basis, span.basis) < 1e-9


def test_double_commutant_masa_in_factor():
    # the diagonal masa of M_3 is its own double commutant
    alg = make_algebra((3,))
    diag = SubalgebraBasis(
        alg,
        np.stack(
            [np.eye(9)[alg.matrix_unit_index(0, i, i)] for i in range(3)], axis=1
        ).astype(complex),
    )
    masa_comm = commutant(diag)
    assert masa_comm.dim == 3
    dc = commutant(masa_comm)
    assert dc.dim == 3
    assert subspace_distance(dc.basis, diag.basis) < 1e-9


def test_double_commutant_contains_generating_span():
    # without the center, S'' can only grow: S'' contains S
    alg = make_algebra((2, 2, 1))
    p0 = np.asarray(alg.block_identity(0), dtype=complex)
    span = SubalgebraBasis(alg, np.stack([alg.unit, p0], axis=1))
    dc = commutant(commutant(span))
    assert dc.contains(span.basis) < 1e-9
    assert dc.dim == 3  # the whole center, generated by {1, P0} and Z(M)


def test_commutant_of_center_is_whole_algebra():
    alg = make_algebra((2, 1))
    assert commutant(center(alg)).dim == alg.dim


def test_commutant_of_whole_algebra_is_center():
    alg = make_algebra((2, 2))
    whole = SubalgebraBasis(alg, np.eye(alg.dim, dtype=complex))
    com = commutant(whole)
    assert com.dim == 2
    assert subspace_distance(com.basis, center(alg).basis) < 1e-9


def _scrambled_data(shape, seed):
    """Structure constants of make_algebra(shape) in a random new basis."""
    alg = make_algebra(shape)
    rng = np.random.default_rng(seed)
    g = rng.standard_normal((alg.dim, alg.dim)) + 1j * rng.standard_normal(
        (alg.dim, alg.dim)
    )
    # change of basis: new basis vectors b'_a = sum_m g[m, a] b_m
    ginv = np.linalg.inv(g)
    mult = np.einsum(
        "ma,nb,mnk,ck->abc", g, g, alg.mult_tensor(), ginv, optimize=True
    )
    star = ginv @ alg.star_matrix @ np.conj(g)
    unit = ginv @ alg.unit
    trace = g.T @ regular_trace(alg).vec
    return StarAlgebraData(mult, star, unit, trace), g


@pytest.mark.parametrize("shape", [(2,), (1, 2), (2, 1, 1)])
def test_wedderburn_round_trip(shape, seed=3):
    data, g = _scrambled_data(shape, seed)
    real = wedderburn_realize(data)
    assert tuple(real.algebra.block_shape) == tuple(sorted(shape))
    can = real.algebra
    w, v = real.to_canonical, real.from_canonical
    dim = data.mult.shape[0]
    assert max_abs(w @ v - np.eye(dim)) < 1e-8
    assert max_abs(w @ data.unit - can.unit) < 1e-8
    rng = np.random.default_rng(seed)
    for _ in range(10):
        x = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
        y = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
        prod_abs = np.einsum("abc,a,b->c", data.mult, x, y)
        assert max_abs(v @ can.mul(w @ x, w @ y) - prod_abs) < 1e-8
        star_abs = data.star @ np.conj(x)
        assert max_abs(v @ can.star(w @ x) - star_abs) < 1e-8


def test_wedderburn_rejects_nonsemisimple():
    # 2-dim algebra of dual numbers: 1, t with t^2 = 0 is not semisimple
    mult = np.zeros((2, 2, 2), dtype=complex)
    mult[0, 0, 0] = mult[0, 1, 1] = mult[1, 0, 1] = 1.0
    star = np.eye(2, dtype=complex)
    unit = np.array([1.0, 0.0], dtype=complex)
    trace = np.array([1.0, 0.0], dtype=complex)
    with pytest.raises(NotSemisimple):
        wedderburn_realize(StarAlgebraData(mult, star, unit, trace))


def test_block_trace_weights():
    alg = make_algebra((2, 1))
    tau = block_trace(alg, weights=[0.25, 3.0])
    assert tau(np.asarray(alg.block_identity(0))) == pytest.approx(0.5)
    assert tau(np.asarray(alg.block_identity(1))) == pytest.approx(3.0)


def test_functional_gram_and_faithfulness():
    alg = make_algebra((2,))
    tau = regular_trace(alg)
    g = tau.gram()
    assert max_abs(g - dagger(g)) < 1e-12
    assert np.linalg.eigvalsh(g)[0] > 0.5
    assert tau.is_faithful_positive()
    rank_deficient = Functional(alg, np.zeros(alg.dim))
    assert not rank_deficient.is_faithful_positive()


def test_check_conditional_expectation_compression():
    alg = make_algebra((2,))
    # E = compression to the diagonal subalgebra of M_2
    target = SubalgebraBasis(
        alg,
        np.stack(
            [np.eye(4)[alg.matrix_unit_index(0, i, i)] for i in range(2)], axis=1
        ).astype(complex),
    )
    emat = np.zeros((4, 4), dtype=complex)
    for i in range(2):
        k = alg.matrix_unit_index(0, i, i)
        emat[k, k] = 1.0
    rep = check_conditional_expectation(emat, target, regular_trace(alg))
    assert rep.passed


def test_check_conditional_expectation_detects_non_bimodule_map():
    alg = make_algebra((2,))
    target = SubalgebraBasis(
        alg,
        np.stack(
            [np.eye(4)[alg.matrix_unit_index(0, i, i)] for i in range(2)], axis=1
        ).astype(complex),
    )
    emat = np.zeros((4, 4), dtype=complex)
    k0 = alg.matrix_unit_index(0, 0, 0)
    emat[k0, :] = 1.0  # sends everything to e_00: not even unital onto target
    rep = check_conditional_expectation(emat, target, regular_trace(alg))
    assert not rep.passed
