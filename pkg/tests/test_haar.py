"""Haar projections, Haar traces, the trace cone, conditional expectations."""

import numpy as np
import pytest

from wka import (
    cube_family,
    cyclic_groupoid,
    direct_sum,
    disjoint_union,
    elementary,
    groupoid_function_algebra,
    haar_projection,
    haar_trace_cone,
    normalized_haar_trace,
)
from wka.algebra import Functional, block_trace, regular_trace
from wka.errors import NotFaithful, NotTracial
from wka.haar import (
    check_generalized_kac,
    check_haar_projection,
    check_normalized_haar_trace,
    counit_support_projection,
    haar_conditional_expectations,
    operator_identities,
)
from wka.weakkac import cartan_subalgebras

from conftest import get_example

EXAMPLES = ["group_z3", "fun_k2", "elem_12", "dualelem_12", "cube2", "twist_12"]


# ---------------------------------------------------------------------------
# Haar projection
# ---------------------------------------------------------------------------


def test_haar_projection_of_group_z2_is_average():
    # (1 + g) / 2 in the group basis
    w = get_example("group_z2")
    p = haar_projection(w).coeffs
    carry = w.meta["from_canonical"]
    assert np.abs(carry @ p - np.array([0.5, 0.5])).max() < 1e-12


@pytest.mark.parametrize("name", EXAMPLES)
def test_haar_projection_checks(name):
    w = get_example(name)
    p, rep = check_haar_projection(w)
    assert rep.passed, rep.as_text()
    assert rep.max_residual <= 1e-8
    # solved by equations and by the support oracle independently
    assert rep["unique"].passed
    assert rep["support_oracle_agrees"].passed
    assert rep["coproduct_evaluation_formula"].passed
    assert rep["coproduct_flip_symmetric"].passed
    assert rep["coproduct_block_ranks"].passed


def test_support_oracle_equals_equation_solution():
    w = get_example("cube2")
    assert (
        np.abs(counit_support_projection(w).coeffs - haar_projection(w).coeffs).max()
        < 1e-12
    )


def test_cube2_haar_projection_vector():
    p = haar_projection(get_example("cube2")).coeffs
    assert np.abs(p - np.array([0.5, 0.5, 0.5, 0.5, 0, 0, 0, 0])).max() < 1e-12


# ---------------------------------------------------------------------------
# normalized Haar trace
# ---------------------------------------------------------------------------


@pytest.mark.parametrize("name", EXAMPLES)
def test_normalized_haar_trace_checks(name):
    w = get_example(name)
    phi, rep = check_normalized_haar_trace(w)
    assert rep.passed, rep.as_text()
    assert rep["unique"].passed
    assert rep["matches_dual_haar_projection"].passed
    assert np.abs(phi.vec - normalized_haar_trace(w).vec).max() < 1e-12


@pytest.mark.parametrize("n", [2, 3])
def test_cube_haar_trace_is_canonical_block_trace(n):
    # phi(f^k_{ij}) = delta_{ij} / n: the normalized trace of each block
    w = cube_family(n)
    phi = normalized_haar_trace(w)
    expected = np.zeros(n ** 3)
    for k in range(n):
        for i in range(n):
            expected[k * n * n + i * n + i] = 1.0 / n
    assert np.abs(phi.vec - expected).max() < 1e-10


def test_haar_trace_normalization_counts_units():
    # phi(1) equals the number of Cartan dimensions: (id x phi) e = 1
    for name in EXAMPLES:
        w = get_example(name)
        phi = normalized_haar_trace(w)
        pair = cartan_subalgebras(w)
        assert abs(phi.vec @ w.algebra.unit - pair.target.dim) < 1e-8


# ---------------------------------------------------------------------------
# the cone of Haar traces
# ---------------------------------------------------------------------------


def test_haar_trace_cone_ray_counts():
    cases = [
        (get_example("elem_12"), 1),
        (get_example("cube2"), 1),
        (get_example("fun_z2"), 1),
        (
            groupoid_function_algebra(
                disjoint_union(cyclic_groupoid(2), cyclic_groupoid(1))
            ),
            2,
        ),
        (direct_sum(get_example("group_z2"), get_example("fun_k2")), 2),
        (
            direct_sum(
                direct_sum(get_example("fun_z2"), get_example("group_z3")),
                get_example("elem_11"),
            ),
            3,
        ),
    ]
    for w, expected in cases:
        rays, rep = haar_trace_cone(w)
        assert rep.passed, rep.as_text()
        assert len(rays) == expected


def test_normalized_trace_is_sum_of_rays():
    # the ray normalization makes phi_eps = sum of the extreme rays with
    # coefficients exactly one
    for name in EXAMPLES:
        w = get_example(name)
        rays, _ = haar_trace_cone(w)
        total = sum(r.vec for r in rays)
        assert np.abs(total - normalized_haar_trace(w).vec).max() < 1e-10


def test_rays_are_antipode_invariant_traces():
    w = direct_sum(get_example("group_z2"), get_example("fun_k2"))
    rays, _ = haar_trace_cone(w)
    for r in rays:
        assert np.abs(r.vec @ w.antipode - r.vec).max() < 1e-9
        gram = r.gram()
        assert np.abs(gram - np.conj(gram.T)).max() < 1e-9


# ---------------------------------------------------------------------------
# conditional expectations
# ---------------------------------------------------------------------------


@pytest.mark.parametrize("name", ["fun_k2", "elem_12", "cube2", "twist_11"])
def test_conditional_expectations(name):
    w = get_example(name)
    e_t, e_s, eo_t, rep = haar_conditional_expectations(w)
    assert rep.passed, rep.as_text()
    pair = cartan_subalgebras(w)
    for mat, sub in ((e_t, pair.target), (e_s, pair.source)):
        assert np.abs(mat @ mat - mat).max() < 1e-8
        assert np.abs(mat @ w.algebra.unit - w.algebra.unit).max() < 1e-9
        assert sub.contains(mat) < 1e-8
    # Eo_t lands in the commutant of N_t and fixes N_t-commutant elements
    assert np.abs(eo_t @ eo_t - eo_t).max() < 1e-8


def test_skewed_trace_fails_expectations():
    w = get_example("cube2")
    tau = block_trace(w.algebra, [0.3, 0.7])
    *_, rep = haar_conditional_expectations(w, phi=tau)
    assert not rep.passed
    assert rep.max_residual > 0.1


# ---------------------------------------------------------------------------
# generalized structures: trace in place of counit
# ---------------------------------------------------------------------------


@pytest.mark.parametrize("name", ["group_z3", "fun_k2", "cube2", "elem_12"])
def test_generalized_kac_with_both_traces(name):
    w = get_example(name)
    data = (w.algebra, w.coproduct, w.antipode)
    assert check_generalized_kac(data, normalized_haar_trace(w)).passed
    assert check_generalized_kac(data, regular_trace(w.algebra)).passed


def test_generalized_kac_skewed_trace_fails_report():
    w = get_example("cube2")
    rep = check_generalized_kac(w, block_trace(w.algebra, [0.3, 0.7]))
    assert not rep.passed


def test_generalized_kac_rejects_non_tracial():
    w = get_example("cube2")
    v = np.zeros(w.dim)
    v[1] = 1.0
    with pytest.raises(NotTracial):
        check_generalized_kac(w, Functional(w.algebra, v))


def test_generalized_kac_rejects_non_faithful():
    w = get_example("cube2")
    with pytest.raises(NotFaithful):
        check_generalized_kac(w, block_trace(w.algebra, [1.0, 0.0]))


# ---------------------------------------------------------------------------
# operator identities
# ---------------------------------------------------------------------------


@pytest.mark.parametrize("name", ["fun_k2", "cube2", "elem_12", "twist_12"])
def test_operator_identities(name):
    rep = operator_identities(get_example(name))
    assert rep.passed, rep.as_text()
