"""Axiom verification, Cartan subalgebras, counital maps, morphisms."""

import numpy as np
import pytest

from wka import (
    WeakKac,
    cartan_subalgebras,
    check_kac_bimodule,
    check_morphism,
    counital_maps,
    counital_quotient,
    decompose_if_split,
    direct_sum,
    hyper_center,
    restrict_to_blocks,
    verify_weak_kac,
)
from wka.errors import CartanMismatch
from wka.tensorkit import max_abs

from conftest import get_example

EXAMPLES = [
    "group_z3",
    "fun_k2",
    "group_k3",
    "elem_12",
    "dualelem_12",
    "cube2",
    "crossed2",
    "twist_11",
]


@pytest.mark.parametrize("name", EXAMPLES)
def test_axiom_suite_passes(name):
    rep = verify_weak_kac(get_example(name))
    assert rep.passed, rep.as_text()
    assert rep.max_residual <= 1e-8


def test_axiom_suite_names_every_axiom():
    rep = verify_weak_kac(get_example("fun_k2"))
    names = {c.name for c in rep.checks}
    for expected in (
        "delta_coassociative",
        "delta_multiplicative",
        "delta_star_compatible",
        "delta_injective",
        "antipode_antimultiplicative",
        "antipode_involutive",
        "antipode_flips_coproduct",
        "counit_left",
        "counit_right",
        "axiom2",
        "axiom3",
        "axiomA2",
        "axiomA3",
        "axiomA4",
    ):
        assert expected in names, f"missing {expected}"


def test_scaled_coproduct_fails_counit_and_weak_unit_axioms():
    w = get_example("cube2")
    bad = WeakKac(w.algebra, 0.5 * w.coproduct, w.antipode, w.counit, {})
    rep = verify_weak_kac(bad)
    assert not rep.passed
    failed = {c.name for c in rep.failures()}
    assert "counit_left" in failed or "counit_right" in failed


def test_zeroed_counit_fails_named_counit_checks():
    w = get_example("fun_k2")
    bad = WeakKac(w.algebra, w.coproduct, w.antipode, np.zeros(w.dim), {})
    rep = verify_weak_kac(bad)
    failed = {c.name for c in rep.failures()}
    assert {"counit_left", "counit_right"} <= failed


def test_mangled_antipode_fails():
    w = get_example("group_z3")
    bad = WeakKac(w.algebra, w.coproduct, np.eye(w.dim), w.counit, {})
    rep = verify_weak_kac(bad)
    assert not rep.passed


# ---------------------------------------------------------------------------
# Cartan subalgebras
# ---------------------------------------------------------------------------


def test_cartan_of_function_algebra_is_functions_on_units():
    # C(K_2): N_t = functions of the target, a 2-dim commutative algebra
    pair = cartan_subalgebras(get_example("fun_k2"))
    assert pair.report.passed
    assert pair.target.dim == 2
    assert tuple(pair.target_shape) == (1, 1)
    assert tuple(pair.source_shape) == (1, 1)


def test_cartan_of_group_algebra_is_scalars():
    # a group has one unit: N_t = C 1
    pair = cartan_subalgebras(get_example("group_z3"))
    assert pair.target.dim == 1


@pytest.mark.parametrize(
    "name,shape",
    [("elem_11", (1, 1)), ("elem_12", (1, 2))],
)
def test_cartan_of_elementary_is_base_algebra(name, shape):
    pair = cartan_subalgebras(get_example(name))
    assert pair.report.passed
    assert tuple(pair.target_shape) == shape
    assert tuple(pair.source_shape) == shape


def test_cartan_factorization_spans_e():
    w = get_example("cube2")
    pair = cartan_subalgebras(w)
    e = w.e_matrix
    recon = sum(np.outer(x, y) for x, y in zip(pair.xs, pair.ys))
    assert max_abs(recon - e) < 1e-9


def test_cartan_rejects_garbage_coproduct():
    w = get_example("cube2")
    rng = np.random.default_rng(5)
    bad = WeakKac(
        w.algebra, rng.normal(size=w.coproduct.shape), w.antipode, w.counit, {}
    )
    with pytest.raises(CartanMismatch):
        cartan_subalgebras(bad)


# ---------------------------------------------------------------------------
# counital maps
# ---------------------------------------------------------------------------


@pytest.mark.parametrize("name", ["fun_k2", "elem_12", "cube2", "twist_11"])
def test_counital_maps_verified(name):
    w = get_example(name)
    maps = counital_maps(w)
    assert maps.report.passed, maps.report.as_text()
    et = maps.target_map
    # idempotent with range N_t, unital
    assert max_abs(et @ et - et) < 1e-9
    assert max_abs(et @ w.algebra.unit - w.algebra.unit) < 1e-9
    pair = cartan_subalgebras(w)
    assert pair.target.contains(et) < 1e-9


def test_counital_maps_match_counit_composition():
    # eps o eps_t = eps and eps o eps_s = eps
    w = get_example("cube2")
    maps = counital_maps(w)
    assert max_abs(w.counit @ maps.target_map - w.counit) < 1e-9
    assert max_abs(w.counit @ maps.source_map - w.counit) < 1e-9


# ---------------------------------------------------------------------------
# hyper-center and splitting
# ---------------------------------------------------------------------------


def test_hyper_center_trivial_for_elementary_and_cube():
    assert hyper_center(get_example("elem_12")).dim == 1
    assert hyper_center(get_example("cube2")).dim == 1
    assert decompose_if_split(get_example("cube2")) is None


def test_direct_sum_splits_back():
    w1 = get_example("fun_z2")
    w2 = get_example("fun_k2")
    w = direct_sum(w1, w2)
    assert verify_weak_kac(w).passed
    hc = hyper_center(w)
    assert hc.dim == 2
    split = decompose_if_split(w)
    assert split is not None
    a, b, rep = split
    assert rep.passed
    shapes = sorted([tuple(a.algebra.block_shape), tuple(b.algebra.block_shape)])
    assert shapes == sorted(
        [tuple(w1.algebra.block_shape), tuple(w2.algebra.block_shape)]
    )


def test_restrict_to_blocks_recovers_summand():
    w1 = get_example("fun_z2")
    w2 = get_example("fun_k2")
    w = direct_sum(w1, w2)
    nb1 = w1.algebra.nblocks
    sub, pi = restrict_to_blocks(w, range(nb1))
    assert sub.dim == w1.dim
    assert verify_weak_kac(sub).passed
    rep = check_morphism(w, sub, pi)
    # compression to a direct summand is a genuine morphism
    assert rep["unital"].passed and rep["multiplicative"].passed


# ---------------------------------------------------------------------------
# morphisms
# ---------------------------------------------------------------------------


def test_identity_is_a_morphism():
    w = get_example("fun_k2")
    rep = check_morphism(w, w, np.eye(w.dim))
    assert rep.passed


def test_counital_quotient_map_is_a_morphism():
    w = get_example("fun_k2")
    q, pi, qrep = counital_quotient(w)
    assert qrep.passed
    rep = check_morphism(w, q, pi)
    assert rep.passed
    assert rep["cartan_source_bijective"].passed
    assert rep["cartan_target_bijective"].passed


def test_zero_map_fails_morphism():
    w = get_example("fun_k2")
    rep = check_morphism(w, w, np.zeros((w.dim, w.dim)))
    assert not rep.passed
    assert not rep["unital"].passed


# ---------------------------------------------------------------------------
# Kac bimodule characterization
# ---------------------------------------------------------------------------


@pytest.mark.parametrize("name", ["fun_k2", "group_z3", "elem_12", "cube2"])
def test_kac_bimodule_recovers_counit(name):
    w = get_example(name)
    rep, eps = check_kac_bimodule(w.algebra, w.coproduct, w.antipode)
    assert rep.passed, rep.as_text()
    assert eps is not None
    assert max_abs(eps.vec - w.counit) < 1e-8


def test_kac_bimodule_rejects_scaled_coproduct():
    w = get_example("cube2")
    rep, _ = check_kac_bimodule(w.algebra, 0.5 * w.coproduct, w.antipode)
    assert not rep.passed
    assert rep.max_residual >= 0.5
