"""Counital representation, fusion ring, counital quotient."""

import numpy as np
import pytest

from wka import direct_sum
from wka.fusion import (
    block_characters,
    counital_character,
    counital_quotient,
    counital_representation,
    dual_fusion_consistency,
    fusion_ring,
)
from wka import check_morphism, verify_weak_kac

from conftest import get_example

# frozen (support blocks, quotient dimension) per example
ORACLE = {
    "group_z3": ((2,), 1),
    "fun_k2": ((0, 3), 2),
    "group_k3": ((0,), 9),
    "elem_12": ((0,), 25),
    "dualelem_12": ((0, 3), 17),
    "cube2": ((0,), 4),
    "cube3": ((0,), 9),
    "crossed2": ((1,), 4),
    "twist_11": ((0,), 4),
}


@pytest.mark.parametrize("name", sorted(ORACLE))
def test_counital_representation_support(name):
    w = get_example(name)
    cr, rep = counital_representation(w)
    assert rep.passed, rep.as_text()
    support, _ = ORACLE[name]
    assert tuple(cr.support) == support
    # multiplicity-free
    assert set(np.asarray(cr.multiplicities).tolist()) <= {0, 1}
    assert tuple(np.nonzero(cr.multiplicities)[0]) == support


@pytest.mark.parametrize("name", sorted(ORACLE))
def test_counital_quotient_dimension(name):
    w = get_example(name)
    q, pi, qrep = counital_quotient(w)
    assert qrep.passed, qrep.as_text()
    _, dim = ORACLE[name]
    assert q.dim == dim
    assert verify_weak_kac(q).passed
    assert check_morphism(w, q, pi).passed


def test_direct_sum_support_concatenates():
    w = direct_sum(get_example("cube2"), get_example("fun_k2"))
    cr, rep = counital_representation(w)
    assert rep.passed
    assert tuple(cr.support) == (0, 2, 5)
    q, _, _ = counital_quotient(w)
    assert q.dim == 6


def test_character_of_counital_rep():
    # chi_eps = eps o mu o Delta, and it is the sum of support characters
    w = get_example("fun_k2")
    chi = counital_character(w)
    blocks = block_characters(w.algebra)
    cr, _ = counital_representation(w)
    expected = blocks[:, list(cr.support)].sum(axis=1)
    assert np.abs(chi - expected).max() < 1e-10


# ---------------------------------------------------------------------------
# fusion ring
# ---------------------------------------------------------------------------


def test_z3_fusion_is_the_group_ring():
    w = get_example("group_z3")
    fr, rep = fusion_ring(w)
    assert rep.passed, rep.as_text()
    assert fr.support == (2,)
    # blocks 0, 1 are the two nontrivial characters, block 2 is trivial
    expected = {
        (0, 0): 1,
        (0, 1): 2,
        (0, 2): 0,
        (1, 1): 0,
        (1, 2): 1,
        (2, 2): 2,
    }
    for (i, j), k in expected.items():
        row = np.zeros(3)
        row[k] = 1
        assert np.abs(fr.table[i, j] - row).max() < 1e-9
        assert np.abs(fr.table[j, i] - row).max() < 1e-9
    # conjugation swaps the nontrivial characters
    assert fr.involution == (1, 0, 2)


@pytest.mark.parametrize("name", sorted(ORACLE))
def test_fusion_ring_verifies(name):
    w = get_example(name)
    fr, rep = fusion_ring(w)
    assert rep.passed, rep.as_text()
    assert rep["multiplicities_integral"].passed
    assert rep["unit_left"].passed and rep["unit_right"].passed
    assert rep["associative"].passed
    # entries are nonnegative integers
    assert np.abs(fr.table - np.round(fr.table)).max() < 1e-6
    assert fr.table.min() > -1e-6


def test_cube2_fusion_has_two_blocks():
    fr, rep = fusion_ring(get_example("cube2"))
    assert rep.passed
    assert fr.table.shape == (2, 2, 2)


# ---------------------------------------------------------------------------
# fusion of the dual
# ---------------------------------------------------------------------------


@pytest.mark.parametrize("name", ["group_z3", "fun_k2", "cube2", "elem_12", "twist_11"])
def test_dual_fusion_consistency(name):
    rep = dual_fusion_consistency(get_example(name))
    assert rep.passed, rep.as_text()
    assert rep.max_residual <= 1e-8
