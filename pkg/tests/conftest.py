"""Shared fixtures: cached example algebras reused across test modules."""

from functools import lru_cache

import pytest

from wka import (
    crossed_product,
    cube_family,
    cyclic_groupoid,
    cyclic_shift_action,
    disjoint_union,
    dual_elementary,
    elementary,
    elementary_twist,
    groupoid_algebra,
    groupoid_function_algebra,
    pair_groupoid,
    random_cocycle,
)


@lru_cache(maxsize=None)
def get_example(name):
    """Build one of the named example algebras (cached per session)."""
    builders = {
        "group_z2": lambda: groupoid_algebra(cyclic_groupoid(2)),
        "group_z3": lambda: groupoid_algebra(cyclic_groupoid(3)),
        "group_k2": lambda: groupoid_algebra(pair_groupoid(2)),
        "group_k3": lambda: groupoid_algebra(pair_groupoid(3)),
        "fun_z2": lambda: groupoid_function_algebra(cyclic_groupoid(2)),
        "fun_k2": lambda: groupoid_function_algebra(pair_groupoid(2)),
        "fun_k3": lambda: groupoid_function_algebra(pair_groupoid(3)),
        "fun_disc": lambda: groupoid_function_algebra(
            disjoint_union(cyclic_groupoid(2), cyclic_groupoid(1))
        ),
        "elem_12": lambda: elementary((1, 2)),
        "elem_11": lambda: elementary((1, 1)),
        "dualelem_12": lambda: dual_elementary((1, 2)),
        "cube2": lambda: cube_family(2),
        "cube3": lambda: cube_family(3),
        "crossed2": lambda: crossed_product(*cyclic_shift_action(2)),
        "twist_11": lambda: elementary_twist(elementary((1, 1)), random_cocycle(2, seed=7)),
        "twist_12": lambda: elementary_twist(elementary((1, 2)), random_cocycle(2, seed=3)),
    }
    return builders[name]()


@pytest.fixture
def example():
    return get_example
