"""pytest fixtures for the G∼ workbench tests"""

import json
import math

import pytest
from hypothesis import settings

from src.algebra import SubalgebraWitness, direct_product, make_chain
from src.config import Config, set_config
from src.monadic import MonadicGAlgebra, attach_quantifiers, enumerate_m_rel_complete

settings.register_profile("workbench", derandomize=True, deadline=None, max_examples=40)
settings.load_profile("workbench")


@pytest.fixture(autouse=True)
def reset_config():
    """Every test starts from the default configuration"""
    set_config(Config())
    yield
    set_config(Config())


def attach(A, elements) -> MonadicGAlgebra:
    return attach_quantifiers(A, SubalgebraWitness(A, elements))


def chain_shapes(max_size):
    """Non-increasing tuples of chain sizes ≥ 2 with product ≤ max_size, smallest product first"""
    shapes = []

    def grow(prefix, largest, product):
        if prefix:
            shapes.append(tuple(prefix))
        for n in range(min(largest, max_size // product), 1, -1):
            grow(prefix + [n], n, product * n)

    grow([], max_size, 1)
    return sorted(shapes, key=lambda s: (math.prod(s), s))


def monadic_algebras(max_size):
    """Every monadic algebra on a product of chains up to max_size, one per m-relatively complete range"""
    for shape in chain_shapes(max_size):
        A = direct_product([make_chain(n, validate=False) for n in shape], validate=False)
        for C in enumerate_m_rel_complete(A):
            yield shape, attach_quantifiers(A, C, validate=False)


@pytest.fixture
def c2():
    return make_chain(2)


@pytest.fixture
def c3():
    return make_chain(3)


@pytest.fixture
def c4():
    return make_chain(4)


@pytest.fixture
def c5():
    return make_chain(5)


@pytest.fixture
def c3_squared(c3):
    return direct_product([c3, c3])


@pytest.fixture
def c3_full(c3):
    """C_3 with ∃ = ∀ = identity"""
    return attach(c3, [0, 1, 2])


@pytest.fixture
def c3_bounds(c3):
    return attach(c3, [0, 2])


@pytest.fixture
def c2_full(c2):
    return attach(c2, [0, 1])


@pytest.fixture
def c4_full(c4):
    """C_4 = {0, a, ∼a, 1} with full range"""
    return attach(c4, [0, 1, 2, 3])


@pytest.fixture
def c4_bounds(c4):
    return attach(c4, [0, 3])


@pytest.fixture
def c5_mid(c5):
    """C_5 with range {0, d, 1}"""
    return attach(c5, [0, 2, 4])


@pytest.fixture
def diagonal_algebra(c3_squared):
    """C_3² with the diagonal {(0,0), (d,d), (1,1)} as range"""
    return attach(c3_squared, [0, 4, 8])


@pytest.fixture
def bounds_algebra(c3_squared):
    """C_3² with range {0, 1}; not in CMG∼"""
    return attach(c3_squared, [0, 8])


@pytest.fixture
def product_full(c3_squared):
    """C_3² with ∃ = ∀ = identity; not subdirectly irreducible"""
    return attach(c3_squared, range(9))


@pytest.fixture
def algebra_file(tmp_path):
    """Write an algebra to a JSON file and return its path"""
    def write(M, name="algebra.json"):
        path = tmp_path / name
        path.write_text(json.dumps(M.to_dict()))
        return str(path)
    return write
