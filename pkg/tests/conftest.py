import numpy as np
import pytest

from circuitgp import FULL_GATE_SET, cgp_params, parse_circuit


@pytest.fixture
def worked_cgp():
    """Three-gate reference circuit: OR, AND feeding an XOR."""
    return parse_circuit(
        "circuit((1,2,3), ((4,OR,1,2), (5,AND,2,3), (6,XOR,4,5)))", "cgp"
    )


@pytest.fixture
def worked_lgp():
    return parse_circuit(
        "[(2, 1, 3, 4), (1, 2, 4, 5), (5, 1, 1, 2)]", "lgp", n_inputs=3
    )


@pytest.fixture
def tiny_params():
    # 900-genotype space, fully enumerable
    return cgp_params(2, 2, 2)


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


@pytest.fixture
def full_set():
    return FULL_GATE_SET
