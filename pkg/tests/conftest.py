import os
import random
import sys

import pytest

sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from complexes import BoundedComplexSpec, Variant, enumerate_complex  # noqa: E402
from lattice import standard_augmented_frame, standard_frame  # noqa: E402


@pytest.fixture
def rng():
    return random.Random(20240)


@pytest.fixture(scope="session")
def ba2_ball2():
    return enumerate_complex(BoundedComplexSpec(2, 0, 2, Variant.BA))


@pytest.fixture(scope="session")
def ba3_ball1():
    return enumerate_complex(BoundedComplexSpec(3, 0, 1, Variant.BA))


@pytest.fixture
def frame3():
    return standard_frame(3)


@pytest.fixture
def augmented4():
    return standard_augmented_frame(4)
