from pathlib import Path

import numpy as np
import pytest

from nklab.lie import build_split_su2su2, build_split_su3
from nklab.nk import SolutionParams, closed_form



@pytest.fixture(scope="session")
def su3_split():
    return build_split_su3()


@pytest.fixture(scope="session")
def su2su2_split():
    return build_split_su2su2()


@pytest.fixture(scope="session")
def canonical():
    return closed_form(SolutionParams.canonical(1.0))


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


@pytest.fixture(scope="session")
def golden():
    return Path(__file__).parent / "golden"
