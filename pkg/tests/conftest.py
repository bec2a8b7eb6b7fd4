import sys

import numpy as np
import pytest
from hypothesis import strategies as st
from scipy.linalg import expm

from paramcav.fixtures import bs_state, cm_state, vacuum_state
from paramcav.gaussian import CovarianceMatrix, default_modes, symplectic_form

FIXTURE_DIR = __import__("pathlib").Path(__file__).resolve().parent.parent / "fixtures"


@pytest.fixture
def cm():
    return cm_state()


@pytest.fixture
def bs():
    return bs_state()


@pytest.fixture
def vac3():
    return vacuum_state()


def random_symplectic(rng, n, scale=0.5):
    h = rng.normal(size=(2 * n, 2 * n)) * scale
    return expm(symplectic_form(n) @ (h + h.T) / 2)


def random_physical(rng, n, max_nu=3.0, scale=0.5):
    """S diag(nu) S^T with all nu >= 1."""
    nu = rng.uniform(1.0, max_nu, size=n)
    s = random_symplectic(rng, n, scale)
    return CovarianceMatrix(default_modes(n), s @ np.diag(np.repeat(nu, 2)) @ s.T), np.sort(nu)


seeds = st.integers(min_value=0, max_value=2**32 - 1)


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(mod.RESULTS):
        terminalreporter.write_line(mod.RESULTS[n])
