import numpy as np
import pytest
from hypothesis import settings

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")


def random_spd(rng, dim, spread=1.0):
    """``G^T G + I`` with entries of G scaled by ``spread``."""
    G = rng.standard_normal((dim, dim)) * spread
    return G.T @ G + np.eye(dim)


def jf_oracle(F):
    """Symplectic eigenvalues as positive imaginary parts of eig(J F), descending."""
    n = F.shape[0] // 2
    J = np.block([[np.zeros((n, n)), np.eye(n)], [-np.eye(n), np.zeros((n, n))]])
    ev = np.linalg.eigvals(J @ F).imag
    return np.sort(ev[ev > 0])[::-1]


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def pytest_terminal_summary(terminalreporter):
    mod = __import__("sys").modules.get("test_acceptance")
    results = getattr(mod, "RESULTS", None)
    if results:
        terminalreporter.section("acceptance criteria")
        for cid in sorted(results):
            terminalreporter.write_line(results[cid])
