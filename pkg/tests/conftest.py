import numpy as np
import pytest

from scperf import ArmaModel

# lines recorded by test_acceptance.py, echoed in the terminal summary
ACCEPTANCE_LINES: list[str] = []


def _poly_from_reciprocal_roots(lams) -> np.ndarray:
    """Coefficients (lowest first) of prod_i (1 - lam_i z)."""
    c = np.array([1.0 + 0j])
    for lam in lams:
        c = np.convolve(c, [1.0, -lam])
    return c.real


def random_reciprocal_roots(rng, k, rmin=0.05, rmax=0.95):
    """k reciprocal roots inside the unit disk, real or in conjugate pairs."""
    lams = []
    while len(lams) < k:
        r = rng.uniform(rmin, rmax)
        if k - len(lams) >= 2 and rng.random() < 0.5:
            ang = rng.uniform(0.1, np.pi - 0.1)
            lams += [r * np.exp(1j * ang), r * np.exp(-1j * ang)]
        else:
            lams.append(r * rng.choice([-1.0, 1.0]))
    return lams


def random_model(rng, max_p=3, max_q=2, rmax=0.95, sigma=None, mu=None) -> ArmaModel:
    p = int(rng.integers(0, max_p + 1))
    q = int(rng.integers(0, max_q + 1))
    ar = -_poly_from_reciprocal_roots(random_reciprocal_roots(rng, p, rmax=rmax))[1:]
    ma = _poly_from_reciprocal_roots(random_reciprocal_roots(rng, q, rmax=rmax))[1:]
    return ArmaModel(
        mu=float(rng.uniform(0, 10)) if mu is None else mu,
        phi=ar,
        theta=ma,
        sigma_eps=float(rng.uniform(0.5, 3)) if sigma is None else sigma,
    )


@pytest.fixture
def rng():
    return np.random.default_rng(20240515)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
