import time
from itertools import product

import numpy as np
import pytest

from quditfredkin.optics import build_fredkin_interferometer, pswap_gate
from quditfredkin.synthesis import verify_synthesis


def ryser_permanent(m):
    """Ryser's inclusion-exclusion formula; independent of the expansion used in the package."""
    m = np.asarray(m, dtype=complex)
    n = m.shape[0]
    total = 0j
    for subset in product((0, 1), repeat=n):
        k = sum(subset)
        if k == 0:
            continue
        cols = [j for j, s in enumerate(subset) if s]
        total += (-1) ** k * np.prod(m[:, cols].sum(axis=1))
    return (-1) ** n * total


def random_unitary(n, rng):
    z = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    q, r = np.linalg.qr(z)
    return q * (np.diag(r) / np.abs(np.diag(r)))


@pytest.fixture(scope="session")
def synthesis_reports():
    return {n: verify_synthesis(n) for n in range(1, 9)}


@pytest.fixture(scope="session")
def pswap():
    return pswap_gate()


@pytest.fixture(scope="session")
def fredkin():
    return build_fredkin_interferometer()


def ket(basis, text):
    """Single-photon vector from terms like ``"H9' -V10"`` over ``basis``."""
    v = np.zeros(len(basis), dtype=complex)
    for term in text.split():
        sign = -1.0 if term.startswith("-") else 1.0
        term = term.lstrip("+-")
        v[basis.index((term[1:], term[0]))] += sign
    return v


def product_ket(basis, coeff, *factors):
    """Tensor product of single-photon kets, one factor per photon."""
    out = np.array(coeff, dtype=complex)
    for text in factors:
        out = np.multiply.outer(out, ket(basis, text))
    return out


@pytest.fixture(scope="session")
def certificates(pswap, fredkin):
    from quditfredkin.fock import certify_coincidence_equivalence

    return {g.name: certify_coincidence_equivalence(g) for g in (pswap, fredkin)}


_SESSION_START = time.perf_counter()
FULL_RUN_BUDGET_S = 60.0


def pytest_terminal_summary(terminalreporter):
    elapsed = time.perf_counter() - _SESSION_START
    verdict = "PASS" if elapsed < FULL_RUN_BUDGET_S else "FAIL"
    terminalreporter.write_line(
        f"{verdict} full test run: {elapsed:.1f} s (budget {FULL_RUN_BUDGET_S:.0f} s)"
    )
