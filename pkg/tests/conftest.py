import numpy as np
import pytest

from bellbound import ChSlice

# The bundled demo statistics (a down-conversion pair source measured with
# two settings per side; see src/bellbound/data/demo_slice.json).
DEMO_SLICE = ChSlice(
    j00=0.3811,
    j01=0.3593,
    j10=0.3789,
    j11=0.0671,
    mA0=0.4025,
    mA1=0.4806,
    mB0=0.4671,
    mB1=0.5058,
)

PAULI_Y = np.array([[0.0, -1.0j], [1.0j, 0.0]])
SIGMA_YY = np.kron(PAULI_Y, PAULI_Y)


def concurrence_eigvals_oracle(matrix: np.ndarray) -> float:
    """Independent concurrence oracle: general (non-Hermitian) eigensolver.

    Directly takes the decreasingly ordered eigenvalues of
    rho (sy x sy) rho^T (sy x sy) -- a different code path from the library's
    Hermitian-route implementation.
    """
    lam = np.linalg.eigvals(matrix @ SIGMA_YY @ matrix.conj() @ SIGMA_YY)
    roots = np.sqrt(np.sort(np.abs(lam.real))[::-1])
    return float(max(0.0, 2.0 * roots[0] - roots.sum()))


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(20260808)
