import numpy as np
import pytest

from gaussfisher.cavity import compose_one_segment, perturbative_overlaps, rindler_overlaps
from gaussfisher.bogoliubov import block_from_coefficients, synthetic_unitary_series


def sigma_orders_from_blocks(series, k, k_prime, psi_k, psi_kp, phi):
    """Reduced covariance orders assembled block by block.

    Collects the theta powers of the transformed two-mode covariance from
    the 2x2 coefficient blocks directly, without ever forming the full
    transformation matrix; an independent route against the full-matrix
    order collection.
    """
    n = series.n_max
    probe = (k, k_prime)
    values = {
        (k, k): np.asarray(psi_k, float),
        (k, k_prime): np.asarray(phi, float),
        (k_prime, k): np.asarray(phi, float).T,
        (k_prime, k_prime): np.asarray(psi_kp, float),
    }

    def m0(i):
        return block_from_coefficients(series.G[i - 1], 0.0)

    def m1(i, j):
        return block_from_coefficients(series.alpha1[i - 1, j - 1], series.beta1[i - 1, j - 1])

    def m2(i, j):
        return block_from_coefficients(series.alpha2[i - 1, j - 1], series.beta2[i - 1, j - 1])

    dim = 2 * len(probe)
    s0 = np.zeros((dim, dim))
    s1 = np.zeros((dim, dim))
    s2 = np.zeros((dim, dim))
    for bi, i in enumerate(probe):
        for bj, j in enumerate(probe):
            sl = (slice(2 * bi, 2 * bi + 2), slice(2 * bj, 2 * bj + 2))
            s0[sl] = m0(i) @ values[(i, j)] @ m0(j).T
            c1 = np.zeros((2, 2))
            for m in probe:
                c1 += m1(i, m) @ values[(m, j)] @ m0(j).T
                c1 += m0(i) @ values[(i, m)] @ m1(j, m).T
            s1[sl] = c1
            c2 = np.zeros((2, 2))
            for m in probe:
                c2 += m2(i, m) @ values[(m, j)] @ m0(j).T
                c2 += m0(i) @ values[(i, m)] @ m2(j, m).T
            for m in probe:
                for mp in probe:
                    c2 += m1(i, m) @ values[(m, mp)] @ m1(j, mp).T
            for spectator in range(1, n + 1):
                if spectator in probe:
                    continue
                c2 += m1(i, spectator) @ m1(j, spectator).T
            s2[sl] = c2
    return s0, s1, s2


def alpha1_closed_form(m: int, n: int) -> float:
    """First-order inertial-to-accelerated mode-mixing coefficient.

    Hand-derived by expanding the overlap integrals to first order in h:
    sqrt(mn) (1 - (-1)^(m+n)) / (pi^2 (n - m)^3) off the diagonal.
    Serves as an independent oracle for the quadrature + fit pipeline.
    """
    if m == n:
        return 0.0
    return np.sqrt(m * n) * (1 - (-1) ** (m + n)) / (np.pi**2 * (n - m) ** 3)


def beta1_closed_form(m: int, n: int) -> float:
    """First-order pair-creation coefficient, same derivation:
    sqrt(mn) (1 - (-1)^(m+n)) / (pi^2 (n + m)^3)."""
    return np.sqrt(m * n) * (1 - (-1) ** (m + n)) / (np.pi**2 * (n + m) ** 3)


@pytest.fixture(scope="session")
def overlap_series_10():
    return perturbative_overlaps(1.0, 10)


@pytest.fixture(scope="session")
def overlap_series_60():
    # deep mode ladder: keeps truncation noise at trivial-channel points
    # (integer u) below the comparison tolerances of the sweep criteria
    return perturbative_overlaps(1.0, 60)


@pytest.fixture(scope="session")
def cavity_series_u03(overlap_series_10):
    return compose_one_segment(overlap_series_10, 0.3)


@pytest.fixture(scope="session")
def exact_overlaps_h005():
    return {n: rindler_overlaps(1.0, 0.05, n) for n in (5, 10, 20)}


@pytest.fixture()
def rng():
    return np.random.default_rng(20240817)


@pytest.fixture(scope="session")
def unitary_series():
    return synthetic_unitary_series(6, np.random.default_rng(11), strength=0.3)


@pytest.fixture(scope="session")
def unitary_series_diagfree():
    return synthetic_unitary_series(6, np.random.default_rng(12), strength=0.3, zero_diagonal=True)
