import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.linalg import expm

from cavityent.amplitudes import amplitudes, binomial_amplitude, damping_amplitude, xi_chi
from cavityent.errors import DomainError


def test_initial_amplitudes():
    a = amplitudes(0.0, 1.0)
    assert (a.xi, a.chi, a.vartheta) == (1.0, 0.0, 0.0)


def test_amplitudes_at_ln2():
    a = amplitudes(math.log(2), 1.0)
    assert a.xi == pytest.approx(1 / math.sqrt(2), abs=1e-15)
    assert a.chi == pytest.approx(1 / math.sqrt(2), abs=1e-15)
    assert a.xi == pytest.approx(0.7071068, abs=5e-8)


def test_full_decay_limit():
    a = amplitudes(math.inf)
    assert (a.xi, a.chi, a.vartheta) == (0.0, 1.0, 1.0)


def test_kappa_scales_time():
    assert amplitudes(2.0, 0.5).xi == pytest.approx(amplitudes(1.0, 1.0).xi, rel=1e-15)


@pytest.mark.parametrize("t,kappa", [(-0.1, 1.0), (1.0, 0.0), (1.0, -2.0), (math.nan, 1.0)])
def test_domain_errors(t, kappa):
    with pytest.raises(DomainError):
        amplitudes(t, kappa)


@settings(max_examples=200, deadline=None)
@given(st.floats(0, 50), st.floats(0.01, 10))
def test_amplitude_set_invariants(t, kappa):
    a = amplitudes(t, kappa)
    assert abs(a.xi**2 + a.chi**2 - 1) < 1e-12
    assert abs(a.vartheta - a.chi**2) < 1e-12
    assert 0 <= a.xi <= 1 and 0 <= a.chi <= 1


def test_monotonicity():
    ts = np.linspace(0, 10, 200)
    xs, cs = zip(*(xi_chi(t) for t in ts))
    assert np.all(np.diff(xs) < 0)
    assert np.all(np.diff(cs) > 0)


def test_two_photon_middle_coefficient():
    assert damping_amplitude(2, 1, math.log(2)) == pytest.approx(1 / math.sqrt(2), abs=1e-15)


@pytest.mark.parametrize("t", [0.0, 0.3, 1.7, 5.0])
def test_single_photon_reproduces_xi_chi(t):
    xi, chi = xi_chi(t)
    assert damping_amplitude(1, 0, t) == xi
    assert damping_amplitude(1, 1, t) == chi


def test_three_photon_normalisation():
    assert sum(damping_amplitude(3, k, 0.8) ** 2 for k in range(4)) == pytest.approx(1, abs=1e-15)


def test_normalisation_grid():
    for n in range(13):
        for t in np.linspace(0, 10, 41):
            total = sum(damping_amplitude(n, k, t) ** 2 for k in range(n + 1))
            assert abs(total - 1) < 1e-12


def test_two_photon_last_coefficient_is_vartheta():
    for t in np.linspace(0, 10, 101):
        assert abs(damping_amplitude(2, 2, t) - amplitudes(t).vartheta) < 1e-12


@pytest.mark.parametrize("n,k", [(-1, 0), (2, 3), (13, 0), (2, -1)])
def test_invalid_photon_numbers(n, k):
    with pytest.raises(DomainError):
        damping_amplitude(n, k, 1.0)


def _beam_splitter_coefficients(n, xi, chi):
    """Evolve |n, 0> under exp(theta (a^dag b - a b^dag)) with cos(theta) = xi.

    The generator conserves a^dag a + b^dag b, so truncating both modes at n is exact.
    """
    D = n + 1
    a = np.diag(np.sqrt(np.arange(1, D)), 1)
    I = np.eye(D)
    A, B = np.kron(a, I), np.kron(I, a)
    theta = math.atan2(chi, xi)
    U = expm(theta * (A.T @ B - A @ B.T))
    psi0 = np.zeros(D * D)
    psi0[n * D] = 1.0
    out = U @ psi0
    return [out[(n - k) * D + k] for k in range(n + 1)]


@pytest.mark.parametrize("n", [1, 2, 3, 5, 8])
@pytest.mark.parametrize("t", [0.2, math.log(2), 2.5])
def test_binomial_form_matches_beam_splitter_map(n, t):
    xi, chi = xi_chi(t)
    oracle = _beam_splitter_coefficients(n, xi, chi)
    ours = [binomial_amplitude(n, k, xi, chi) for k in range(n + 1)]
    # sign convention of the generator only changes phases (-1)^k
    np.testing.assert_allclose(np.abs(oracle), ours, atol=1e-12)
