import itertools
import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from twomode.blochstate import (
    BlochState,
    angular_expectations,
    bloch_overlap,
    bloch_to_fock,
    bloch_vector,
    population_imbalance,
    uncertainty_product,
)

PI = math.pi

states = st.builds(BlochState, n_atoms=st.integers(1, 30), r=st.floats(0, PI),
                   phi=st.floats(-10, 10), global_phase=st.floats(-50, 50))


def _brute_force_fock(n, r, phi):
    """Expand (cos(r/2) a^dag + e^{i phi} sin(r/2) b^dag)^N |0,0> / sqrt(N!) term by term."""
    amp = np.zeros(n + 1, dtype=complex)
    ca, cb = math.cos(r / 2), np.exp(1j * phi) * math.sin(r / 2)
    for word in itertools.product((0, 1), repeat=n):
        k = sum(word)
        amp[k] += ca ** (n - k) * cb**k
    # (a^dag)^{N-k} (b^dag)^k |0,0> = sqrt((N-k)! k!) |N-k, k>
    k = np.arange(n + 1)
    norm = np.array([math.sqrt(math.factorial(n - j) * math.factorial(j)) for j in k])
    return amp * norm / math.sqrt(math.factorial(n))


def test_fock_examples():
    np.testing.assert_allclose(bloch_to_fock(BlochState(4, 0.0, 1.3)), [1, 0, 0, 0, 0], atol=1e-16)
    south = bloch_to_fock(BlochState(3, PI, 0.4))
    np.testing.assert_allclose(np.abs(south[:-1]), 0, atol=1e-15)
    assert south[-1] == pytest.approx(np.exp(3j * 0.4))
    np.testing.assert_allclose(bloch_to_fock(BlochState(2, PI / 2, 0.0)), [0.5, 1 / math.sqrt(2), 0.5], atol=1e-15)


@pytest.mark.parametrize("n", [1, 2, 3, 5, 8])
def test_fock_vs_brute_force_expansion(n):
    for r, phi in [(0.3, 0.0), (PI / 2, 1.1), (2.9, -2.0)]:
        np.testing.assert_allclose(bloch_to_fock(BlochState(n, r, phi)), _brute_force_fock(n, r, phi), atol=1e-13)


def test_global_phase_multiplies_every_amplitude():
    base = bloch_to_fock(BlochState(5, 1.0, 0.5))
    np.testing.assert_allclose(bloch_to_fock(BlochState(5, 1.0, 0.5, 0.8)), base * np.exp(-0.8j), atol=1e-15)


def test_log_space_branch_matches_direct():
    # N = 21 uses log-space binomials; compare with exact integer arithmetic
    s = BlochState(21, 1.234, 0.7)
    k = np.arange(22)
    direct = np.array([math.sqrt(math.comb(21, j)) for j in k]) * math.cos(0.617) ** (21 - k) * math.sin(0.617) ** k
    np.testing.assert_allclose(np.abs(bloch_to_fock(s)), direct, rtol=1e-12)
    np.testing.assert_allclose(np.abs(bloch_to_fock(BlochState(25, 0.0, 0.0))), np.eye(26)[0], atol=1e-300)


@given(states)
def test_normalisation(s):
    assert np.linalg.norm(bloch_to_fock(s)) == pytest.approx(1.0, abs=1e-10)


def test_bloch_vector_examples():
    np.testing.assert_allclose(bloch_vector(BlochState(1, 0.0, 0.0)).as_array(), [0, 0, 1])
    np.testing.assert_allclose(bloch_vector(BlochState(1, PI / 2, 0.0)).as_array(), [1, 0, 0], atol=1e-16)
    np.testing.assert_allclose(bloch_vector(BlochState(1, PI / 3, PI / 2)).as_array(),
                               [0, math.sqrt(3) / 2, 0.5], atol=1e-15)


@given(states)
def test_consistency_triangle(s):
    expect = np.array(angular_expectations(bloch_to_fock(s)))
    np.testing.assert_allclose(2 / s.n_atoms * expect, bloch_vector(s).as_array(), atol=1e-10)
    assert population_imbalance(s) == pytest.approx(2 * expect[2], abs=1e-10)


def test_population_imbalance_examples():
    assert population_imbalance(BlochState(10, PI / 3, 0.0)) == pytest.approx(5.0)
    assert population_imbalance(BlochState(1, PI / 2, 0.0)) == pytest.approx(0.0, abs=1e-16)


def test_angular_expectation_examples():
    assert angular_expectations(np.array([1, 0, 0, 0])) == pytest.approx((0, 0, 1.5))
    assert angular_expectations(np.array([1, 1]) / math.sqrt(2)) == pytest.approx((0.5, 0, 0), abs=1e-15)


def test_overlap_examples():
    s = BlochState(4, 1.0, 2.0, 3.0)
    assert bloch_overlap(s, s) == pytest.approx(1.0)
    assert abs(bloch_overlap(BlochState(3, 0.0, 0.0), BlochState(3, PI, 0.0))) < 1e-15
    with pytest.raises(ValueError):
        bloch_overlap(BlochState(2, 0.0, 0.0), BlochState(3, 0.0, 0.0))


@given(n=st.integers(1, 12), a=st.tuples(st.floats(0, PI), st.floats(-5, 5), st.floats(-9, 9)),
       b=st.tuples(st.floats(0, PI), st.floats(-5, 5), st.floats(-9, 9)))
def test_overlap_matches_fock_inner_product(n, a, b):
    s1, s2 = BlochState(n, *a), BlochState(n, *b)
    ov = bloch_overlap(s1, s2)
    assert ov == pytest.approx(np.vdot(bloch_to_fock(s1), bloch_to_fock(s2)), abs=1e-10)
    assert abs(ov) <= 1 + 1e-12


def test_overlap_unit_only_for_same_ray():
    s = BlochState(3, 1.0, 0.5)
    assert abs(bloch_overlap(s, BlochState(3, 1.0, 0.5, 2.0))) == pytest.approx(1.0)
    assert abs(bloch_overlap(s, BlochState(3, 1.01, 0.5))) < 1 - 1e-6


@given(states)
def test_minimum_uncertainty(s):
    lhs, rhs = uncertainty_product(s)
    assert lhs == pytest.approx(rhs, abs=1e-10)


def test_reference_state_uncertainty():
    n = 6
    lhs, rhs = uncertainty_product(BlochState(n, 0.0, 0.0))
    assert lhs == pytest.approx(n**2 / 16) and rhs == pytest.approx(n**2 / 16)


@pytest.mark.parametrize("n", [2, 4, 7])
def test_balanced_fock_state_violates_equality(n):
    f = np.zeros(n + 1)
    f[n // 2] = 1.0
    lhs, rhs = uncertainty_product(BlochState(n, 0.0, 0.0), f=f)
    assert lhs > rhs + 0.5


def test_state_validation():
    with pytest.raises(ValueError):
        BlochState(0, 0.0, 0.0)
    with pytest.raises(ValueError):
        BlochState(2, 4.0, 0.0)
