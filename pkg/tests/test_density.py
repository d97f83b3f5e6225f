import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from ktdecay import density as dens
from ktdecay.errors import DomainError, ValidationError


def test_validate_examples():
    dens.validate(dens.point_mass(0))
    dens.from_coefficients([0.5, 0.5])
    with pytest.raises(ValidationError):
        dens.from_coefficients([0.5, 0.75])
    with pytest.raises(ValidationError):
        dens.from_coefficients([1.5, -0.5])


def test_coefficients_are_read_only():
    a = dens.lazy_bernoulli(0.5)
    with pytest.raises(ValueError):
        a.coefficients[0] = 1.0


def test_aperiodic_examples():
    ok, info = dens.is_aperiodic(dens.lazy_bernoulli(0.5), full_output=True)
    assert ok and info["witness"] == 0
    even = dens.from_coefficients([0.5, 0, 0.5])
    ok, info = dens.is_aperiodic(even, full_output=True)
    assert not ok and info["gcd"] == 2
    # phi(-1) = 1 puts -1 in the spectrum
    assert dens.phi(even, -1.0) == pytest.approx(1.0)
    assert dens.is_aperiodic(dens.log_example(1000))


def test_aperiodic_without_consecutive_witness():
    a = dens.from_coefficients([0, 0, 0.5, 0.5 * 0, 0, 0.5][:6])
    # support {2, 5}: gcd 3
    assert not dens.is_aperiodic(a)
    b = dens.from_coefficients([0, 0, 0.5, 0.25, 0, 0, 0, 0.25][:8])
    ok, info = dens.is_aperiodic(b, full_output=True)
    assert ok


def test_singleton_support_is_periodic():
    ok, info = dens.is_aperiodic(dens.point_mass(3), full_output=True)
    assert not ok and "singleton" in info["reason"]


def test_phi_examples():
    assert dens.phi(dens.lazy_bernoulli(0.5), 1.0) == 1.0
    assert dens.phi(dens.lazy_bernoulli(0.5), -1.0) == pytest.approx(0.0, abs=1e-16)
    assert dens.phi(dens.log_example(), -1.0) == pytest.approx(-1 + 2 * math.log(2), rel=1e-14)
    assert dens.phi(dens.log_example(), 1.0) == 1.0


def test_phi_log_example_partial_sum_oracle():
    a = dens.log_example(10**6)
    explicit = dens.Density(a.coefficients, a.tail_mass_bound)
    val, radius = dens.phi(explicit, -1.0, full_output=True)
    assert radius == 1e-6
    assert val == pytest.approx(-1 + 2 * math.log(2), abs=1e-8)


def test_phi_domain():
    with pytest.raises(DomainError):
        dens.phi(dens.lazy_bernoulli(), 1.01)


def test_closed_form_matches_partial_sums_on_circle():
    a = dens.log_example(20_000)
    explicit = dens.Density(a.coefficients, a.tail_mass_bound)
    rng = np.random.default_rng(1)
    z = np.exp(1j * rng.uniform(-np.pi, np.pi, 1000))
    diff = np.abs(dens.phi(a, z) - dens.phi(explicit, z))
    assert np.all(diff <= a.tail_mass_bound)


def test_deficit_matches_one_minus_phi():
    theta = np.linspace(-3, 3, 41)
    for a in (dens.lazy_bernoulli(0.3), dens.geometric(0.7), dens.log_example(10**4)):
        direct = 1 - dens.phi(a, np.exp(1j * theta))
        assert np.allclose(dens.deficit(a, theta), direct, atol=1e-12)
        explicit = dens.Density(a.coefficients, a.tail_mass_bound)
        assert np.allclose(dens.deficit(explicit, theta), direct, atol=2 * a.tail_mass_bound + 1e-12)


def test_convolve_examples():
    b = dens.geometric(0.5)
    c = dens.convolve(dens.point_mass(0), b)
    assert np.array_equal(c.coefficients, b.coefficients)
    half = dens.lazy_bernoulli(0.5)
    assert np.allclose(dens.convolve(half, half).coefficients, [0.25, 0.5, 0.25])
    a = dens.log_example(100)
    s = dens.convolve(a, dens.point_mass(1))
    assert np.array_equal(s.coefficients[1:], a.coefficients)
    assert s.coefficients[0] == 0


def test_convolve_tail_keeps_mass():
    a, b = dens.log_example(50), dens.geometric(0.9)
    c = dens.convolve(a, b)
    assert c.tail_mass_bound == pytest.approx(a.tail_mass_bound + b.tail_mass_bound
                                              - a.tail_mass_bound * b.tail_mass_bound)
    dens.validate(c)


@settings(max_examples=40, deadline=None)
@given(st.lists(st.floats(0, 1), min_size=1, max_size=8), st.lists(st.floats(0, 1), min_size=1, max_size=8),
       st.lists(st.floats(0, 1), min_size=1, max_size=8))
def test_convolve_assoc_comm(x, y, z):
    def mk(v):
        v = np.asarray(v) + 1e-3
        return dens.from_coefficients(v / math.fsum(v))

    a, b, c = mk(x), mk(y), mk(z)
    ab = dens.convolve(a, b).coefficients
    assert np.allclose(ab, dens.convolve(b, a).coefficients, atol=1e-14, rtol=0)
    left = dens.convolve(dens.convolve(a, b), c).coefficients
    right = dens.convolve(a, dens.convolve(b, c)).coefficients
    assert np.allclose(left, right, atol=1e-14, rtol=0)


def test_builtin_families():
    a = dens.builtin_family("log_example", N=10**6)
    assert a.tail_mass_bound == 1e-6
    assert math.fsum(a.coefficients) + a.tail_mass_bound == pytest.approx(1, abs=1e-12)
    assert np.array_equal(dens.builtin_family("lazy_bernoulli", p=0.5).coefficients, [0.5, 0.5])
    g = dens.builtin_family("geometric", r=0.5)
    N = len(g) - 1
    assert np.allclose(g.coefficients, 2.0 ** -(np.arange(N + 1) + 1.0), rtol=1e-15)
    assert g.tail_mass_bound == 2.0 ** -(N + 1)
    with pytest.raises(DomainError):
        dens.builtin_family("geometric", r=1.5)
    with pytest.raises(DomainError):
        dens.builtin_family("nope")


@pytest.mark.parametrize("a", [dens.lazy_bernoulli(0.5), dens.geometric(0.6), dens.log_example(10**4)])
def test_boundary_avoids_circle_away_from_one(a):
    theta = np.concatenate([np.linspace(1e-2, np.pi, 2000), -np.linspace(1e-2, np.pi, 2000)])
    assert np.min(np.abs(dens.deficit(a, theta))) > 0
    assert np.max(np.abs(dens.phi(a, np.exp(1j * theta)))) < 1


def test_modulus_bounded_on_disk():
    rng = np.random.default_rng(2)
    z = np.sqrt(rng.uniform(0, 1, 500)) * np.exp(1j * rng.uniform(-np.pi, np.pi, 500))
    for a in (dens.lazy_bernoulli(), dens.geometric(0.9), dens.log_example()):
        assert np.all(np.abs(dens.phi(a, z)) <= 1 + 1e-12)
