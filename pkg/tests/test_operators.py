import math

import numpy as np
import pytest

from ktdecay import density as dens
from ktdecay import operators as ops
from ktdecay.errors import ApplicabilityError, SingularityError, ValidationError  # noqa: F401

LAZY = ops.ToeplitzDensity(dens.lazy_bernoulli(0.5))
LOG = ops.ToeplitzDensity(dens.log_example())
CURVE = ops.power_curve(2.0)
ID = ops.DiagonalSpectrum()


def lazy_closed(n):
    return math.exp(0.5 * n * math.log(n) - 0.5 * (n + 1) * math.log(n + 1))


def brute_distance(T, theta, k=2_000_001):
    t = np.linspace(-T.t_max, T.t_max, k)
    return float(np.min(np.abs(np.exp(1j * theta) - T.lam(t))))


def test_diagonal_appends_one():
    T = ops.DiagonalSpectrum(np.array([0.5]))
    assert 1 in T.points
    with pytest.raises(ValidationError):
        ops.DiagonalSpectrum(np.array([1j]))


def test_curve_rejects_circle_contact():
    with pytest.raises(ValidationError):
        ops.SpectralCurve(lambda t: -np.expm1(1j * t), math.pi, "circle")


def test_distance_examples():
    for th in (1e-3, 0.5, math.pi):
        assert ops.spectrum_distance(ID, th) == pytest.approx(2 * math.sin(th / 2), rel=1e-14)
    assert ops.spectrum_distance(LAZY, math.pi) == pytest.approx(1.0, rel=1e-12)
    half = ops.DiagonalSpectrum(np.array([1, 0.5]))
    assert ops.spectrum_distance(half, math.pi) == pytest.approx(1.5, rel=1e-15)


@pytest.mark.parametrize("T", [LAZY, LOG, CURVE])
@pytest.mark.parametrize("theta", [0.05, -0.4, 2.0])
def test_distance_against_dense_grid(T, theta):
    d = ops.spectrum_distance(T, theta)
    brute = brute_distance(T, theta)
    assert d <= brute * (1 + 1e-12)
    assert d == pytest.approx(brute, rel=1e-6)


def test_resolvent_examples():
    assert ops.resolvent_norm(ID, math.pi) == pytest.approx(0.5)
    assert ops.resolvent_norm(LAZY, math.pi) == pytest.approx(1.0)
    with pytest.raises(SingularityError):
        ops.resolvent_norm(ID, 0.0)


def test_resolvent_lower_bound():
    theta = np.geomspace(1e-5, math.pi, 30)
    for T in (LAZY, LOG, CURVE, ID):
        r = ops.resolvent_norm(T, theta)
        assert np.all(r >= 1 / np.abs(np.expm1(1j * theta)) * (1 - 1e-12))


def test_envelope_identity():
    eps = np.geomspace(1e-5, 3, 20)
    assert np.allclose(ops.resolvent_envelope(ID, eps), 1 / (2 * np.sin(eps / 2)), rtol=1e-12)


def test_envelope_power_curve_exponent():
    eps = np.geomspace(1e-5, 1e-3, 9)
    env = ops.resolvent_envelope(CURVE, eps)
    slope = np.polyfit(np.log(eps), np.log(env), 1)[0]
    assert slope == pytest.approx(-2, rel=0.05)


def test_envelope_log_example_edge():
    assert ops.resolvent_envelope(LOG, 1e-4) == pytest.approx(ops.resolvent_norm(LOG, 1e-4), rel=1e-6)


def test_envelope_monotone_and_dominates():
    eps = np.geomspace(1e-4, math.pi, 40)
    for T in (LAZY, LOG, CURVE):
        env = ops.resolvent_envelope(T, eps)
        assert np.all(np.diff(env) <= 0)
        assert np.all(env >= ops.resolvent_norm(T, eps) * (1 - 1e-12))
        assert np.all(env >= ops.resolvent_norm(T, -eps) * (1 - 1e-12))
        assert np.all(env >= 1 / eps)


def test_envelope_rate_is_majorant():
    m = ops.envelope_rate(CURVE, eps_min=1e-4)
    m.validate()
    assert m.resolvent_majorant


def test_decay_examples():
    T = ops.DiagonalSpectrum(np.array([1, 0.9]))
    assert ops.decay_norm(T, 10) == pytest.approx(0.9 ** 10 * 0.1, rel=1e-14)
    assert ops.decay_norm(LAZY, 1) == pytest.approx(0.5, rel=1e-12)
    assert ops.decay_norm(LAZY, 4) == pytest.approx(16 / 5 ** 2.5, rel=1e-10)
    assert ops.decay_norm(ops.DiagonalSpectrum(np.array([0, 1])), 3) == 0.0


@pytest.mark.parametrize("n", [2, 17, 300, 5000])
def test_lazy_decay_closed_form(n):
    assert ops.decay_norm(LAZY, n) == pytest.approx(lazy_closed(n), rel=1e-10)


def test_decay_profile_examples():
    T = ops.DiagonalSpectrum(np.array([1, 0.9]))
    assert np.allclose(ops.decay_profile(T, [1, 2, 3]).values, [0.09, 0.081, 0.0729], rtol=1e-14)
    assert np.allclose(ops.decay_profile(LAZY, [1, 4]).values, [0.5, 0.286217], rtol=2e-6)
    v = ops.decay_profile(LOG, [1000, 10_000]).values
    mid = 10 * math.log(1e3) / math.log(1e4)
    assert 0.9 * mid <= v[0] / v[1] <= 1.1 * mid


def test_decay_profile_rejects_unsorted():
    with pytest.raises(ValueError):
        ops.decay_profile(LAZY, [4, 1])


def test_decay_monotone_in_n():
    for T in (LAZY, LOG, CURVE):
        v = np.array([ops.decay_norm(T, n) for n in range(0, 40)])
        assert np.all(np.diff(v) <= 1e-12)


def test_decay_maximum_modulus_consistency():
    # sup over a filled-disk sample of the symbol image never beats the boundary sup
    rng = np.random.default_rng(3)
    r = np.sqrt(rng.uniform(0, 1, 200_000))
    z = r * np.exp(1j * rng.uniform(-np.pi, np.pi, r.size))
    for a in (dens.lazy_bernoulli(0.5), dens.geometric(0.5)):
        lam = dens.phi(a, z)
        for n in (1, 5, 20):
            inner = np.max(np.abs(lam) ** n * np.abs(1 - lam))
            assert inner <= ops.decay_norm(ops.ToeplitzDensity(a), n) * (1 + 1e-9)


def test_grid_refinement_never_decreases_sup():
    coarse, fine = ops.GridConfig(per_decade=32), ops.GridConfig(per_decade=64)
    for T in (LOG, CURVE):
        for n in (10, 1000):
            assert ops.decay_norm(T, n, fine) >= ops.decay_norm(T, n, coarse) * (1 - 1e-12)


def test_decay_entry_provenance():
    e = ops.decay_norm(LOG, 100, full_output=True)
    assert e.method == "grid-sup" and e.error_budget > 0
    e = ops.decay_norm(ID, 3, full_output=True)
    assert e.method == "symbol-exact"


def test_max_trusted_n():
    assert ops.max_trusted_n(ops.DEFAULT_GRID) == math.inf
    g = ops.GridConfig(per_decade=64, t_min=1e-4)
    assert ops.max_trusted_n(g) == pytest.approx(1 / (10 * g.finest_spacing(1e-4)))


def test_finite_section_examples():
    assert np.array_equal(ops.finite_section(dens.point_mass(0), 3).matrix, np.eye(3))
    assert np.array_equal(ops.finite_section(dens.lazy_bernoulli(0.5), 2).matrix, [[0.5, 0], [0.5, 0.5]])
    S = ops.finite_section(dens.log_example(100), 4)
    assert np.allclose(S.matrix[:, 0], [0, 0, 0.5, 1 / 6])


def test_section_export(tmp_path):
    S = ops.finite_section(dens.lazy_bernoulli(0.5), 4)
    S.to_text(tmp_path / "s.txt")
    assert np.array_equal(np.loadtxt(tmp_path / "s.txt"), S.matrix)


def test_section_norm_examples():
    S = ops.finite_section(dens.lazy_bernoulli(0.5), 512)
    assert ops.section_decay_norm(S, 1) == pytest.approx(0.5, rel=0.02)
    assert ops.section_decay_norm(S, 4) == pytest.approx(0.286217, rel=0.02)
    I = ops.finite_section(dens.point_mass(0), 16)
    assert ops.section_decay_norm(I, 3) == 0.0


def test_section_norm_against_svd():
    S = ops.finite_section(dens.log_example(1000), 128)
    A = S.matrix
    for n in (1, 3, 8):
        M = np.linalg.matrix_power(A, n) @ (np.eye(128) - A)
        assert ops.section_decay_norm(S, n) == pytest.approx(np.linalg.norm(M, 2), rel=1e-8)


def test_section_norm_monotone_in_N_and_below_symbol():
    a = dens.lazy_bernoulli(0.5)
    for n in (2, 6):
        vals = [ops.section_decay_norm(ops.finite_section(a, N), n) for N in (16, 32, 64)]
        assert vals[0] <= vals[1] * (1 + 1e-9) <= vals[2] * (1 + 1e-9) ** 2
        assert vals[-1] <= ops.decay_norm(LAZY, n) * (1 + 1e-9)


def test_section_validity_flag():
    S = ops.finite_section(dens.lazy_bernoulli(0.5), 64)
    _, _, valid = ops.section_decay_norm(S, 4, full_output=True)
    assert valid
    _, _, valid = ops.section_decay_norm(S, 20, full_output=True)
    assert not valid
