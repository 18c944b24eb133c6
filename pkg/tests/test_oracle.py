import math

import pytest

from etamu.errors import DomainError, QuadratureError
from etamu.fading import FadingSpec, from_special_case, pdf_bessel, pdf_integer
from etamu.metrics import modulation_params
from etamu.noise import NoiseSpec
from etamu.oracle import (
    MonteCarloEstimate,
    QuadratureSettings,
    aber_mgf_awgn,
    aber_montecarlo,
    aber_quadrature,
    acc_montecarlo,
    acc_quadrature,
    ber_symbol_sim_bpsk,
    integrate_density,
    pdf_convolution,
)

BPSK = modulation_params("BPSK")
GAUSS, LAPLACE = NoiseSpec(2.0), NoiseSpec(1.0)
RAYLEIGH_10 = 0.5 * (1.0 - math.sqrt(10.0 / 11.0))

MC_SCENARIOS = [
    (FadingSpec("I", 0.5, 1.0, 1, 3.0), "BPSK", None, 2.0),
    (FadingSpec("II", 0.3, 1.5, 2, 10.0), "QPSK", None, 1.0),
    (FadingSpec("I", 0.2, 0.75, 1, 1.0), "MPSK", 8, 1.5),
    (FadingSpec("II", 0.7, 2.0, 3, 0.5), "MQAM_rect", 16, 0.5),
    (FadingSpec("I", 0.9, 1.0, 2, 30.0), "BFSK", None, 2.5),
]


# --- quadrature -------------------------------------------------------------


@pytest.mark.parametrize("noise", [GAUSS, LAPLACE])
def test_aber_quadrature_near_zero_snr(noise):
    # Q_a(x) = 1/2 - f(0) x + O(x^3), so the offset from A/2 scales with E[sqrt(g)]
    f0 = noise.a * noise.lambda0 / (2.0 * math.gamma(1.0 / noise.a))
    for g in (1e-9, 1e-15):
        spec = FadingSpec("I", 0.5, 1.0, 1, g)
        v = aber_quadrature(spec, BPSK, noise)
        offset = f0 * math.sqrt(BPSK.B) * integrate_density(spec, math.sqrt)
        assert 0.5 - v == pytest.approx(offset, rel=1e-4)
    assert abs(v - BPSK.A / 2.0) <= 1e-6


def test_aber_quadrature_rayleigh():
    spec = from_special_case("rayleigh", branches=1, mean_snr=10.0)
    assert aber_quadrature(spec, BPSK, GAUSS) == pytest.approx(RAYLEIGH_10, abs=1e-4)


@pytest.mark.parametrize("spec, scheme, M, a", MC_SCENARIOS)
def test_aber_quadrature_against_montecarlo(spec, scheme, M, a):
    mod, noise = modulation_params(scheme, M), NoiseSpec(a)
    est = aber_montecarlo(spec, mod, noise, 200_000, seed=7)
    assert est.covers(aber_quadrature(spec, mod, noise), k=3.0)


def test_aber_quadrature_non_integer_shape():
    spec = FadingSpec("II", 0.4, 0.8, 1, 2.0)
    assert not spec.has_integer_form
    est = aber_montecarlo(spec, BPSK, GAUSS, 200_000, seed=3)
    assert est.covers(aber_quadrature(spec, BPSK, GAUSS), k=3.0)


def test_acc_quadrature_limits():
    assert acc_quadrature(FadingSpec("I", 0.5, 1.0, 1, 1e-9)) <= 1e-8
    for spec in (FadingSpec("I", 0.5, 1.0, 1, 10.0), FadingSpec("II", 0.3, 2.0, 3, 100.0)):
        assert 0.0 < acc_quadrature(spec) <= math.log2(1.0 + spec.zeta_tilde)


def test_acc_quadrature_against_montecarlo():
    spec = FadingSpec("I", 0.5, 1.0, 1, 10.0)
    assert spec.mu_tilde == 1.0
    est = acc_montecarlo(spec, 10_000_000, seed=3)
    assert est.covers(acc_quadrature(spec), k=3.0)


@pytest.mark.filterwarnings("ignore::scipy.integrate.IntegrationWarning")
def test_quadrature_reports_unmet_tolerance():
    tight = QuadratureSettings(rel_tol=1e-15, abs_tol=1e-300, max_subdivisions=16)
    with pytest.raises(QuadratureError) as info:
        aber_quadrature(FadingSpec("I", 0.5, 2.0, 3, 10.0), BPSK, LAPLACE, tight)
    assert math.isfinite(info.value.estimate) and info.value.error > 0.0


def test_quadrature_rejects_wrong_kind():
    from etamu.approx import fit_expsum, preset_qa

    spec = FadingSpec("I", 0.5, 1.0, 1, 1.0)
    with pytest.raises(DomainError):
        aber_quadrature(spec, BPSK, fit_expsum("log2", "saturating"))
    with pytest.raises(DomainError):
        acc_quadrature(spec, approx=preset_qa(2))


# --- Monte Carlo ------------------------------------------------------------


def test_montecarlo_sqrt_n_law():
    spec = FadingSpec("I", 0.5, 1.0, 1, 10.0)
    a = aber_montecarlo(spec, BPSK, GAUSS, 50_000, seed=1)
    b = aber_montecarlo(spec, BPSK, GAUSS, 100_000, seed=1)
    assert a.std_error / b.std_error == pytest.approx(math.sqrt(2.0), rel=0.2)


def test_montecarlo_seed_stable():
    spec = FadingSpec("II", 0.3, 1.5, 2, 5.0)
    a = aber_montecarlo(spec, BPSK, LAPLACE, 100_000, seed=11)
    b = aber_montecarlo(spec, BPSK, LAPLACE, 100_000, seed=11)
    c = aber_montecarlo(spec, BPSK, LAPLACE, 100_000, seed=12)
    assert a == b
    assert a.mean != c.mean
    assert (a.n_samples, a.seed) == (100_000, 11)


def test_montecarlo_independent_of_workers():
    spec = FadingSpec("I", 0.5, 1.0, 2, 5.0)
    one = aber_montecarlo(spec, BPSK, GAUSS, 300_000, seed=4, workers=1)
    three = aber_montecarlo(spec, BPSK, GAUSS, 300_000, seed=4, workers=3)
    assert one == three
    assert acc_montecarlo(spec, 200_000, 4, workers=1) == acc_montecarlo(spec, 200_000, 4, workers=2)


def test_montecarlo_minimum_sizes():
    spec = FadingSpec("I", 0.5, 1.0, 1, 1.0)
    with pytest.raises(DomainError):
        aber_montecarlo(spec, BPSK, GAUSS, 999, seed=0)
    with pytest.raises(DomainError):
        acc_montecarlo(spec, 10, seed=0)
    with pytest.raises(DomainError):
        ber_symbol_sim_bpsk(spec, GAUSS, 9_999, seed=0)


def test_estimate_covers():
    est = MonteCarloEstimate(1.0, 0.1, 100, 0)
    assert est.covers(1.39) and not est.covers(1.41)
    assert est.covers(1.29, k=3.0) and not est.covers(1.31, k=3.0)


@pytest.mark.parametrize("noise", [GAUSS, LAPLACE])
def test_symbol_simulation_matches_quadrature(noise):
    spec = FadingSpec("I", 0.5, 1.0, 1, 1.0)
    est = ber_symbol_sim_bpsk(spec, noise, 400_000, seed=5)
    assert est.covers(aber_quadrature(spec, BPSK, noise), k=3.0)


def test_symbol_simulation_high_snr():
    spec = FadingSpec("I", 0.5, 1.0, 1, 1e6)
    assert ber_symbol_sim_bpsk(spec, GAUSS, 100_000, seed=1).mean < 1e-3


def test_laplacian_worse_than_gaussian_at_10db():
    spec = FadingSpec("I", 0.5, 1.0, 1, 10.0)
    assert aber_quadrature(spec, BPSK, LAPLACE) > aber_quadrature(spec, BPSK, GAUSS)
    sim_l = ber_symbol_sim_bpsk(spec, LAPLACE, 400_000, seed=2)
    sim_g = ber_symbol_sim_bpsk(spec, GAUSS, 400_000, seed=2)
    assert sim_l.mean > sim_g.mean


# --- MGF oracle -------------------------------------------------------------


def test_mgf_rayleigh():
    spec = from_special_case("rayleigh", branches=1, mean_snr=10.0)
    assert aber_mgf_awgn(spec, BPSK) == pytest.approx(aber_quadrature(spec, BPSK, GAUSS), rel=1e-8)
    # the eps-limit of the Rayleigh case sits 2e-7 from the classical value
    assert aber_mgf_awgn(spec, BPSK) == pytest.approx(RAYLEIGH_10, rel=1e-6)


@pytest.mark.parametrize(
    "spec",
    [
        FadingSpec("I", 0.5, 1.0, 3, 10.0),
        FadingSpec("II", 0.3, 0.6, 1, 0.5),
        FadingSpec("I", 0.05, 2.5, 2, 100.0),
        FadingSpec("II", 0.9, 1.0, 4, 3.0),
    ],
)
def test_mgf_equals_gaussian_quadrature(spec):
    assert aber_mgf_awgn(spec, BPSK, noise=GAUSS) == pytest.approx(aber_quadrature(spec, BPSK, GAUSS), rel=1e-8)


@pytest.mark.parametrize("M", [4, 8, 16])
def test_mgf_psk_bound(M):
    mod = modulation_params("MPSK", M)
    v = aber_mgf_awgn(FadingSpec("I", 0.5, 1.0, 1, 1e-6), mod)
    assert v <= (M - 1) / M
    assert v == pytest.approx((M - 1) / M, rel=1e-2)


def test_mgf_rejections():
    spec = FadingSpec("I", 0.5, 1.0, 1, 1.0)
    with pytest.raises(DomainError):
        aber_mgf_awgn(spec, BPSK, noise=LAPLACE)
    with pytest.raises(DomainError):
        aber_mgf_awgn(spec, modulation_params("MQAM_rect", 16))


# --- convolution density ----------------------------------------------------


@pytest.mark.parametrize("fmt, eta, mu, L", [("I", 0.5, 1.0, 2), ("II", 0.3, 0.7, 1), ("I", 0.1, 2.5, 3), ("II", 0.8, 1.5, 2)])
def test_convolution_matches_bessel(fmt, eta, mu, L):
    spec = FadingSpec(fmt, eta, mu, L, 2.0)
    for g in (0.05, 0.5, 2.0, 8.0, 25.0, 300.0):
        assert pdf_convolution(spec, g) == pytest.approx(pdf_bessel(spec, g), rel=1e-8)
        if spec.has_integer_form:
            assert pdf_convolution(spec, g) == pytest.approx(pdf_integer(spec, g), rel=1e-8)


def test_convolution_hypoexponential():
    spec = FadingSpec("I", 0.5, 1.0, 1, 1.0)
    w1, w2 = spec.omegas
    for g in (0.1, 0.5, 3.0):
        exact = (math.exp(-g / w2) - math.exp(-g / w1)) / (w2 - w1)
        assert pdf_convolution(spec, g) == pytest.approx(exact, rel=1e-12)


def test_convolution_rejects_origin():
    with pytest.raises(DomainError):
        pdf_convolution(FadingSpec("I", 0.5, 1.0, 1, 1.0), 0.0)
