"""Independent reference values: adaptive quadrature, Monte Carlo and MGF forms.

Nothing here uses the finite-sum expansion. Quadrature integrates the
Bessel-form density against the exact noise tail (or a fitted approximation
when checking the closed forms in isolation).
"""
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np
from scipy import integrate, special

from .approx import ExpSumApprox, eval_approx
from .errors import DomainError, QuadratureError
from .fading import hoyt_literature_spec, from_special_case, mgf, pdf_bessel, sample_snr
from .noise import NoiseSpec, qa_exact, sample_ggn

__all__ = [
    "QuadratureSettings",
    "MonteCarloEstimate",
    "HoytArbitration",
    "integrate_density",
    "aber_quadrature",
    "acc_quadrature",
    "aber_montecarlo",
    "acc_montecarlo",
    "ber_symbol_sim_bpsk",
    "aber_mgf_awgn",
    "pdf_convolution",
    "cdf_numeric",
    "ks_statistic",
    "hoyt_arbitration",
]

CHUNK = 1 << 16
MIN_SAMPLES = 1000
MIN_SYMBOLS = 10000


@dataclass(frozen=True)
class QuadratureSettings:
    rel_tol: float = 1e-10
    abs_tol: float = 1e-14
    max_subdivisions: int = 500


@dataclass(frozen=True)
class MonteCarloEstimate:
    mean: float
    std_error: float
    n_samples: int
    seed: int

    def covers(self, value, k=4.0):
        """True when ``value`` lies within k standard errors of the mean."""
        return abs(value - self.mean) <= k * self.std_error


def _breakpoints(spec, extra=()):
    z = spec.zeta_tilde
    pts = [z * f for f in (0.01, 0.1, 0.5, 1.0, 2.0, 5.0, 10.0)]
    w1 = spec.omegas[0]
    if w1 < 0.01 * z:
        # near-degenerate specs have a boundary layer of width ~Omega1 at the origin
        pts.extend(w1 * f for f in (1.0, 10.0, 100.0, 1000.0))
    pts.extend(extra)
    return sorted({p for p in pts if p > 0.0 and math.isfinite(p)})


def integrate_density(spec, fn, settings=None, extra_points=()):
    """Integral of fn(g) * pdf(g) over g in [0, inf).

    The half line is mapped onto [0, 1) with g = s t / (1 - t), s the
    combined mean SNR, and split at breakpoints around the density bulk.
    """
    settings = settings or QuadratureSettings()
    scale = spec.zeta_tilde

    def mapped(t):
        if t >= 1.0:
            return 0.0
        g = scale * t / (1.0 - t)
        d = pdf_bessel(spec, g)
        if d == 0.0:
            return 0.0
        return fn(g) * d * scale / (1.0 - t) ** 2

    pts = [g / (scale + g) for g in _breakpoints(spec, extra_points)]

    def run(epsabs):
        return integrate.quad(
            mapped, 0.0, 1.0, points=pts, epsabs=epsabs, epsrel=settings.rel_tol, limit=settings.max_subdivisions
        )

    value, err = run(settings.abs_tol)
    if 0.0 < abs(value) * settings.rel_tol < settings.abs_tol:
        # tiny integrals (deep diversity, high SNR): make the tolerance relative
        value, err = run(abs(value) * settings.rel_tol * 1e-2)
        if err <= settings.rel_tol * abs(value):
            return value
    if not (math.isfinite(value) and err <= max(settings.abs_tol, settings.rel_tol * abs(value))):
        raise QuadratureError(f"tolerance not met: estimate {value:.6g}, error {err:.3g}", value, err)
    return value


def aber_quadrature(spec, mod, noise, settings=None):
    """A * E[Q(sqrt(B g))] by quadrature.

    ``noise`` is a :class:`NoiseSpec` for the exact tail or an
    :class:`ExpSumApprox` to integrate the fitted tail instead.
    """
    if isinstance(noise, ExpSumApprox):
        if noise.kind != "decaying":
            raise DomainError("aber_quadrature needs a decaying approximation")
        tail = lambda g: float(eval_approx(noise, mod.B * g))
        extra = [t for _, lam in noise.terms for t in (1.0 / (lam * mod.B), 10.0 / (lam * mod.B))]
    elif isinstance(noise, NoiseSpec):
        tail = lambda g: qa_exact(noise, math.sqrt(mod.B * g))
        extra = [1.0 / mod.B, 10.0 / mod.B, 50.0 / mod.B]
    else:
        raise DomainError("noise must be a NoiseSpec or an ExpSumApprox")
    return mod.A * integrate_density(spec, tail, settings, extra)


def acc_quadrature(spec, settings=None, approx=None):
    """E[log2(1 + g)] by quadrature, or E[approx(g)] when a saturating fit is given."""
    if approx is None:
        fn = lambda g: math.log1p(g) / math.log(2.0)
    else:
        if approx.kind != "saturating":
            raise DomainError("acc_quadrature needs a saturating approximation")
        fn = lambda g: float(eval_approx(approx, g))
    return integrate_density(spec, fn, settings, [1.0, 10.0])


def _need(n, minimum):
    if n < minimum:
        raise DomainError(f"need at least {minimum} samples, got {n}")


def _chunked(n_samples, seed, draw, workers=1):
    """Mean and standard error over fixed-size chunks with spawned streams.

    Chunk c always uses child stream c, so results do not depend on
    ``workers``.
    """
    if n_samples < 2:
        raise DomainError("Monte Carlo needs at least 2 samples")
    sizes = [CHUNK] * (n_samples // CHUNK)
    if n_samples % CHUNK:
        sizes.append(n_samples % CHUNK)
    children = np.random.SeedSequence(seed).spawn(len(sizes))

    def run(i):
        x = draw(np.random.default_rng(children[i]), sizes[i])
        m = float(np.mean(x))
        return sizes[i], m, float(np.sum((x - m) ** 2))

    if workers > 1:
        with ThreadPoolExecutor(workers) as ex:
            parts = list(ex.map(run, range(len(sizes))))
    else:
        parts = [run(i) for i in range(len(sizes))]
    n, mean, m2 = 0, 0.0, 0.0
    for nb, mb, m2b in parts:
        tot = n + nb
        delta = mb - mean
        mean += delta * nb / tot
        m2 += m2b + delta * delta * n * nb / tot
        n = tot
    var = m2 / (n - 1)
    return MonteCarloEstimate(mean, math.sqrt(var / n), n, seed)


def aber_montecarlo(spec, mod, noise, n_samples, seed, workers=1):
    """Average of A * Q_a(sqrt(B g)) over sampled SNRs."""
    _need(n_samples, MIN_SAMPLES)
    draw = lambda rng, m: mod.A * qa_exact(noise, np.sqrt(mod.B * sample_snr(spec, rng, m)))
    return _chunked(n_samples, seed, draw, workers)


def acc_montecarlo(spec, n_samples, seed, workers=1):
    _need(n_samples, MIN_SAMPLES)
    draw = lambda rng, m: np.log2(1.0 + sample_snr(spec, rng, m))
    return _chunked(n_samples, seed, draw, workers)


def ber_symbol_sim_bpsk(spec, noise, n_samples, seed, workers=1):
    """Symbol-level BPSK: +1 sent, error when the noise drops the sample below zero.

    With unit noise variance and per-symbol SNR g, the received sample is
    sqrt(2 g) + N, so the error event is N < -sqrt(2 g).
    """
    _need(n_samples, MIN_SYMBOLS)

    def draw(rng, m):
        g = sample_snr(spec, rng, m)
        n = sample_ggn(noise, rng, m)
        return (np.sqrt(2.0 * g) + n < 0.0).astype(float)

    return _chunked(n_samples, seed, draw, workers)


def aber_mgf_awgn(spec, mod, settings=None, noise=None):
    """Symbol error rate under Gaussian noise via the MGF of the output SNR.

    (1/pi) int_0^{(M-1) pi / M} M(B / (2 sin^2 t)) dt, exact for BPSK and M-PSK.
    """
    if noise is not None and noise.a != 2.0:
        raise DomainError("the MGF form is only exact for Gaussian noise (a=2)")
    if mod.scheme not in ("BPSK", "MPSK"):
        raise DomainError("the MGF form is implemented for BPSK and M-PSK")
    settings = settings or QuadratureSettings()
    upper = (mod.M - 1) * math.pi / mod.M
    c = math.sin(math.pi / mod.M) ** 2 if mod.scheme == "MPSK" else 1.0

    def f(t):
        s = math.sin(t)
        return 0.0 if s == 0.0 else mgf(spec, c / (s * s))

    value, err = integrate.quad(f, 0.0, upper, epsabs=settings.abs_tol, epsrel=settings.rel_tol,
                                limit=settings.max_subdivisions)
    if err > max(settings.abs_tol, settings.rel_tol * abs(value)):
        raise QuadratureError(f"tolerance not met: estimate {value / math.pi:.6g}", value / math.pi, err / math.pi)
    return value / math.pi


def pdf_convolution(spec, snr, settings=None):
    """Density of the sum of two independent gammas, by direct convolution.

    The interval [0, g] is split where exp(-rate x) has fallen well past the
    mass of the integrand (or at g/2) and each piece carries the algebraic
    weight of its own endpoint, x^(m-1) or (g-x)^(m-1), so QUADPACK handles
    the endpoint behaviour exactly and the negligible far piece does not
    spoil the error estimate.
    """
    settings = settings or QuadratureSettings()
    g = float(snr)
    if g <= 0.0:
        raise DomainError("pdf_convolution needs snr > 0")
    mt = spec.mu_tilde
    w1, w2 = spec.omegas
    t1, t2 = w1 / mt, w2 / mt
    ln_c = -2.0 * special.gammaln(mt) - mt * (math.log(t1) + math.log(t2)) - g / t2
    rate = 1.0 / t1 - 1.0 / t2
    half = min(0.5 * g, (mt + 50.0) / rate) if rate > 0.0 else 0.5 * g
    pieces = (
        (lambda x: (g - x) ** (mt - 1.0) * math.exp(-rate * x), 0.0, half, (mt - 1.0, 0.0)),
        (lambda x: x ** (mt - 1.0) * math.exp(-rate * x), half, g, (0.0, mt - 1.0)),
    )
    value, err = 0.0, 0.0
    for fn, lo, hi, wvar in pieces:
        v, e = integrate.quad(
            fn, lo, hi, weight="alg", wvar=wvar, epsabs=0.0, epsrel=settings.rel_tol, limit=settings.max_subdivisions
        )
        value += v
        err += abs(e)
    if not err <= settings.rel_tol * abs(value) * 10.0:
        raise QuadratureError(f"tolerance not met: estimate {value:.6g}, error {err:.3g}", value, err)
    return math.exp(ln_c) * value


def cdf_numeric(spec, points, order=8):
    """CDF at sorted ``points`` by Gauss-Legendre on each gap between them."""
    x = np.asarray(points, dtype=float)
    if np.any(np.diff(x) < 0.0) or (x.size and x[0] < 0.0):
        raise DomainError("cdf_numeric needs sorted non-negative points")
    nodes, weights = np.polynomial.legendre.leggauss(order)
    left = np.concatenate(([0.0], x[:-1]))
    half = 0.5 * (x - left)
    mid = 0.5 * (x + left)
    g = mid[:, None] + half[:, None] * nodes[None, :]
    dens = np.asarray(pdf_bessel(spec, g.ravel())).reshape(g.shape)
    pieces = half * (dens @ weights)
    return np.cumsum(pieces)


def ks_statistic(samples, cdf_values):
    """Two-sided KS distance between sorted samples and model CDF values at them."""
    n = len(samples)
    i = np.arange(1, n + 1)
    return float(max(np.max(i / n - cdf_values), np.max(cdf_values - (i - 1) / n)))


@dataclass(frozen=True)
class HoytArbitration:
    q: float
    n_samples: int
    ks_published: float
    ks_literature: float
    critical_1pct: float

    @property
    def supported(self):
        """Which mapping the simulated Hoyt channel supports."""
        return "literature_mapping" if self.ks_literature < self.ks_published else "published_mapping"


def hoyt_arbitration(q, n_samples=20000, seed=0, mean_snr=1.0):
    """Simulate Hoyt fading and score both eta-mu parametrizations by KS distance.

    The channel is X + jY with independent zero-mean Gaussians of variance
    ratio q^2; the SNR is mean_snr * |h|^2 / E|h|^2.
    """
    if not 0.0 < q <= 1.0:
        raise DomainError("Hoyt q must lie in (0, 1]")
    rng = np.random.default_rng(seed)
    sx2, sy2 = 1.0, q * q
    x = rng.normal(0.0, math.sqrt(sx2), n_samples)
    y = rng.normal(0.0, math.sqrt(sy2), n_samples)
    snr = np.sort(mean_snr * (x * x + y * y) / (sx2 + sy2))
    published = from_special_case("hoyt", 1, mean_snr, q=q)
    literature = hoyt_literature_spec(q, 1, mean_snr)
    d_published = ks_statistic(snr, cdf_numeric(published, snr))
    d_lit = ks_statistic(snr, cdf_numeric(literature, snr))
    return HoytArbitration(q, n_samples, d_published, d_lit, 1.628 / math.sqrt(n_samples))
