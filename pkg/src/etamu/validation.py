"""Self-check suites behind ``etamu validate``.

Each suite returns a list of :class:`Check`. Informational rows (``info``)
report a measurement without affecting the exit status.
"""
import math
from dataclasses import dataclass

import numpy as np
from scipy import integrate, special

from . import approx as ap
from .fading import FadingSpec, from_special_case, mgf, pdf_bessel, pdf_integer
from .metrics import aber, kernel_K, modulation_params
from .noise import NoiseSpec, ggn_pdf, qa_exact
from .oracle import aber_mgf_awgn, aber_quadrature, hoyt_arbitration, integrate_density

__all__ = ["Check", "SUITES", "run_suite", "format_report", "PDF_GRID", "pdf_grid_specs"]

PDF_GRID = (0.01, 0.1, 0.5, 1.0, 2.0, 5.0, 10.0)


@dataclass(frozen=True)
class Check:
    suite: str
    name: str
    measured: float
    limit: float
    passed: bool
    info: bool = False

    @property
    def status(self):
        return "info" if self.info else ("PASS" if self.passed else "FAIL")


def _rel(a, b):
    if a == b:
        return 0.0
    return abs(a - b) / max(abs(a), abs(b))


def _check(suite, name, measured, limit, info=False):
    return Check(suite, name, float(measured), float(limit), bool(measured <= limit), info)


def pdf_grid_specs():
    for fmt in ("I", "II"):
        for eta in (0.1, 0.3, 0.5, 0.9):
            for mu in (1, 2, 3):
                for L in (1, 2, 3):
                    yield FadingSpec(fmt, eta, mu, L, 2.0)


def suite_pdf(fast=False):
    out = []
    specs = list(pdf_grid_specs())
    for s in specs:
        g = np.array(PDF_GRID) * s.zeta_tilde
        err = float(np.max(np.abs(pdf_bessel(s, g) - pdf_integer(s, g)) / pdf_bessel(s, g)))
        out.append(_check("pdf", f"bessel=integer {s.format} eta={s.eta} mu={s.mu:g} L={s.branches}", err, 1e-9))
    for s in specs[:: 6 if fast else 1]:
        mass = integrate_density(s, lambda g: 1.0)
        out.append(_check("pdf", f"mass {s.format} eta={s.eta} mu={s.mu:g} L={s.branches}", abs(mass - 1.0), 1e-8))
    for s in specs[::9]:
        out.append(_check("pdf", f"mgf(0)=1 {s.format} eta={s.eta} L={s.branches}", abs(mgf(s, 0.0) - 1.0), 0.0))
        for sv in (0.1, 1.0, 10.0):
            lap = integrate_density(s, lambda g: math.exp(-sv * g))
            out.append(_check("pdf", f"laplace s={sv} {s.format} eta={s.eta} L={s.branches}", _rel(lap, mgf(s, sv)), 1e-6))
    for eta in (0.2, 0.5, 0.8):
        a, b = FadingSpec("I", eta, 2, 1, 2.0), FadingSpec("I", 1.0 / eta, 2, 1, 2.0)
        g = np.array(PDF_GRID) * a.zeta_tilde
        diff = float(np.max(np.abs(pdf_bessel(a, g) - pdf_bessel(b, g))))
        out.append(_check("pdf", f"format I eta={eta} vs 1/eta", diff, 0.0))
    for m in (1, 2, 3):
        s = from_special_case("nakagami", 1, 2.0, m=m)
        g = np.geomspace(0.01, 10.0, 60) * s.zeta_tilde
        th = s.zeta_tilde / m
        exact = np.exp((m - 1) * np.log(g) - g / th - special.gammaln(m) - m * math.log(th))
        err = float(np.max(np.abs(pdf_bessel(s, g) - exact) / exact))
        out.append(_check("pdf", f"nakagami m={m} eps-limit vs gamma", err, 1e-4))
    return out


def suite_noise(fast=False):
    out = []
    x = np.linspace(0.0, 6.0, 121)
    out.append(_check("noise", "Q_2 = Gaussian Q on [0,6]",
                      float(np.max(np.abs(qa_exact(NoiseSpec(2), x) - 0.5 * special.erfc(x / math.sqrt(2.0))))), 1e-12))
    out.append(_check("noise", "Q_1 = exp(-sqrt2 x)/2 on [0,6]",
                      float(np.max(np.abs(qa_exact(NoiseSpec(1), x) - 0.5 * np.exp(-math.sqrt(2.0) * x)))), 1e-12))
    for a in (0.5, 1.0, 1.5, 2.0, 2.5):
        nz = NoiseSpec(a)
        worst = 0.0
        for xv in np.linspace(0.0, 5.0, 6 if fast else 11):
            tail, _ = integrate.quad(lambda u: ggn_pdf(nz, u), xv, np.inf, epsabs=1e-15, epsrel=1e-13, limit=200)
            worst = max(worst, abs(qa_exact(nz, float(xv)) - tail))
        out.append(_check("noise", f"Q_{a:g} vs density tail quadrature", worst, 1e-10))
        xs = np.linspace(-5.0, 5.0, 201)
        q = qa_exact(nz, xs)
        out.append(_check("noise", f"Q_{a:g} strictly decreasing", 0.0 if np.all(np.diff(q) < 0) else 1.0, 0.0))
        sym = float(np.max(np.abs(q + qa_exact(nz, -xs) - 1.0)))
        out.append(_check("noise", f"Q_{a:g}(x)+Q_{a:g}(-x)=1", sym, 0.0))
    for a in sorted(ap.QA_TABLE):
        pre = ap.preset_qa(a)
        out.append(_check("noise", f"preset a={a:g} max deviation on [0.1,40]", pre.max_abs_err, 0.01, info=True))
        out.append(_check("noise", f"preset a={a:g} sum of alphas in [0.45,0.55]",
                          abs(float(np.sum(pre.effective_alphas)) - 0.5), 0.05))
    return out


def _kernel_quadrature(m, b, xi, p):
    f = lambda g: g ** (m - 1) * math.exp(-b * g) * special.gammainc(xi, p * g) * special.gamma(xi)
    scale = (m + xi) / b
    pieces = [0.0, 0.25 * scale, scale, 4.0 * scale, 16.0 * scale]
    total = math.fsum(integrate.quad(f, lo, hi, epsabs=0.0, epsrel=1e-13, limit=400)[0] for lo, hi in zip(pieces, pieces[1:]))
    total += integrate.quad(f, pieces[-1], np.inf, epsabs=0.0, epsrel=1e-13, limit=400)[0]
    return total


def kernel_draws(n=50, seed=2024):
    """Random (m, beta_eff, xi, p) with m <= 6 and xi <= 12."""
    rng = np.random.default_rng(seed)
    out = []
    for _ in range(n):
        m = int(rng.integers(1, 7))
        xi = int(rng.integers(1, 13))
        b = float(10.0 ** rng.uniform(-1.0, 1.0))
        p = float(10.0 ** rng.uniform(-1.0, 1.0))
        out.append((m, b, xi, p))
    return out


def aber_scenarios():
    """Ten scenarios for the closed form vs fitted-tail quadrature identity."""
    bp, qp, qam = modulation_params("BPSK"), modulation_params("QPSK"), modulation_params("MQAM_rect", 16)
    return [
        (FadingSpec("I", 0.5, 1, 1, 1.0), bp, 2.0),
        (FadingSpec("I", 0.5, 2, 3, 10.0), bp, 1.0),
        (FadingSpec("II", 0.3, 1, 2, 3.0), qp, 2.0),
        (FadingSpec("II", 0.7, 3, 1, 30.0), qam, 0.5),
        (FadingSpec("I", 0.1, 2, 2, 100.0), bp, 2.5),
        (FadingSpec("I", 3.0, 1, 3, 5.0), qp, 1.5),
        (FadingSpec("II", 0.9, 2, 1, 0.5), bp, 1.0),
        (FadingSpec("I", 0.8, 3, 2, 20.0), qam, 2.0),
        (FadingSpec("II", 0.1, 1, 1, 1000.0), bp, 0.5),
        (FadingSpec("I", 0.3, 2, 1, 2.0), modulation_params("MPSK", 8), 1.0),
    ]


def suite_kernel(fast=False):
    out = []
    for m, b, xi, p in kernel_draws(20 if fast else 50):
        err = _rel(kernel_K(m, b, xi, p), _kernel_quadrature(m, b, xi, p))
        out.append(_check("kernel", f"K(m={m}, b={b:.4g}, xi={xi}, p={p:.4g})", err, 1e-10))
    for s, mod, a in aber_scenarios():
        pre = ap.preset_qa(a)
        err = _rel(aber(s, mod, pre), aber_quadrature(s, mod, pre))
        out.append(_check("kernel", f"aber closed=quadrature {s.format} eta={s.eta} L={s.branches} {mod.label} a={a:g}", err, 1e-8))
    return out


def suite_special_cases(fast=False):
    out = []
    bp = modulation_params("BPSK")
    ray = from_special_case("rayleigh", 1, 10.0)
    exact = 0.5 * (1.0 - math.sqrt(10.0 / 11.0))
    out.append(_check("special_cases", "Rayleigh BPSK 10 dB closed form vs exact",
                      _rel(aber(ray, bp, ap.preset_qa(2)), exact), 5e-3))
    for m in (1, 2, 3):
        s = from_special_case("nakagami", 1, 2.0, m=m)
        g = np.geomspace(0.01, 10.0, 60) * s.zeta_tilde
        th = s.zeta_tilde / m
        ref = np.exp((m - 1) * np.log(g) - g / th - special.gammaln(m) - m * math.log(th))
        out.append(_check("special_cases", f"nakagami m={m} pdf vs gamma", float(np.max(np.abs(pdf_bessel(s, g) - ref) / ref)), 1e-4))
    gauss = NoiseSpec(2)
    cases = [ray, FadingSpec("I", 0.5, 2, 2, 3.0), FadingSpec("II", 0.4, 1, 3, 1.0), FadingSpec("I", 0.2, 1.5, 1, 5.0)]
    for s in cases[: 2 if fast else None]:
        err = _rel(aber_mgf_awgn(s, bp), aber_quadrature(s, bp, gauss))
        out.append(_check("special_cases", f"MGF vs quadrature {s.format} eta={s.eta} mu={s.mu:g} L={s.branches} BPSK", err, 1e-8))
    # the M-PSK row of the error model is itself an approximation of the exact SER
    psk = modulation_params("MPSK", 8)
    s = cases[1]
    err = _rel(aber_mgf_awgn(s, psk), aber_quadrature(s, psk, gauss))
    out.append(_check("special_cases", "8-PSK model vs exact SER (MGF)", err, 0.05, info=True))
    return out


def suite_hoyt(fast=False):
    out = []
    for q in (0.2, 0.5, 0.8):
        r = hoyt_arbitration(q, 5000 if fast else 20000, seed=7)
        out.append(Check("hoyt_arbitration", f"q={q} KS published mapping", r.ks_published, r.critical_1pct, r.ks_published <= r.critical_1pct, True))
        out.append(Check("hoyt_arbitration", f"q={q} KS literature mapping", r.ks_literature, r.critical_1pct,
                         r.ks_literature <= r.critical_1pct, True))
        out.append(Check("hoyt_arbitration", f"q={q} supported: {r.supported}", min(r.ks_published, r.ks_literature),
                         r.critical_1pct, True, True))
    return out


SUITES = {
    "pdf": suite_pdf,
    "noise": suite_noise,
    "kernel": suite_kernel,
    "special_cases": suite_special_cases,
    "hoyt_arbitration": suite_hoyt,
}


def run_suite(name, fast=False):
    if name == "all":
        return [c for fn in SUITES.values() for c in fn(fast)]
    try:
        return SUITES[name](fast)
    except KeyError:
        raise KeyError(f"unknown suite {name!r}") from None


def format_report(checks):
    width = max((len(c.name) for c in checks), default=10)
    lines = [f"{'status':6}  {'suite':16}  {'check':{width}}  {'measured':>12}  {'limit':>9}"]
    for c in checks:
        lines.append(f"{c.status:6}  {c.suite:16}  {c.name:{width}}  {c.measured:12.3e}  {c.limit:9.1e}")
    failed = sum(1 for c in checks if not c.info and not c.passed)
    lines.append(f"{len(checks)} checks, {failed} failed")
    return "\n".join(lines)
