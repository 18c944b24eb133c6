"""eta-mu fading with L-branch maximal-ratio combining.

The combiner output SNR has three equivalent descriptions implemented here:
the Bessel-form density (any real mu_tilde > 0), the finite-sum density for
integer mu_tilde, and the moment generating function. The MGF factors into
two gamma MGFs with shape mu_tilde and means omega1, omega2, which also gives
an exact sampler.
"""
import math
from dataclasses import dataclass, field

import numpy as np

from . import _kernels as K
from .errors import DegenerateChannelError, DomainError
from .special_fn import ln_bessel_ive_array

__all__ = [
    "FadingSpec",
    "HHPair",
    "ExpansionTerm",
    "IntegerFormExpansion",
    "NAKAGAMI_EPS",
    "canonical_eta",
    "compute_hH",
    "expansion",
    "pdf_bessel",
    "pdf_integer",
    "pdf_gamma_limit",
    "mgf",
    "from_special_case",
    "hoyt_literature_spec",
    "sample_snr",
]

NAKAGAMI_EPS = 1e-8
FORMATS = ("I", "II")


def _normalize_format(fmt):
    key = str(fmt).strip().upper()
    aliases = {"1": "I", "I": "I", "2": "II", "II": "II", "LAMBDA": "II"}
    if key not in aliases:
        raise DomainError(f"unknown eta-mu format {fmt!r}; use 'I' or 'II'")
    return aliases[key]


def _check_eta(fmt, eta):
    if not math.isfinite(eta):
        raise DomainError(f"eta must be finite, got {eta}")
    if fmt == "I" and not eta > 0.0:
        raise DomainError(f"format I needs 0 < eta < inf, got {eta}")
    if fmt == "II" and not -1.0 < eta < 1.0:
        raise DomainError(f"format II needs -1 < eta < 1, got {eta}")


def canonical_eta(fmt, eta):
    """Map eta onto the branch with H >= 0 (1/eta for format I, -eta for format II)."""
    fmt = _normalize_format(fmt)
    eta = float(eta)
    _check_eta(fmt, eta)
    if fmt == "I":
        return 1.0 / eta if eta > 1.0 else eta
    return -eta if eta < 0.0 else eta


@dataclass(frozen=True)
class HHPair:
    """Table-I constants. ``h_plus``/``h_minus`` are h+H and h-H in cancellation-free form."""

    h: float
    H: float
    h_plus: float
    h_minus: float


def compute_hH(fmt, eta):
    """h and H for an eta-mu format, canonicalized so that h > H >= 0."""
    fmt = _normalize_format(fmt)
    e = canonical_eta(fmt, eta)
    if fmt == "I":
        h = (1.0 / e + e + 2.0) / 4.0
        H = (1.0 / e - e) / 4.0
        h_plus = (1.0 / e + 1.0) / 2.0
        h_minus = (e + 1.0) / 2.0
    else:
        h = 1.0 / (1.0 - e * e)
        H = e / (1.0 - e * e)
        h_plus = 1.0 / (1.0 - e)
        h_minus = 1.0 / (1.0 + e)
    return HHPair(h=h, H=H, h_plus=h_plus, h_minus=h_minus)


@dataclass(frozen=True)
class FadingSpec:
    """Channel description: format, eta, per-branch mu, branch count L, per-branch mean SNR (linear).

    ``mu`` may be any positive real for the Bessel-form density, the
    quadrature oracles and the sampler; the finite-sum density and the closed
    forms need ``mu * branches`` to be an integer.
    """

    format: str
    eta: float
    mu: float
    branches: int = 1
    mean_snr: float = 1.0
    tag: str = field(default="", compare=False)

    def __post_init__(self):
        object.__setattr__(self, "format", _normalize_format(self.format))
        object.__setattr__(self, "eta", float(self.eta))
        object.__setattr__(self, "mu", float(self.mu))
        _check_eta(self.format, self.eta)
        if not (math.isfinite(self.mu) and self.mu > 0.0):
            raise DomainError(f"mu must be > 0, got {self.mu}")
        if int(self.branches) != self.branches or self.branches < 1:
            raise DomainError(f"branches must be a positive integer, got {self.branches}")
        object.__setattr__(self, "branches", int(self.branches))
        if not (math.isfinite(self.mean_snr) and self.mean_snr > 0.0):
            raise DomainError(f"mean_snr must be > 0, got {self.mean_snr}")
        object.__setattr__(self, "mean_snr", float(self.mean_snr))

    @property
    def mu_tilde(self):
        return self.branches * self.mu

    @property
    def zeta_tilde(self):
        return self.branches * self.mean_snr

    @property
    def hh(self):
        return compute_hH(self.format, self.eta)

    @property
    def is_degenerate(self):
        return self.hh.H == 0.0

    @property
    def has_integer_form(self):
        return float(self.mu_tilde).is_integer()

    @property
    def omegas(self):
        """Means (omega1, omega2) of the two gamma components, omega1 <= omega2."""
        hh = self.hh
        z = self.zeta_tilde
        return z / (2.0 * hh.h_plus), z / (2.0 * hh.h_minus)

    def with_mean_snr(self, mean_snr):
        return FadingSpec(self.format, self.eta, self.mu, self.branches, mean_snr, self.tag)

    def with_branches(self, branches):
        return FadingSpec(self.format, self.eta, self.mu, branches, self.mean_snr, self.tag)


@dataclass(frozen=True)
class ExpansionTerm:
    k: int
    psi: float
    ln_abs_psi: float
    sign: int
    m: int
    xi: int


@dataclass(frozen=True)
class IntegerFormExpansion:
    mu_tilde: int
    zeta_tilde: float
    omega1: float
    omega2: float
    p: float
    beta: float
    ln_scale: float
    terms: tuple

    def __iter__(self):
        return iter(self.terms)


def _require_integer_form(spec):
    if not spec.has_integer_form:
        raise DomainError(f"integer-form path needs integer mu*L, got {spec.mu_tilde}")
    if spec.is_degenerate:
        raise DegenerateChannelError(
            "H = 0 (eta=1 in format I / eta=0 in format II): the finite-sum form "
            "divides by p; use the gamma-limit form instead"
        )


def expansion(spec):
    """Coefficients of the integer-mu_tilde finite-sum density.

    ``ln_scale`` = ln([mu_t/(omega2-omega1)]^mu_t / ((mu_t-1)!)^2) so that
    psi_k = exp(ln_scale) C(mu_t-1, k) (-1/p)^k.
    """
    _require_integer_form(spec)
    hh = spec.hh
    mu_t = int(round(spec.mu_tilde))
    z = spec.zeta_tilde
    omega1, omega2 = spec.omegas
    p = 4.0 * mu_t * hh.H / z
    beta = 2.0 * mu_t * hh.h_minus / z
    spread = z * hh.H / hh.h  # omega2 - omega1 without cancellation
    ln_scale = mu_t * math.log(mu_t / spread) - 2.0 * math.lgamma(mu_t)
    terms = []
    for k in range(mu_t):
        ln_abs = ln_scale + math.log(math.comb(mu_t - 1, k)) - k * math.log(p)
        sign = -1 if k % 2 else 1
        psi = sign * math.exp(ln_abs) if ln_abs < K.LN_DBL_MAX else sign * math.inf
        terms.append(ExpansionTerm(k=k, psi=psi, ln_abs_psi=ln_abs, sign=sign, m=mu_t - k, xi=k + mu_t))
    return IntegerFormExpansion(
        mu_tilde=mu_t,
        zeta_tilde=z,
        omega1=omega1,
        omega2=omega2,
        p=p,
        beta=beta,
        ln_scale=ln_scale,
        terms=tuple(terms),
    )


def _as_array(snr):
    arr = np.asarray(snr, dtype=float)
    if np.any(np.isnan(arr)) or np.any(arr < 0.0):
        raise DomainError("snr must be >= 0")
    return arr


def pdf_gamma_limit(spec, snr):
    """Density for H = 0: gamma with shape 2 mu_tilde and mean zeta_tilde."""
    g = _as_array(snr)
    shape = 2.0 * spec.mu_tilde
    rate = shape / spec.zeta_tilde
    with np.errstate(divide="ignore"):
        ln_f = shape * math.log(rate) + (shape - 1.0) * np.log(g) - rate * g - math.lgamma(shape)
    out = np.exp(ln_f)
    if shape == 1.0:
        out = np.where(g == 0.0, rate, out)
    return out if out.ndim else float(out)


def pdf_bessel(spec, snr):
    """MRC output SNR density in Bessel form; accepts any real mu_tilde > 0."""
    if spec.is_degenerate:
        return pdf_gamma_limit(spec, snr)
    g = _as_array(snr)
    flat = np.atleast_1d(g).ravel()
    hh = spec.hh
    mt = spec.mu_tilde
    z = spec.zeta_tilde
    nu = mt - 0.5
    ln_coef = (
        math.log(2.0)
        + 0.5 * math.log(math.pi)
        + (mt + 0.5) * math.log(mt)
        + mt * math.log(hh.h)
        - math.lgamma(mt)
        - nu * math.log(hh.H)
        - (mt + 0.5) * math.log(z)
    )
    beta = 2.0 * mt * hh.h_minus / z
    arg = 2.0 * mt * hh.H * flat / z
    out = np.empty_like(flat)
    pos = flat > 0.0
    if pos.any():
        gp = flat[pos]
        out[pos] = np.exp(ln_coef + nu * np.log(gp) - beta * gp + ln_bessel_ive_array(nu, arg[pos]))
    if (~pos).any():
        # g^(mu_t - 1/2) I_{mu_t - 1/2}(c g) ~ (c/2)^nu g^(2 mu_t - 1) / Gamma(mu_t + 1/2)
        if 2.0 * mt - 1.0 > 0.0:
            origin = 0.0
        elif 2.0 * mt - 1.0 == 0.0:
            origin = math.exp(ln_coef - math.lgamma(mt + 0.5))
        else:
            origin = math.inf
        out[~pos] = origin
    out = out.reshape(g.shape)
    return out if out.ndim else float(out)


def pdf_integer(spec, snr):
    """MRC output SNR density from the integer-mu_tilde finite sum."""
    ex = expansion(spec)
    g = _as_array(snr)
    flat = np.ascontiguousarray(np.atleast_1d(g).ravel())
    out = K.integer_pdf_array(flat, ex.mu_tilde, ex.ln_scale, ex.p, ex.beta).reshape(g.shape)
    return out if out.ndim else float(out)


def mgf(spec, s):
    """E[exp(-s * snr)] of the combiner output, s >= 0."""
    s_arr = np.asarray(s, dtype=float)
    if np.any(np.isnan(s_arr)) or np.any(s_arr < 0.0):
        raise DomainError("mgf is defined here for s >= 0")
    mt = spec.mu_tilde
    o1, o2 = spec.omegas
    out = np.exp(-mt * (np.log1p(s_arr * o1 / mt) + np.log1p(s_arr * o2 / mt)))
    return out if out.ndim else float(out)


def from_special_case(case, branches=1, mean_snr=1.0, m=None, q=None):
    """Spec for a named special case.

    ``nakagami`` (integer ``m``): format I with eta = NAKAGAMI_EPS, mu = m.
    ``rayleigh``: nakagami with m = 1.
    ``hoyt`` (``q`` in (0, 1]): format I, eta = (1-q)/(1+q), mu = 1, tagged
    ``published_mapping``; compare :func:`hoyt_literature_spec`.
    """
    case = str(case).strip().lower()
    if case == "rayleigh":
        case, m = "nakagami", 1
    if case == "nakagami":
        if m is None or float(m) != int(m) or int(m) < 1:
            raise DomainError(f"nakagami needs a positive integer m on the closed-form path, got {m}")
        return FadingSpec("I", NAKAGAMI_EPS, int(m), branches, mean_snr, tag=f"nakagami-{int(m)}")
    if case == "hoyt":
        if q is None or not 0.0 < float(q) <= 1.0:
            raise DomainError(f"hoyt needs 0 < q <= 1, got {q}")
        q = float(q)
        eta = max((1.0 - q) / (1.0 + q), NAKAGAMI_EPS)
        return FadingSpec("I", eta, 1, branches, mean_snr, tag="published_mapping")
    raise DomainError(f"unknown special case {case!r}")


def hoyt_literature_spec(q, branches=1, mean_snr=1.0):
    """Hoyt with the usual eta-mu mapping: format I, eta = q^2, mu = 1/2."""
    q = float(q)
    if not 0.0 < q <= 1.0:
        raise DomainError(f"hoyt needs 0 < q <= 1, got {q}")
    return FadingSpec("I", q * q, 0.5, branches, mean_snr, tag="literature_mapping")


def sample_snr(spec, rng, size=None):
    """Exact draws of the combiner output SNR.

    Sum of two independent gamma variates with shape mu_tilde and means
    omega1, omega2 (the MGF factorization). ``rng`` is a numpy Generator.
    """
    mt = spec.mu_tilde
    o1, o2 = spec.omegas
    return rng.gamma(mt, o1 / mt, size) + rng.gamma(mt, o2 / mt, size)
