"""Closed-form error rate and ergodic capacity over eta-mu MRC fading.

Both metrics reduce to one kernel integral

    K(m, b, xi, p) = int_0^inf g^(m-1) e^(-b g) gamma_lower(xi, p g) dg
                   = p^xi Gamma(m+xi) / (xi b^(m+xi)) 2F1(xi, m+xi; xi+1; -p/b)

summed against the integer-form coefficients psi_k. The error rate uses a
decaying exponential fit of the noise tail, the capacity a saturating fit of
log2(1+x).
"""
import math
from dataclasses import dataclass

import numpy as np

from . import _kernels as K
from .errors import CurveEvaluationError, DomainError
from .fading import expansion, mgf
from .special_fn import gauss_2f1

__all__ = [
    "SCHEMES",
    "ModulationSpec",
    "PerformancePoint",
    "modulation_params",
    "kernel_K",
    "ln_kernel_K",
    "kernel_sum",
    "aber",
    "aber_termwise",
    "acc",
    "curve",
]

SCHEMES = ("BFSK", "BPSK", "QPSK", "MPAM", "MPSK", "MQAM_rect", "MQAM_nonrect")
_ALIASES = {s.lower(): s for s in SCHEMES}
_ALIASES.update({"mqam": "MQAM_rect", "qam": "MQAM_rect", "4qam": "QPSK", "pam": "MPAM", "psk": "MPSK"})


@dataclass(frozen=True)
class ModulationSpec:
    """Conditional error model ``A * Q_a(sqrt(B * snr))``."""

    scheme: str
    M: int
    A: float
    B: float

    @property
    def label(self):
        return self.scheme if self.scheme in ("BFSK", "BPSK", "QPSK") else f"{self.M}-{self.scheme}"


@dataclass(frozen=True)
class PerformancePoint:
    mean_snr_db: float
    value: float


def _is_power_of_two(m):
    return m >= 2 and (m & (m - 1)) == 0


def modulation_params(scheme, M=None):
    """Constants A and B of the conditional symbol-error model for a scheme."""
    key = _ALIASES.get(str(scheme).strip().lower())
    if key is None:
        raise DomainError(f"unknown modulation {scheme!r}; known: {', '.join(SCHEMES)}")
    fixed = {"BFSK": (2, 1.0, 1.0), "BPSK": (2, 1.0, 2.0), "QPSK": (4, 2.0, 1.0)}
    if key in fixed:
        m_fixed, A, B = fixed[key]
        if M is not None and int(M) != m_fixed:
            raise DomainError(f"{key} has M={m_fixed}, got M={M}")
        return ModulationSpec(key, m_fixed, A, B)
    if M is None:
        raise DomainError(f"{key} needs a constellation size M")
    if int(M) != M:
        raise DomainError(f"M must be an integer, got {M}")
    M = int(M)
    if not _is_power_of_two(M):
        raise DomainError(f"M must be a power of two >= 2, got {M}")
    if key == "MPAM":
        return ModulationSpec(key, M, 2.0 * (M - 1) / M, 6.0 / (M * M - 1))
    if key == "MPSK":
        if M < 4:
            raise DomainError("the M-PSK approximation needs M >= 4; use BPSK for M=2")
        return ModulationSpec(key, M, 2.0, 2.0 * math.sin(math.pi / M) ** 2)
    if key == "MQAM_rect":
        root = math.isqrt(M)
        if root * root != M:
            raise DomainError(f"rectangular M-QAM needs a square M, got {M}")
        return ModulationSpec(key, M, 4.0 * (root - 1) / root, 3.0 / (M - 1))
    if M < 8:
        raise DomainError("non-rectangular M-QAM needs M >= 8")
    return ModulationSpec(key, M, 4.0, 3.0 / (M - 1))


def ln_kernel_K(m, beta_eff, xi, p):
    """ln K(m, beta_eff, xi, p) in the hypergeometric form."""
    if not (m > 0 and xi > 0 and beta_eff > 0.0):
        raise DomainError("kernel_K needs m > 0, xi > 0 and beta_eff > 0")
    if p < 0.0:
        raise DomainError("kernel_K needs p >= 0")
    if p == 0.0:
        return -math.inf
    f = gauss_2f1(xi, m + xi, xi + 1.0, -p / beta_eff)
    return xi * math.log(p) + math.lgamma(m + xi) - math.log(xi) - (m + xi) * math.log(beta_eff) + math.log(f)


def kernel_K(m, beta_eff, xi, p):
    """The kernel integral K(m, beta_eff, xi, p)."""
    return math.exp(ln_kernel_K(m, beta_eff, xi, p))


def kernel_sum(ex, beta_eff):
    """sum_k psi_k K(m_k, beta_eff, xi_k, p) for an integer-form expansion.

    Equals E[exp(-(beta_eff - beta) * snr)]; the alternating k-sum runs in
    double-double and the common factor in log space.
    """
    mt = ex.mu_tilde
    hi, lo = K.kernel_ksum(mt, ex.p / beta_eff)
    ln_common = ex.ln_scale + mt * math.log(ex.p) + math.lgamma(2 * mt) - 2 * mt * math.log(beta_eff)
    return math.exp(ln_common) * (hi + lo)


def _require(approx, kind):
    if approx.kind != kind:
        raise DomainError(f"expected a {kind} approximation, got {approx.kind}")


def aber(spec, mod, noise_approx):
    """Average error rate ``sum_i sum_k A alpha_i psi_k K(m_k, beta + lambda_i B, xi_k, p)``.

    H = 0 channels have no finite-sum form; they go through the gamma MGF,
    which gives the same average exactly.
    """
    _require(noise_approx, "decaying")
    terms = noise_approx.terms
    if spec.is_degenerate:
        return math.fsum(mod.A * a * mgf(spec, lam * mod.B) for a, lam in terms)
    ex = expansion(spec)
    return math.fsum(mod.A * a * kernel_sum(ex, ex.beta + lam * mod.B) for a, lam in terms)


def aber_termwise(spec, mod, noise_approx):
    """Same quantity as :func:`aber`, summed term by term through ``kernel_K``.

    Plain double precision; cancellation in the k-sum grows with mu_tilde.
    """
    _require(noise_approx, "decaying")
    ex = expansion(spec)
    parts = []
    for a, lam in noise_approx.terms:
        b_eff = ex.beta + lam * mod.B
        for t in ex.terms:
            ln_mag = t.ln_abs_psi + ln_kernel_K(t.m, b_eff, t.xi, ex.p)
            parts.append(mod.A * a * t.sign * math.exp(ln_mag))
    return math.fsum(parts)


def acc(spec, log2_approx):
    """Ergodic capacity in bit/s/Hz with a saturating fit of log2(1+x).

    Each fit term a_i (1 - e^(-lambda_i x)) averages to
    a_i [S(beta) - S(beta + lambda_i)], S being :func:`kernel_sum`.
    """
    _require(log2_approx, "saturating")
    terms = log2_approx.terms
    if spec.is_degenerate:
        return math.fsum(a * -math.expm1(math.log(mgf(spec, lam))) for a, lam in terms)
    ex = expansion(spec)
    base = kernel_sum(ex, ex.beta)
    return math.fsum(a * (base - kernel_sum(ex, ex.beta + lam)) for a, lam in terms)


def curve(kind, spec, approx, snr_grid_db, mod=None, clamp=True):
    """Sweep the per-branch mean SNR over a strictly increasing dB grid.

    ``clamp`` limits error rates to [0, 1] and capacities to >= 0 for
    reporting; the underlying :func:`aber`/:func:`acc` values are raw.
    """
    grid = [float(v) for v in snr_grid_db]
    if not grid:
        raise DomainError("empty SNR grid")
    if any(b <= a for a, b in zip(grid, grid[1:])):
        raise DomainError("SNR grid must be strictly increasing")
    if kind == "aber" and mod is None:
        raise DomainError("aber curves need a modulation")
    points = []
    for db in grid:
        point_spec = spec.with_mean_snr(10.0 ** (db / 10.0))
        try:
            if kind == "aber":
                v = aber(point_spec, mod, approx)
                v = min(max(v, 0.0), 1.0) if clamp else v
            elif kind == "acc":
                v = acc(point_spec, approx)
                v = max(v, 0.0) if clamp else v
            else:
                raise DomainError(f"kind must be 'aber' or 'acc', got {kind!r}")
        except DomainError:
            raise
        except Exception as exc:
            raise CurveEvaluationError(db, exc) from exc
        if not np.isfinite(v):
            raise CurveEvaluationError(db, "non-finite value")
        points.append(PerformancePoint(db, v))
    return points
