"""Scalar special functions used by the fading densities and closed forms.

All functions raise :class:`~etamu.errors.DomainError` outside their
domain instead of returning NaN. Functions with an iteration budget accept
``full_output=True`` and then return an :class:`EvalResult`.
"""
import math
from dataclasses import dataclass

import numpy as np

from . import _kernels as K
from .errors import DomainError

__all__ = [
    "EvalResult",
    "ln_gamma",
    "gamma_p",
    "gamma_q",
    "lower_inc_gamma",
    "upper_inc_gamma",
    "ln_lower_inc_gamma",
    "ln_upper_inc_gamma",
    "bessel_i",
    "ln_bessel_i",
    "ln_bessel_ive",
    "gauss_2f1",
]


@dataclass(frozen=True)
class EvalResult:
    """Value of an iterative evaluation plus its convergence record."""

    value: float
    converged: bool
    terms_used: int


def _finite(*args):
    return all(math.isfinite(a) for a in args)


def _check_gamma_args(s, x):
    if not _finite(s) or s <= 0.0:
        raise DomainError(f"incomplete gamma needs s > 0, got s={s}")
    if math.isnan(x) or x < 0.0:
        raise DomainError(f"incomplete gamma needs x >= 0, got x={x}")


def _exp_checked(ln_value, what):
    if ln_value > K.LN_DBL_MAX:
        raise OverflowError(f"{what} exceeds the double range (ln value {ln_value:.6g})")
    return math.exp(ln_value)


def ln_gamma(x):
    """Natural log of the gamma function for x > 0."""
    x = float(x)
    if not math.isfinite(x) or x <= 0.0:
        raise DomainError(f"ln_gamma needs x > 0, got {x}")
    return math.lgamma(x)


def gamma_p(s, x, full_output=False):
    """Regularized lower incomplete gamma P(s, x)."""
    s, x = float(s), float(x)
    _check_gamma_args(s, x)
    if math.isinf(x):
        return EvalResult(1.0, True, 0) if full_output else 1.0
    p, _, conv, n = K.gamma_pq(s, x)
    return EvalResult(p, conv, n) if full_output else p


def gamma_q(s, x, full_output=False):
    """Regularized upper incomplete gamma Q(s, x) = 1 - P(s, x)."""
    s, x = float(s), float(x)
    _check_gamma_args(s, x)
    if math.isinf(x):
        return EvalResult(0.0, True, 0) if full_output else 0.0
    _, q, conv, n = K.gamma_pq(s, x)
    return EvalResult(q, conv, n) if full_output else q


def ln_lower_inc_gamma(s, x, full_output=False):
    """ln of the unnormalized lower incomplete gamma."""
    s, x = float(s), float(x)
    _check_gamma_args(s, x)
    if math.isinf(x):
        v, conv, n = math.lgamma(s), True, 0
    else:
        v, conv, n = K.ln_lower_gamma(s, x)
    return EvalResult(v, conv, n) if full_output else v


def ln_upper_inc_gamma(s, x, full_output=False):
    """ln of the unnormalized upper incomplete gamma."""
    s, x = float(s), float(x)
    _check_gamma_args(s, x)
    if math.isinf(x):
        v, conv, n = -math.inf, True, 0
    else:
        v, conv, n = K.ln_upper_gamma(s, x)
    return EvalResult(v, conv, n) if full_output else v


def lower_inc_gamma(s, x, full_output=False):
    """Unnormalized lower incomplete gamma, the integral of t^(s-1) e^(-t) over [0, x].

    Series for x < s + 1, continued fraction otherwise. Raises
    ``OverflowError`` when the value is beyond the double range (s >~ 171).
    """
    r = ln_lower_inc_gamma(s, x, full_output=True)
    v = _exp_checked(r.value, "lower incomplete gamma")
    return EvalResult(v, r.converged, r.terms_used) if full_output else v


def upper_inc_gamma(s, x, full_output=False):
    """Unnormalized upper incomplete gamma Gamma(s, x) = Gamma(s) - gamma(s, x)."""
    r = ln_upper_inc_gamma(s, x, full_output=True)
    v = _exp_checked(r.value, "upper incomplete gamma")
    return EvalResult(v, r.converged, r.terms_used) if full_output else v


def _check_bessel_args(nu, x):
    if not math.isfinite(nu) or nu < -0.5:
        raise DomainError(f"bessel_i supports order >= -0.5, got {nu}")
    if not math.isfinite(x) or x < 0.0:
        raise DomainError(f"bessel_i needs finite x >= 0, got {x}")


def ln_bessel_ive(nu, x, full_output=False):
    """ln(e^-x I_nu(x)), finite for every x the density code can produce."""
    nu, x = float(nu), float(x)
    _check_bessel_args(nu, x)
    v, conv, n = K.ln_ive(nu, x)
    return EvalResult(v, conv, n) if full_output else v


def ln_bessel_i(nu, x):
    """ln I_nu(x)."""
    return ln_bessel_ive(nu, x) + float(x)


def bessel_i(nu, x, full_output=False):
    """Modified Bessel function of the first kind I_nu(x), nu >= -0.5.

    Raises ``OverflowError`` once I_nu(x) leaves the double range (x >~ 713).
    """
    r = ln_bessel_ive(nu, x, full_output=True)
    v = _exp_checked(r.value + float(x), "bessel_i")
    return EvalResult(v, r.converged, r.terms_used) if full_output else v


def ln_bessel_ive_array(nu, x):
    """Vectorized :func:`ln_bessel_ive` over a 1-D array of x."""
    x = np.ascontiguousarray(x, dtype=float)
    _check_bessel_args(float(nu), 0.0)
    if np.any(x < 0.0) or not np.all(np.isfinite(x)):
        raise DomainError("bessel_i needs finite x >= 0")
    return K.ln_ive_array(float(nu), x.ravel()).reshape(x.shape)


# ---------------------------------------------------------------------------
# Gauss hypergeometric function, z <= 0
# ---------------------------------------------------------------------------

MAX_2F1_TERMS = 20_000


def _nonpositive_integer(v):
    return v <= 0.0 and float(v).is_integer()


def _terminating_sum(a, b, c, z):
    """sum_n (a)_n (b)_n / ((c)_n n!) z^n where b is a nonpositive integer."""
    total = 1.0
    term = 1.0
    n = 0
    parts = [1.0]
    while n < -b:
        term *= (a + n) * (b + n) / ((c + n) * (n + 1.0)) * z
        parts.append(term)
        n += 1
    total = math.fsum(parts)
    return total, n + 1


def _taylor(a, b, c, z, max_terms=MAX_2F1_TERMS):
    term = 1.0
    parts = [1.0]
    for n in range(max_terms):
        term *= (a + n) * (b + n) / ((c + n) * (n + 1.0)) * z
        parts.append(term)
        if term == 0.0 or abs(term) < 1e-17 * abs(math.fsum(parts)):
            return math.fsum(parts), True, n + 2
    return math.fsum(parts), False, max_terms + 1


def _euler_terminating(a, b, c, z):
    """(1-z)^(c-a-b) 2F1(c-a, c-b; c; z); c-b must be a nonpositive integer."""
    s, n = _terminating_sum(c - a, c - b, c, z)
    return (1.0 - z) ** (c - a - b) * s, n


def _pfaff_terminating(a, b, c, z):
    """(1-z)^(-a) 2F1(a, c-b; c; z/(z-1)); c-b must be a nonpositive integer."""
    s, n = _terminating_sum(a, c - b, c, z / (z - 1.0))
    return (1.0 - z) ** (-a) * s, n


def gauss_2f1(a, b, c, z, full_output=False):
    """Gauss hypergeometric function 2F1(a, b; c; z) for z <= 0 and c > 0.

    When c - b (or c - a) is a nonpositive integer the function is a finite
    sum after a linear transformation. The Euler form is used when its terms
    share one sign (c - a >= 0), the Pfaff form otherwise. Other parameter
    sets go through the Pfaff map to z/(z-1) in [0, 1) and a Taylor series.
    """
    a, b, c, z = float(a), float(b), float(c), float(z)
    if not _finite(a, b, c, z):
        raise DomainError("gauss_2f1 needs finite arguments")
    if c <= 0.0:
        raise DomainError(f"gauss_2f1 needs c > 0, got c={c}")
    if z > 0.0:
        raise DomainError(f"gauss_2f1 is implemented for z <= 0, got z={z}")
    if z == 0.0:
        res = EvalResult(1.0, True, 1)
        return res if full_output else res.value
    if not _nonpositive_integer(c - b) and _nonpositive_integer(c - a):
        a, b = b, a
    if _nonpositive_integer(c - b):
        if c - a >= 0.0:
            v, n = _euler_terminating(a, b, c, z)
        else:
            v, n = _pfaff_terminating(a, b, c, z)
        res = EvalResult(v, True, n)
    elif _nonpositive_integer(a) or _nonpositive_integer(b):
        s, n = _terminating_sum(b, a, c, z) if _nonpositive_integer(a) else _terminating_sum(a, b, c, z)
        res = EvalResult(s, True, n)
    else:
        w = z / (z - 1.0)
        s, conv, n = _taylor(a, c - b, c, w)
        res = EvalResult((1.0 - z) ** (-a) * s, conv, n)
    return res if full_output else res.value
