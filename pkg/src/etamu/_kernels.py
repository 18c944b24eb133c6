"""Hot numeric kernels.

Scalar kernels are written against ``math`` only, so they compile under
numba and also run unchanged as plain Python. Every array kernel exists in
two forms: a numba loop over the scalar kernel (``*_nb``) and a vectorized
numpy version (``*_np``). The public dispatch names at the bottom pick one
according to :mod:`etamu._backend`.
"""
import math

import numpy as np

from ._backend import USE_NUMBA, jit
from ._dd import dd_add, dd_div, dd_div_d, dd_mul, dd_mul_d, two_sum

MAX_TERMS = 100_000
EPS = 2.220446049250313e-16
TINY = 1e-300
SERIES_TOL = 1e-17
DD_TOL = 1e-33
# largest p*snr for which the integer-form sum uses the scaled series path
DD_SERIES_MAX = 100.0
LN_DBL_MAX = 709.782712893384
# above this argument ln_ive switches to the asymptotic expansion
ASYM_X = 50.0
LN2 = 0.6931471805599453


# ---------------------------------------------------------------------------
# incomplete gamma
# ---------------------------------------------------------------------------


@jit
def ln_p_series(s, x):
    """ln P(s, x) from the power series, for 0 < x < s + 1.

    Returns ``(value, converged, terms_used)``.
    """
    term = 1.0
    total = 1.0
    ap = s
    n = 0
    converged = False
    while n < MAX_TERMS:
        n += 1
        ap += 1.0
        term *= x / ap
        total += term
        if term < total * SERIES_TOL:
            converged = True
            break
    value = s * math.log(x) - x - math.lgamma(s + 1.0) + math.log(total)
    return value, converged, n


@jit
def ln_q_cf(s, x):
    """ln Q(s, x) from the Legendre continued fraction (modified Lentz), x >= s + 1."""
    b = x + 1.0 - s
    c = 1.0 / TINY
    d = 1.0 / b
    h = d
    i = 0
    converged = False
    while i < MAX_TERMS:
        i += 1
        an = -i * (i - s)
        b += 2.0
        d = an * d + b
        if abs(d) < TINY:
            d = TINY
        c = b + an / c
        if abs(c) < TINY:
            c = TINY
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) <= EPS:
            converged = True
            break
    value = s * math.log(x) - x - math.lgamma(s) + math.log(h)
    return value, converged, i


@jit
def gamma_pq(s, x):
    """Regularized ``(P, Q, converged, terms_used)`` for s > 0, x >= 0."""
    if x == 0.0:
        return 0.0, 1.0, True, 0
    if x < s + 1.0:
        lp, conv, n = ln_p_series(s, x)
        p = math.exp(lp)
        return p, 1.0 - p, conv, n
    lq, conv, n = ln_q_cf(s, x)
    q = math.exp(lq)
    return 1.0 - q, q, conv, n


@jit
def ln_lower_gamma(s, x):
    """ln of the unnormalized lower incomplete gamma; ``(value, converged, terms)``."""
    if x == 0.0:
        return -math.inf, True, 0
    if x < s + 1.0:
        lp, conv, n = ln_p_series(s, x)
        return math.lgamma(s) + lp, conv, n
    lq, conv, n = ln_q_cf(s, x)
    return math.lgamma(s) + math.log1p(-math.exp(lq)), conv, n


@jit
def ln_upper_gamma(s, x):
    """ln of the unnormalized upper incomplete gamma; ``(value, converged, terms)``."""
    if x == 0.0:
        return math.lgamma(s), True, 0
    if x < s + 1.0:
        lp, conv, n = ln_p_series(s, x)
        return math.lgamma(s) + math.log1p(-math.exp(lp)), conv, n
    lq, conv, n = ln_q_cf(s, x)
    return math.lgamma(s) + lq, conv, n


# ---------------------------------------------------------------------------
# modified Bessel function of the first kind, exponentially scaled
# ---------------------------------------------------------------------------


@jit
def _bessel_peak(nu, x):
    k = math.ceil(0.5 * (math.sqrt(nu * nu + x * x) - (nu + 2.0)))
    if k < 0.0:
        k = 0.0
    return k


@jit
def ln_ive_asymptotic(nu, x):
    """Hankel expansion of e^{-x} I_nu(x) for large x; ``(value, converged, terms)``."""
    mu4 = 4.0 * nu * nu
    total = 1.0
    t = 1.0
    for k in range(1, 200):
        t_new = -t * (mu4 - (2.0 * k - 1.0) ** 2) / (8.0 * k * x)
        if abs(t_new) > abs(t):
            return 0.0, False, k
        t = t_new
        total += t
        if abs(t) < SERIES_TOL * total:
            return math.log(total) - 0.5 * math.log(2.0 * math.pi * x), True, k
    return 0.0, False, 200


@jit
def ln_ive(nu, x):
    """ln(e^{-x} I_nu(x)) for nu >= -0.5, x >= 0; ``(value, converged, terms)``.

    The ascending series has positive terms only; summation starts at the
    largest term and walks outward so nothing overflows. Large x goes through
    the asymptotic expansion, where the series would lose digits to the
    log-gamma of the peak index.
    """
    if x == 0.0:
        if nu == 0.0:
            return 0.0, True, 0
        if nu > 0.0:
            return -math.inf, True, 0
        return math.inf, True, 0
    if x >= ASYM_X and x >= nu * nu:
        v, ok, n = ln_ive_asymptotic(nu, x)
        if ok:
            return v, True, n
    half = 0.5 * x
    q = half * half
    kstar = _bessel_peak(nu, x)
    ln_peak = (2.0 * kstar + nu) * (math.log(x) - LN2) - math.lgamma(kstar + 1.0) - math.lgamma(kstar + nu + 1.0)
    total = 1.0
    t = 1.0
    k = kstar
    n = 0
    converged = False
    while n < MAX_TERMS:
        n += 1
        t *= q / ((k + 1.0) * (k + nu + 1.0))
        k += 1.0
        total += t
        if t < SERIES_TOL * total:
            converged = True
            break
    t = 1.0
    k = kstar
    while k > 0.0:
        n += 1
        t *= (k * (k + nu)) / q
        k -= 1.0
        total += t
        if t < SERIES_TOL * total:
            break
    return ln_peak + math.log(total) - x, converged, n


# ---------------------------------------------------------------------------
# integer-form (finite sum) density and the closed-form kernel sum
# ---------------------------------------------------------------------------


@jit
def scaled_lower_series_dd(s, y):
    """S_s(y) = sum_j y^j / (s (s+1) ... (s+j)) in double-double.

    This is gamma_lower(s, y) / (y^s e^{-y}).
    """
    thi, tlo = dd_div_d(1.0, 0.0, s)
    shi, slo = thi, tlo
    j = 0
    while j < MAX_TERMS:
        j += 1
        thi, tlo = dd_mul_d(thi, tlo, y)
        thi, tlo = dd_div_d(thi, tlo, s + j)
        shi, slo = dd_add(shi, slo, thi, tlo)
        if thi < DD_TOL * shi:
            break
    return shi, slo


@jit
def integer_pdf_point(g, mu_t, ln_scale, p, beta):
    """Integer-form MRC density at one SNR value.

    ``ln_scale`` is ln([mu_t/(omega2-omega1)]^mu_t / ((mu_t-1)!)^2). The
    alternating k-sum is accumulated in double-double.
    """
    if g <= 0.0:
        return 0.0
    n = mu_t - 1
    y = p * g
    acc_hi = 0.0
    acc_lo = 0.0
    if y <= DD_SERIES_MAX:
        # every term shares p^{n+1} g^{2n+1} e^{-(beta+p)g}; what remains is
        # sum_k (-1)^k C(n,k) S_{n+1+k}(y), S walked downward from xi = 2n+1
        s_hi, s_lo = scaled_lower_series_dd(2.0 * n + 1.0, y)
        binom = 1.0
        sign = 1.0 if n % 2 == 0 else -1.0
        for k in range(n, -1, -1):
            xi = n + 1 + k
            if k < n:
                s_hi, s_lo = dd_mul_d(s_hi, s_lo, y)
                s_hi, s_lo = dd_add(s_hi, s_lo, 1.0, 0.0)
                s_hi, s_lo = dd_div_d(s_hi, s_lo, float(xi))
            t_hi, t_lo = dd_mul_d(s_hi, s_lo, sign * binom)
            acc_hi, acc_lo = dd_add(acc_hi, acc_lo, t_hi, t_lo)
            binom = binom * k / (n - k + 1)
            sign = -sign
        ln_common = ln_scale + (n + 1) * math.log(p) + (2 * n + 1) * math.log(g) - (beta + p) * g
        return math.exp(ln_common) * (acc_hi + acc_lo)
    ln_p = math.log(p)
    ln_g = math.log(g)
    binom = 1.0
    sign = 1.0
    for k in range(n + 1):
        xi = n + 1 + k
        lg, _, _ = ln_lower_gamma(float(xi), y)
        ln_t = ln_scale + math.log(binom) - k * ln_p + (n - k) * ln_g - beta * g + lg
        acc_hi, acc_lo = dd_add(acc_hi, acc_lo, sign * math.exp(ln_t), 0.0)
        binom = binom * (n - k) / (k + 1)
        sign = -sign
    return acc_hi + acc_lo


@jit
def kernel_ksum(mu_t, r):
    """sum_k (-1)^k C(n,k) G_k / xi_k with n = mu_t - 1, in double-double.

    G_k = sum_{j<=n-k} c_j u^j v^{2n+1-j}, u = r/(1+r), v = 1/(1+r), is the
    terminating form of 2F1(xi, 2 mu_t; xi+1; -r) times (1+r)^{-xi}, with
    c_j = (n-k)!/(n-k-j)! / (xi+1)_j. Every G_k term is nonnegative.
    Returns ``(hi, lo)``.
    """
    n = mu_t - 1
    top = 2 * n + 1
    ohi, olo = two_sum(1.0, r)
    vhi, vlo = dd_div(1.0, 0.0, ohi, olo)
    uhi, ulo = dd_div(r, 0.0, ohi, olo)
    upow_hi = np.empty(top + 1)
    upow_lo = np.empty(top + 1)
    vpow_hi = np.empty(top + 1)
    vpow_lo = np.empty(top + 1)
    upow_hi[0] = 1.0
    upow_lo[0] = 0.0
    vpow_hi[0] = 1.0
    vpow_lo[0] = 0.0
    for j in range(1, top + 1):
        upow_hi[j], upow_lo[j] = dd_mul(upow_hi[j - 1], upow_lo[j - 1], uhi, ulo)
        vpow_hi[j], vpow_lo[j] = dd_mul(vpow_hi[j - 1], vpow_lo[j - 1], vhi, vlo)
    acc_hi = 0.0
    acc_lo = 0.0
    binom = 1.0
    sign = 1.0
    for k in range(n + 1):
        d = n - k
        xi = n + 1 + k
        c_hi = 1.0
        c_lo = 0.0
        g_hi = 0.0
        g_lo = 0.0
        for j in range(d + 1):
            t_hi, t_lo = dd_mul(c_hi, c_lo, upow_hi[j], upow_lo[j])
            t_hi, t_lo = dd_mul(t_hi, t_lo, vpow_hi[top - j], vpow_lo[top - j])
            g_hi, g_lo = dd_add(g_hi, g_lo, t_hi, t_lo)
            c_hi, c_lo = dd_mul_d(c_hi, c_lo, float(d - j))
            c_hi, c_lo = dd_div_d(c_hi, c_lo, float(xi + 1 + j))
        g_hi, g_lo = dd_mul_d(g_hi, g_lo, sign * binom)
        g_hi, g_lo = dd_div_d(g_hi, g_lo, float(xi))
        acc_hi, acc_lo = dd_add(acc_hi, acc_lo, g_hi, g_lo)
        binom = binom * (n - k) / (k + 1)
        sign = -sign
    return acc_hi, acc_lo


# ---------------------------------------------------------------------------
# array kernels: numba loops
# ---------------------------------------------------------------------------


@jit
def gamma_q_array_nb(s, x):
    out = np.empty(x.shape[0])
    for i in range(x.shape[0]):
        _, q, _, _ = gamma_pq(s, x[i])
        out[i] = q
    return out


@jit
def ln_ive_array_nb(nu, x):
    out = np.empty(x.shape[0])
    for i in range(x.shape[0]):
        v, _, _ = ln_ive(nu, x[i])
        out[i] = v
    return out


@jit
def integer_pdf_array_nb(g, mu_t, ln_scale, p, beta):
    out = np.empty(g.shape[0])
    for i in range(g.shape[0]):
        out[i] = integer_pdf_point(g[i], mu_t, ln_scale, p, beta)
    return out


# ---------------------------------------------------------------------------
# array kernels: vectorized numpy
# ---------------------------------------------------------------------------

_lgamma_ufunc = np.frompyfunc(math.lgamma, 1, 1)


def _lgamma_np(x):
    return np.asarray(_lgamma_ufunc(x), dtype=float)


def _ln_p_series_np(s, x):
    term = np.ones_like(x)
    total = np.ones_like(x)
    active = np.ones(x.shape, dtype=bool)
    ap = s
    for _ in range(MAX_TERMS):
        ap += 1.0
        term = np.where(active, term * x / ap, 0.0)
        total += term
        active &= term >= total * SERIES_TOL
        if not active.any():
            break
    return s * np.log(x) - x - math.lgamma(s + 1.0) + np.log(total)


def _ln_q_cf_np(s, x):
    b = x + 1.0 - s
    c = np.full_like(x, 1.0 / TINY)
    d = 1.0 / b
    h = d.copy()
    active = np.ones(x.shape, dtype=bool)
    for i in range(1, MAX_TERMS):
        an = -i * (i - s)
        b = b + 2.0
        d = an * d + b
        d = np.where(np.abs(d) < TINY, TINY, d)
        c = b + an / c
        c = np.where(np.abs(c) < TINY, TINY, c)
        d = 1.0 / d
        delta = np.where(active, d * c, 1.0)
        h *= delta
        active &= np.abs(delta - 1.0) > EPS
        if not active.any():
            break
    return s * np.log(x) - x - math.lgamma(s) + np.log(h)


def gamma_q_array_np(s, x):
    x = np.asarray(x, dtype=float)
    out = np.ones_like(x)
    lo = (x > 0.0) & (x < s + 1.0)
    hi = x >= s + 1.0
    if lo.any():
        out[lo] = 1.0 - np.exp(_ln_p_series_np(s, x[lo]))
    if hi.any():
        out[hi] = np.exp(_ln_q_cf_np(s, x[hi]))
    return out


def _ln_lower_gamma_np(s, x):
    out = np.full_like(x, -np.inf)
    lo = (x > 0.0) & (x < s + 1.0)
    hi = x >= s + 1.0
    if lo.any():
        out[lo] = math.lgamma(s) + _ln_p_series_np(s, x[lo])
    if hi.any():
        out[hi] = math.lgamma(s) + np.log1p(-np.exp(_ln_q_cf_np(s, x[hi])))
    return out


def ln_ive_array_np(nu, x):
    x = np.asarray(x, dtype=float)
    out = np.empty_like(x)
    zero = x == 0.0
    if zero.any():
        out[zero] = 0.0 if nu == 0.0 else (-np.inf if nu > 0.0 else np.inf)
    pos = ~zero
    if not pos.any():
        return out
    big = pos & (x >= ASYM_X) & (x >= nu * nu)
    if big.any():
        xb = x[big]
        mu4 = 4.0 * nu * nu
        total = np.ones_like(xb)
        t = np.ones_like(xb)
        ok = np.zeros(xb.shape, dtype=bool)
        for k in range(1, 200):
            t_new = -t * (mu4 - (2.0 * k - 1.0) ** 2) / (8.0 * k * xb)
            t = np.where(ok, 0.0, t_new)
            total += t
            ok |= np.abs(t) < SERIES_TOL * total
            if ok.all():
                break
        vals = np.log(total) - 0.5 * np.log(2.0 * np.pi * xb)
        idx = np.flatnonzero(big)
        out[idx[ok]] = vals[ok]
        pos[idx[ok]] = False
        if not pos.any():
            return out
    xp = x[pos]
    half = 0.5 * xp
    q = half * half
    kstar = np.maximum(np.ceil(0.5 * (np.sqrt(nu * nu + xp * xp) - (nu + 2.0))), 0.0)
    ln_peak = (2.0 * kstar + nu) * (np.log(xp) - LN2) - _lgamma_np(kstar + 1.0) - _lgamma_np(kstar + nu + 1.0)
    total = np.ones_like(xp)
    t = np.ones_like(xp)
    k = kstar.copy()
    active = np.ones(xp.shape, dtype=bool)
    for _ in range(MAX_TERMS):
        t = np.where(active, t * q / ((k + 1.0) * (k + nu + 1.0)), 0.0)
        k = k + 1.0
        total += t
        active &= t >= SERIES_TOL * total
        if not active.any():
            break
    t = np.ones_like(xp)
    k = kstar.copy()
    active = k > 0.0
    while active.any():
        # q underflows for subnormal x; those lanes are inactive, so silence 0/0
        with np.errstate(divide="ignore", invalid="ignore"):
            t = np.where(active, t * (k * (k + nu)) / q, 0.0)
        k = np.where(active, k - 1.0, k)
        total += t
        active &= (t >= SERIES_TOL * total) & (k > 0.0)
    out[pos] = ln_peak + np.log(total) - xp
    return out


def _scaled_lower_series_dd_np(s, y):
    thi, tlo = dd_div_d(np.ones_like(y), np.zeros_like(y), s)
    shi, slo = thi.copy(), tlo.copy()
    active = np.ones(y.shape, dtype=bool)
    for j in range(1, MAX_TERMS):
        thi, tlo = dd_mul_d(thi, tlo, y)
        thi, tlo = dd_div_d(thi, tlo, s + j)
        thi = np.where(active, thi, 0.0)
        tlo = np.where(active, tlo, 0.0)
        shi, slo = dd_add(shi, slo, thi, tlo)
        active &= thi >= DD_TOL * shi
        if not active.any():
            break
    return shi, slo


def integer_pdf_array_np(g, mu_t, ln_scale, p, beta):
    g = np.asarray(g, dtype=float)
    out = np.zeros_like(g)
    n = mu_t - 1
    y = p * g
    near = (g > 0.0) & (y <= DD_SERIES_MAX)
    far = y > DD_SERIES_MAX
    if near.any():
        gn = g[near]
        yn = y[near]
        s_hi, s_lo = _scaled_lower_series_dd_np(2.0 * n + 1.0, yn)
        acc_hi = np.zeros_like(gn)
        acc_lo = np.zeros_like(gn)
        binom = 1.0
        sign = 1.0 if n % 2 == 0 else -1.0
        for k in range(n, -1, -1):
            xi = n + 1 + k
            if k < n:
                s_hi, s_lo = dd_mul_d(s_hi, s_lo, yn)
                s_hi, s_lo = dd_add(s_hi, s_lo, 1.0, 0.0)
                s_hi, s_lo = dd_div_d(s_hi, s_lo, float(xi))
            t_hi, t_lo = dd_mul_d(s_hi, s_lo, sign * binom)
            acc_hi, acc_lo = dd_add(acc_hi, acc_lo, t_hi, t_lo)
            binom = binom * k / (n - k + 1)
            sign = -sign
        ln_common = ln_scale + (n + 1) * math.log(p) + (2 * n + 1) * np.log(gn) - (beta + p) * gn
        out[near] = np.exp(ln_common) * (acc_hi + acc_lo)
    if far.any():
        gf = g[far]
        yf = y[far]
        ln_p = math.log(p)
        ln_g = np.log(gf)
        acc_hi = np.zeros_like(gf)
        acc_lo = np.zeros_like(gf)
        binom = 1.0
        sign = 1.0
        for k in range(n + 1):
            lg = _ln_lower_gamma_np(float(n + 1 + k), yf)
            ln_t = ln_scale + math.log(binom) - k * ln_p + (n - k) * ln_g - beta * gf + lg
            acc_hi, acc_lo = dd_add(acc_hi, acc_lo, sign * np.exp(ln_t), np.zeros_like(gf))
            binom = binom * (n - k) / (k + 1)
            sign = -sign
        out[far] = acc_hi + acc_lo
    return out


if USE_NUMBA:
    gamma_q_array = gamma_q_array_nb
    ln_ive_array = ln_ive_array_nb
    integer_pdf_array = integer_pdf_array_nb
else:
    gamma_q_array = gamma_q_array_np
    ln_ive_array = ln_ive_array_np
    integer_pdf_array = integer_pdf_array_np
