"""Four-term exponential-sum approximations.

Two shapes are supported: ``decaying`` sums ``sum a_i exp(-l_i x)`` for tail
functions such as Q_a(sqrt(x)), and ``saturating`` sums
``sum a_i (1 - exp(-l_i x))`` for increasing targets such as log2(1 + x).
Both keep every fading average inside the same closed-form kernel family.
"""
import math
from dataclasses import dataclass

import numpy as np

from . import kvtext
from .errors import ConvergenceError, DomainError
from .noise import NoiseSpec, qa_exact, tabulated_qa_scale

__all__ = [
    "ExpSumApprox",
    "QA_TABLE",
    "preset_qa",
    "fit_expsum",
    "eval_approx",
    "fit_grid",
    "target_function",
    "measure_max_abs_err",
    "to_record",
    "from_record",
]

KINDS = ("decaying", "saturating")

# Published fitting constants for Q_a(sqrt(x)): (alpha_1..4), (lambda_1..4).
QA_TABLE = {
    0.5: ((44.920, 126.460, 389.400, 96.540), (0.130, 2.311, 12.52, 0.629)),
    1.0: ((0.068, 0.202, 0.182, 0.255), (0.217, 2.185, 0.657, 12.640)),
    1.5: ((0.065, 0.149, 0.136, 0.125), (0.341, 0.712, 10.57, 1.945)),
    2.0: ((0.099, 0.157, 0.124, 0.119), (1.981, 0.534, 0.852, 10.268)),
    2.5: ((0.126, 1.104, -1.125, 0.442), (9.395, 0.833, 0.994, 1.292)),
}
PRESET_DOMAIN = (0.1, 40.0)
DEFAULT_GRID = 200
N_STARTS = 7


@dataclass(frozen=True)
class ExpSumApprox:
    """An exponential-sum approximation and its provenance.

    ``alphas`` are stored as published or fitted; the approximated target
    is ``sum(alphas) / scale`` form, i.e. ``scale`` is the factor the stored
    coefficients carry relative to the target (1 for fitted sums).
    """

    kind: str
    alphas: tuple
    lambdas: tuple
    fit_lo: float
    fit_hi: float
    max_abs_err: float
    target: str = ""
    name: str = ""
    scale: float = 1.0
    n_grid: int = DEFAULT_GRID

    def __post_init__(self):
        if self.kind not in KINDS:
            raise DomainError(f"kind must be one of {KINDS}, got {self.kind!r}")
        alphas = tuple(float(a) for a in self.alphas)
        lambdas = tuple(float(v) for v in self.lambdas)
        if len(alphas) != len(lambdas) or not alphas:
            raise DomainError("alphas and lambdas must be non-empty and equally long")
        if any(not (v > 0.0 and math.isfinite(v)) for v in lambdas):
            raise DomainError("every lambda must be positive and finite")
        object.__setattr__(self, "alphas", alphas)
        object.__setattr__(self, "lambdas", lambdas)

    @property
    def effective_alphas(self):
        return tuple(a / self.scale for a in self.alphas)

    @property
    def terms(self):
        return list(zip(self.effective_alphas, self.lambdas))


def fit_grid(lo, hi, n=DEFAULT_GRID):
    if not (0.0 < lo < hi):
        raise DomainError(f"fit grid needs 0 < lo < hi, got [{lo}, {hi}]")
    return np.geomspace(lo, hi, n)


def target_function(target):
    """Callable for a target name: ``log2`` or ``qa<a>`` / ``qa(<a>)`` (Q_a(sqrt(x)))."""
    t = str(target).strip().lower()
    if t == "log2":
        return lambda x: np.log1p(np.asarray(x, dtype=float)) / math.log(2.0)
    if t.startswith("qa"):
        body = t[2:].strip("()")
        try:
            noise = NoiseSpec(float(body))
        except ValueError:
            raise DomainError(f"cannot read the noise shape in target {target!r}") from None
        return lambda x: qa_exact(noise, np.sqrt(np.asarray(x, dtype=float)))
    raise DomainError(f"unknown target {target!r}; use 'log2' or 'qa<a>'")


def _basis(kind, lambdas, x):
    e = np.exp(-np.outer(x, lambdas))
    return (e if kind == "decaying" else -np.expm1(-np.outer(x, lambdas))), e


def eval_approx(approx, x):
    """Evaluate the approximation of the target at x >= 0 (scalar or array)."""
    arr = np.asarray(x, dtype=float)
    if np.any(arr < 0.0):
        raise DomainError("eval_approx needs x >= 0")
    basis, _ = _basis(approx.kind, np.asarray(approx.lambdas), np.atleast_1d(arr).ravel())
    out = (basis @ np.asarray(approx.effective_alphas)).reshape(arr.shape)
    return out if out.ndim else float(out)


def measure_max_abs_err(approx, target, lo=None, hi=None, n=None):
    """Max |approx - target| on the log-spaced grid (defaults: the approximation's own)."""
    lo = approx.fit_lo if lo is None else lo
    hi = approx.fit_hi if hi is None else hi
    n = approx.n_grid if n is None else n
    x = fit_grid(lo, hi, n)
    f = target_function(target) if isinstance(target, str) else target
    return float(np.max(np.abs(eval_approx(approx, x) - f(x))))


def preset_qa(a):
    """Published 4-term fit of Q_a(sqrt(x)) for a in {0.5, 1, 1.5, 2, 2.5}.

    The published constants approximate L0^(2/a-1) * Q_a(sqrt(x)); that factor
    is kept in ``scale`` so evaluation returns the unit-variance tail.
    """
    key = float(a)
    if key not in QA_TABLE:
        raise DomainError(f"no tabulated fit for a={a}; use fit_expsum('qa{a}', 'decaying')")
    alphas, lambdas = QA_TABLE[key]
    approx = ExpSumApprox(
        kind="decaying",
        alphas=alphas,
        lambdas=lambdas,
        fit_lo=PRESET_DOMAIN[0],
        fit_hi=PRESET_DOMAIN[1],
        max_abs_err=math.nan,
        target=f"qa{key:g}",
        name=f"table-qa{key:g}",
        scale=tabulated_qa_scale(key),
    )
    err = measure_max_abs_err(approx, approx.target)
    return ExpSumApprox(**{**approx.__dict__, "max_abs_err": err})


def _lm_fit(kind, x, y, w, lambdas0, max_iter, tol):
    """Damped Gauss-Newton (Levenberg-Marquardt) over (alpha, ln lambda).

    Steps that push a rate more than six decades outside the grid's decay
    scales are rejected.
    """
    n = len(lambdas0)
    ln_lam_lo = math.log(1e-6 / x[-1])
    ln_lam_hi = math.log(1e6 / x[0])
    basis, _ = _basis(kind, lambdas0, x)
    alphas0 = np.linalg.lstsq(basis * w[:, None], y * w, rcond=None)[0]
    theta = np.concatenate([alphas0, np.log(lambdas0)])

    def residual(th):
        b, _ = _basis(kind, np.exp(th[n:]), x)
        return (b @ th[:n] - y) * w

    def jacobian(th):
        lam = np.exp(th[n:])
        b, e = _basis(kind, lam, x)
        d_ln_lam = e * (x[:, None] * lam[None, :]) * th[None, :n]
        if kind == "decaying":
            d_ln_lam = -d_ln_lam
        return np.hstack([b, d_ln_lam]) * w[:, None]

    r = residual(theta)
    cost = float(r @ r)
    damping = 1e-3
    for it in range(1, max_iter + 1):
        jac = jacobian(theta)
        jtj = jac.T @ jac
        grad = jac.T @ r
        if np.max(np.abs(grad)) <= tol * max(cost, 1e-300):
            return theta, cost, True, it
        improved = False
        while damping < 1e16:
            a_mat = jtj + damping * np.diag(np.maximum(np.diag(jtj), 1e-30))
            try:
                step = np.linalg.solve(a_mat, -grad)
            except np.linalg.LinAlgError:
                damping *= 10.0
                continue
            trial = theta + step
            if np.any(trial[n:] < ln_lam_lo) or np.any(trial[n:] > ln_lam_hi):
                damping *= 4.0
                continue
            r_trial = residual(trial)
            cost_trial = float(r_trial @ r_trial)
            if np.isfinite(cost_trial) and cost_trial < cost:
                rel_drop = (cost - cost_trial) / cost
                theta, r, cost = trial, r_trial, cost_trial
                damping = max(damping / 3.0, 1e-12)
                improved = True
                break
            damping *= 4.0
        if not improved or rel_drop < tol:
            return theta, cost, True, it
    return theta, cost, False, max_iter


def fit_expsum(
    target,
    kind,
    n_terms=4,
    lo=1e-3,
    hi=1e3,
    n_grid=DEFAULT_GRID,
    weighting=None,
    max_iter=500,
    tol=1e-12,
    name=None,
):
    """Least-squares exponential-sum fit on a log-spaced grid over [lo, hi].

    ``target`` is a name understood by :func:`target_function` or a callable.
    ``weighting`` is ``"relative"`` (weights 1/max(target, 1e-6)) or
    ``"absolute"``; the default is relative for decaying sums and absolute
    for saturating sums. Initial decay rates form a geometric ladder over
    [1/hi, 1/lo]. Raises :class:`ConvergenceError` with the best fit attached
    when the iteration budget runs out.
    """
    if kind not in KINDS:
        raise DomainError(f"kind must be one of {KINDS}, got {kind!r}")
    if n_terms < 1:
        raise DomainError("n_terms must be >= 1")
    f = target_function(target) if isinstance(target, str) else target
    x = fit_grid(lo, hi, n_grid)
    y = np.asarray(f(x), dtype=float)
    if not np.all(np.isfinite(y)):
        raise DomainError("target is not finite on the fit grid")
    if weighting is None:
        weighting = "relative" if kind == "decaying" else "absolute"
    if weighting == "relative":
        w = 1.0 / np.maximum(np.abs(y), 1e-6)
    elif weighting == "absolute":
        w = np.ones_like(y)
    else:
        raise DomainError(f"weighting must be 'relative' or 'absolute', got {weighting!r}")
    best = None
    for top in np.geomspace(1.0 / lo, 10.0 / hi, N_STARTS):
        if n_terms > 1:
            lambdas0 = np.geomspace(1.0 / hi, top, n_terms)
        else:
            lambdas0 = np.array([math.sqrt(top / hi)])
        run = _lm_fit(kind, x, y, w, lambdas0, max_iter, tol)
        if best is None or run[1] < best[1]:
            best = run
    theta, cost, converged, iters = best
    order = np.argsort(theta[n_terms:], kind="stable")
    alphas = theta[:n_terms][order]
    lambdas = np.exp(theta[n_terms:][order])
    label = target if isinstance(target, str) else getattr(target, "__name__", "custom")
    approx = ExpSumApprox(
        kind=kind,
        alphas=tuple(alphas),
        lambdas=tuple(lambdas),
        fit_lo=float(lo),
        fit_hi=float(hi),
        max_abs_err=float(np.max(np.abs(_basis(kind, lambdas, x)[0] @ alphas - y))),
        target=str(label),
        name=name or f"fit-{label}-{kind}",
        n_grid=n_grid,
    )
    if not converged:
        raise ConvergenceError(
            f"exponential-sum fit did not converge in {iters} iterations", best=approx, residual=cost
        )
    return approx


def to_record(approx):
    """Serialize as key=value text; floats are written with round-trip precision."""
    items = [
        ("name", approx.name),
        ("target", approx.target),
        ("kind", approx.kind),
        ("n_terms", str(len(approx.alphas))),
        ("scale", kvtext.fmt_float(approx.scale)),
        ("fit_lo", kvtext.fmt_float(approx.fit_lo)),
        ("fit_hi", kvtext.fmt_float(approx.fit_hi)),
        ("n_grid", str(approx.n_grid)),
        ("max_abs_err", kvtext.fmt_float(approx.max_abs_err)),
    ]
    for i, (a, lam) in enumerate(zip(approx.alphas, approx.lambdas), 1):
        items.append((f"alpha.{i}", kvtext.fmt_float(a)))
        items.append((f"lambda.{i}", kvtext.fmt_float(lam)))
    return kvtext.dump(items, header="exponential-sum approximation record")


def from_record(text):
    d = kvtext.parse(text)
    try:
        n = int(d["n_terms"])
        return ExpSumApprox(
            kind=d["kind"],
            alphas=tuple(float(d[f"alpha.{i}"]) for i in range(1, n + 1)),
            lambdas=tuple(float(d[f"lambda.{i}"]) for i in range(1, n + 1)),
            fit_lo=float(d["fit_lo"]),
            fit_hi=float(d["fit_hi"]),
            max_abs_err=float(d["max_abs_err"]),
            target=d.get("target", ""),
            name=d.get("name", ""),
            scale=float(d.get("scale", "1.0")),
            n_grid=int(d.get("n_grid", DEFAULT_GRID)),
        )
    except KeyError as exc:
        raise DomainError(f"approximation record is missing {exc.args[0]!r}") from None
