"""Additive white generalized Gaussian noise with unit variance.

Density ``f(u) = a*L0 / (2*Gamma(1/a)) * exp(-(L0*|u|)^a)`` with
``L0 = sqrt(Gamma(3/a) / Gamma(1/a))``. a=1 is Laplacian, a=2 Gaussian,
a=0.5 the "gamma" noise of the usual tables.
"""
import math
from dataclasses import dataclass, field

import numpy as np

from . import _kernels as K
from .errors import DomainError

__all__ = ["NoiseSpec", "NOISE_MODELS", "qa_exact", "ggn_pdf", "sample_ggn", "tabulated_qa_scale"]

NOISE_MODELS = {"gamma": 0.5, "laplacian": 1.0, "gaussian": 2.0}


@dataclass(frozen=True)
class NoiseSpec:
    a: float
    lambda0: float = field(init=False)

    def __post_init__(self):
        a = float(self.a)
        if a == 0.0 or math.isinf(a):
            raise DomainError(
                "a=0 (impulsive) and a=inf (uniform) are limits without a finite "
                "tail function; pick 0 < a < inf"
            )
        if not (math.isfinite(a) and a > 0.0):
            raise DomainError(f"noise shape a must be positive, got {self.a}")
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "lambda0", math.sqrt(math.exp(math.lgamma(3.0 / a) - math.lgamma(1.0 / a))))

    @classmethod
    def named(cls, name):
        try:
            return cls(NOISE_MODELS[name.lower()])
        except KeyError:
            raise DomainError(f"unknown noise model {name!r}; known: {sorted(NOISE_MODELS)}") from None


def tabulated_qa_scale(a):
    """L0^(2/a - 1): the factor by which the tabulated exponential fits exceed the tail probability."""
    noise = NoiseSpec(a)
    return noise.lambda0 ** (2.0 / noise.a - 1.0)


def qa_exact(noise, x):
    """Tail probability P(U > x) of unit-variance GGN noise.

    ``Gamma(1/a, (L0 x)^a) / (2 Gamma(1/a))`` for x >= 0 and ``1 - Q_a(-x)``
    for x < 0. Accepts scalars or arrays.
    """
    arr = np.asarray(x, dtype=float)
    if not np.all(np.isfinite(arr)):
        raise DomainError("qa_exact needs finite x")
    s = 1.0 / noise.a
    if arr.ndim == 0:
        v = float(arr)
        _, q, _, _ = K.gamma_pq(s, (noise.lambda0 * abs(v)) ** noise.a)
        return 0.5 * q if v >= 0.0 else 1.0 - 0.5 * q
    flat = np.ascontiguousarray(arr.ravel())
    q = K.gamma_q_array(s, (noise.lambda0 * np.abs(flat)) ** noise.a)
    out = np.where(flat >= 0.0, 0.5 * q, 1.0 - 0.5 * q)
    return out.reshape(arr.shape)


def ggn_pdf(noise, u):
    """Unit-variance generalized Gaussian density."""
    u = np.asarray(u, dtype=float)
    a, lam = noise.a, noise.lambda0
    out = a * lam / (2.0 * math.gamma(1.0 / a)) * np.exp(-((lam * np.abs(u)) ** a))
    return out if out.ndim else float(out)


def sample_ggn(noise, rng, size=None):
    """Draws ``S * W^(1/a) / L0`` with S a random sign and W ~ Gamma(1/a, 1)."""
    w = rng.gamma(1.0 / noise.a, 1.0, size)
    sign = np.where(rng.random(size) < 0.5, -1.0, 1.0)
    out = sign * w ** (1.0 / noise.a) / noise.lambda0
    return out if np.ndim(out) else float(out)
