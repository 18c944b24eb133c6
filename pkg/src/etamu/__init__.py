"""Error rate and ergodic capacity of eta-mu fading with MRC under generalized Gaussian noise."""
__version__ = "0.1.0"

from ._backend import BACKEND, USE_NUMBA
from .approx import ExpSumApprox, eval_approx, fit_expsum, preset_qa
from .errors import (
    ConvergenceError,
    CurveEvaluationError,
    DegenerateChannelError,
    DomainError,
    QuadratureError,
)
from .fading import (
    FadingSpec,
    expansion,
    from_special_case,
    hoyt_literature_spec,
    mgf,
    pdf_bessel,
    pdf_integer,
    sample_snr,
)
from .metrics import ModulationSpec, PerformancePoint, aber, acc, curve, kernel_K, modulation_params
from .noise import NoiseSpec, qa_exact, sample_ggn
from .oracle import (
    MonteCarloEstimate,
    QuadratureSettings,
    aber_mgf_awgn,
    aber_montecarlo,
    aber_quadrature,
    acc_montecarlo,
    acc_quadrature,
    ber_symbol_sim_bpsk,
    hoyt_arbitration,
    pdf_convolution,
)

__all__ = [
    "BACKEND",
    "USE_NUMBA",
    "ExpSumApprox",
    "eval_approx",
    "fit_expsum",
    "preset_qa",
    "ConvergenceError",
    "CurveEvaluationError",
    "DegenerateChannelError",
    "DomainError",
    "QuadratureError",
    "FadingSpec",
    "expansion",
    "from_special_case",
    "hoyt_literature_spec",
    "mgf",
    "pdf_bessel",
    "pdf_integer",
    "sample_snr",
    "ModulationSpec",
    "PerformancePoint",
    "aber",
    "acc",
    "curve",
    "kernel_K",
    "modulation_params",
    "NoiseSpec",
    "qa_exact",
    "sample_ggn",
    "MonteCarloEstimate",
    "QuadratureSettings",
    "aber_mgf_awgn",
    "aber_montecarlo",
    "aber_quadrature",
    "acc_montecarlo",
    "acc_quadrature",
    "ber_symbol_sim_bpsk",
    "hoyt_arbitration",
    "pdf_convolution",
]
