import json
import os
import subprocess
import sys

import numpy as np
import pytest

from etamu import _backend
from etamu import _kernels as K
from etamu.fading import FadingSpec, expansion

SNIPPET = """
import json
import numpy as np
from etamu import BACKEND, FadingSpec, NoiseSpec, aber, modulation_params, pdf_integer, preset_qa, qa_exact
spec = FadingSpec("I", 0.3, 2.0, 3, 4.0)
g = np.geomspace(1e-3, 80.0, 41)
print(json.dumps({
    "backend": BACKEND,
    "pdf": list(pdf_integer(spec, g)),
    "qa": list(qa_exact(NoiseSpec(1.5), np.linspace(0.0, 5.0, 21))),
    "aber": aber(spec, modulation_params("BPSK"), preset_qa(1.0)),
}))
"""


def run_snippet(disable):
    env = dict(os.environ)
    env.pop(_backend.ENV_FLAG, None)
    if disable:
        env[_backend.ENV_FLAG] = "1"
    proc = subprocess.run([sys.executable, "-c", SNIPPET], capture_output=True, text=True, env=env, timeout=600)
    assert proc.returncode == 0, proc.stderr
    return json.loads(proc.stdout)


@pytest.fixture(scope="module")
def both_backends():
    return run_snippet(False), run_snippet(True)


def test_flag_selects_numpy(both_backends):
    fast, plain = both_backends
    assert plain["backend"] == "numpy"
    assert fast["backend"] == ("numba" if _backend.HAVE_NUMBA else "numpy")


def test_backends_agree(both_backends):
    fast, plain = both_backends
    assert np.allclose(fast["pdf"], plain["pdf"], rtol=1e-12, atol=0.0)
    assert np.allclose(fast["qa"], plain["qa"], rtol=1e-12, atol=0.0)
    assert fast["aber"] == pytest.approx(plain["aber"], rel=1e-12)


@pytest.mark.parametrize("s", [0.4, 1.0, 2.5, 17.0])
def test_gamma_q_twins(s):
    x = np.concatenate(([0.0], np.geomspace(1e-6, 400.0, 300)))
    a = K.gamma_q_array_nb(s, x)
    b = K.gamma_q_array_np(s, x)
    assert np.allclose(a, b, rtol=1e-12, atol=1e-300)


@pytest.mark.parametrize("nu", [0.0, 0.5, 3.5, 12.5])
def test_ln_ive_twins(nu):
    x = np.concatenate((np.geomspace(1e-8, 1e4, 400), [5e-324]))
    a = K.ln_ive_array_nb(nu, x)
    b = K.ln_ive_array_np(nu, x)
    assert np.all(np.isfinite(b))
    assert np.allclose(a, b, rtol=1e-12, atol=1e-12)


@pytest.mark.parametrize("fmt, eta, mu, L", [("I", 0.5, 1.0, 1), ("II", 0.3, 2.0, 3), ("I", 0.05, 3.0, 4)])
def test_integer_pdf_twins(fmt, eta, mu, L):
    ex = expansion(FadingSpec(fmt, eta, mu, L, 3.0))
    g = np.concatenate(([0.0], np.geomspace(1e-4, 300.0, 200)))
    a = K.integer_pdf_array_nb(g, ex.mu_tilde, ex.ln_scale, ex.p, ex.beta)
    b = K.integer_pdf_array_np(g, ex.mu_tilde, ex.ln_scale, ex.p, ex.beta)
    assert np.allclose(a, b, rtol=1e-11, atol=1e-300)
