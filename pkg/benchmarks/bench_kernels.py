"""Time the hot kernels under the numba backend and the pure-numpy fallback.

    python benchmarks/bench_kernels.py [--repeat 5] [--size 200000]

Each backend runs in its own interpreter because the choice is fixed at
import time by ETAMU_DISABLE_NUMBA. The first call of every kernel is a
warm-up (numba compiles there) and is not timed.
"""
import argparse
import json
import os
import subprocess
import sys
import time

WORKER = "--worker"


def bench(repeat, size):
    import numpy as np

    from etamu import BACKEND, FadingSpec, NoiseSpec, aber, modulation_params, pdf_integer, preset_qa, qa_exact
    from etamu import _kernels as K

    x = np.linspace(0.0, 6.0, size)
    g = np.geomspace(1e-3, 100.0, size)
    spec = FadingSpec("I", 0.3, 2.0, 3, 5.0)
    noise = NoiseSpec(1.5)
    bp, fit = modulation_params("BPSK"), preset_qa(1.0)
    specs = [spec.with_mean_snr(10.0 ** (d / 10.0)) for d in range(31)]
    cases = {
        "qa_exact": lambda: qa_exact(noise, x),
        "ln_ive_array": lambda: K.ln_ive_array(4.5, g),
        "pdf_integer": lambda: pdf_integer(spec, g),
        "aber_curve_31pt": lambda: [aber(s, bp, fit) for s in specs],
    }
    out = {"backend": BACKEND}
    for name, fn in cases.items():
        fn()
        times = []
        for _ in range(repeat):
            t0 = time.perf_counter()
            fn()
            times.append(time.perf_counter() - t0)
        out[name] = min(times)
    return out


def run_backend(disable, repeat, size):
    env = dict(os.environ)
    env.pop("ETAMU_DISABLE_NUMBA", None)
    if disable:
        env["ETAMU_DISABLE_NUMBA"] = "1"
    cmd = [sys.executable, __file__, WORKER, "--repeat", str(repeat), "--size", str(size)]
    proc = subprocess.run(cmd, env=env, capture_output=True, text=True, check=True)
    return json.loads(proc.stdout)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--size", type=int, default=200_000)
    ap.add_argument(WORKER, action="store_true", help=argparse.SUPPRESS)
    args = ap.parse_args()
    if args.worker:
        print(json.dumps(bench(args.repeat, args.size)))
        return
    fast = run_backend(False, args.repeat, args.size)
    plain = run_backend(True, args.repeat, args.size)
    print(f"array size {args.size}, best of {args.repeat}")
    print(f"{'kernel':<18}{fast['backend']:>12}{plain['backend']:>12}{'speedup':>10}")
    for name in fast:
        if name == "backend":
            continue
        a, b = fast[name], plain[name]
        print(f"{name:<18}{a * 1e3:>10.2f}ms{b * 1e3:>10.2f}ms{b / a:>9.1f}x")


if __name__ == "__main__":
    main()
