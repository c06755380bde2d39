"""Compare the compiled kernels with their NumPy reference versions.

Usage::

    python benchmarks/bench_kernels.py [--size 256] [--repeat 20]

Prints the best-of-``repeat`` wall time per call for each kernel and
backend, plus the time of one full Strang step on an ``size x size`` grid
with each backend.
"""
from __future__ import annotations

import argparse
import math
import timeit

import numpy as np

from waveguide_nls import kernels
from waveguide_nls.spectral import DomainSpec, Field
from waveguide_nls.estimates.fields import box_modes
from waveguide_nls.evolution import EvolutionState, evolve


def _cases(n, rng):
    u = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    w = rng.random((n, n))
    # X^{s,b} sum over a band field of the box |j|, |k| <= 32 (L = pi), as in the trials
    d = DomainSpec(math.pi, n, n)
    rows, cols = box_modes(d, min(32, n // 8))
    nt, m = 256, rows.size
    c = rng.standard_normal((nt, m)) + 1j * rng.standard_normal((nt, m))
    tau = -2.0 * np.pi * np.fft.fftfreq(nt, 0.25 / nt)
    symbol = d.grid.symbol[rows, cols]
    space = d.grid.frequency_size[rows, cols] ** 2
    u3 = [rng.standard_normal((8, n, n)) + 1j * rng.standard_normal((8, n, n)) for _ in range(3)]
    out = np.empty_like(u3[0])
    return {
        "nonlinear_rotate": lambda k: k.nonlinear_rotate(u.copy(), 1e-3),
        "abs2_sum": lambda k: k.abs2_sum(u),
        "quartic_sum": lambda k: k.quartic_sum(u),
        "weighted_abs2_sum": lambda k: k.weighted_abs2_sum(u, w),
        "xsb_weighted_sum": lambda k: k.xsb_weighted_sum(c, tau, symbol, space, 0.55),
        "triple_product": lambda k: k.triple_product(u3[0], u3[1], u3[2], out),
    }


def best_time(fn, repeat):
    return min(timeit.repeat(fn, number=1, repeat=repeat))


def main(argv=None):
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--size", type=int, default=256)
    p.add_argument("--repeat", type=int, default=20)
    args = p.parse_args(argv)
    if kernels.fast is None:
        print("compiled kernels not built; only the NumPy reference is available")
    backends = [("numpy", kernels.reference)] + ([("cython", kernels.fast)] if kernels.fast else [])
    rng = np.random.default_rng(0)
    cases = _cases(args.size, rng)
    print(f"{'kernel':<20}" + "".join(f"{name:>12}" for name, _ in backends) + "     speedup")
    for name, fn in cases.items():
        times = [best_time(lambda: fn(k), args.repeat) for _, k in backends]
        speedup = f"{times[0] / times[-1]:10.2f}x" if len(times) > 1 else ""
        print(f"{name:<20}" + "".join(f"{t * 1e3:10.3f}ms" for t in times) + speedup)

    d = DomainSpec(math.pi, args.size, args.size)
    x1, x2 = d.mesh()
    f = Field(0.5 * np.exp(1j * (x1 + 2 * x2)) + 0.2 * np.exp(-1j * x2), d)
    steps = 50
    line = f"{'strang step':<20}"
    times = []
    for _, k in backends:
        saved = kernels.nonlinear_rotate
        kernels.nonlinear_rotate = k.nonlinear_rotate
        try:
            t = best_time(lambda: evolve(EvolutionState(f, dt=1e-3, dealias=False), steps * 1e-3), 3)
        finally:
            kernels.nonlinear_rotate = saved
        times.append(t / steps)
        line += f"{t / steps * 1e3:10.3f}ms"
    if len(times) > 1:
        line += f"{times[0] / times[-1]:10.2f}x"
    print(line)


if __name__ == "__main__":
    main()
