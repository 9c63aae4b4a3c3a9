"""Shared helpers for the test suite."""

import math

import numpy as np

from o2hopf import ModelParams, onset


def random_admissible(rng, vary_domain=False):
    """Rejection-sample a validated parameter set at beta = beta1."""
    lengths = (math.pi, math.pi / 2, 2.0, 5.0) if vary_domain else (math.pi,)
    while True:
        p = ModelParams(alpha=float(rng.uniform(0.5, 3.0)),
                        beta=1.0,
                        delta1=float(rng.uniform(0.2, 2.0)),
                        delta2=float(rng.uniform(0.1, 1.5)),
                        half_length=float(rng.choice(lengths)))
        data = onset(p)
        if data.admissible:
            return p.with_beta(data.beta1)


def evaluate_on_grid(mode_sum, params, x):
    """Sample a ModeSum on grid points x, returning a (2, len(x)) array."""
    out = np.zeros((2, x.size), dtype=complex)
    for n, amp in mode_sum.terms.items():
        out += amp[:, None] * np.exp(1j * n * params.k1 * x)[None, :]
    return out
