"""Model parameters, validation, and derived onset quantities.

The nondimensional Brusselator on the periodic interval [-half_length,
half_length) is

    du1/dt = delta1 u1_xx - (beta+1) u1 + u1^2 u2 + alpha,
    du2/dt = delta2 u2_xx + beta u1 - u1^2 u2,

with uniform equilibrium (alpha, beta/alpha).  The critical wave number is
k1 = pi/half_length; the analysis for a general half_length is identical to
the half_length = pi case with the diffusion rates rescaled by k1^2.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

from .errors import InadmissibleRegime, NonPositiveParameter

_POSITIVE_FIELDS = ("alpha", "beta", "delta1", "delta2", "half_length")


@dataclass(frozen=True)
class ModelParams:
    alpha: float
    beta: float
    delta1: float = 1.0
    delta2: float = 1.0
    half_length: float = math.pi

    @property
    def k1(self) -> float:
        """Fundamental (critical) wave number of the periodic domain."""
        return math.pi / self.half_length

    def effective_diffusion(self):
        """Diffusion rates rescaled so the critical mode has unit wave number."""
        s = self.k1 ** 2
        return self.delta1 * s, self.delta2 * s

    def with_beta(self, beta: float) -> "ModelParams":
        return replace(self, beta=float(beta))


@dataclass(frozen=True)
class OnsetData:
    beta1: float       # critical control value, 1 + alpha^2 + k1^2(delta1+delta2)
    omega: float       # Hopf frequency (0.0 when inadmissible)
    mu: float          # beta - beta1
    admissible: bool


def validate(raw) -> ModelParams:
    """Build a validated ModelParams from a mapping or a ModelParams.

    Raises NonPositiveParameter for any nonpositive constant and
    InadmissibleRegime when the Hopf assumption fails (omega^2 <= 0 or
    beta1 >= (1 + alpha sqrt(delta1/delta2))^2).
    """
    if isinstance(raw, ModelParams):
        params = raw
    else:
        params = ModelParams(**{k: float(v) for k, v in dict(raw).items()})
    for name in _POSITIVE_FIELDS:
        value = getattr(params, name)
        if not (value > 0.0) or not math.isfinite(value):
            raise NonPositiveParameter(name, value)
    data = onset(params)
    if not data.admissible:
        d1e, d2e = params.effective_diffusion()
        w2 = params.alpha ** 2 * (1.0 + d1e - d2e) - d2e ** 2
        raise InadmissibleRegime(
            f"O(2)-Hopf analysis does not apply: omega^2 = {w2:.6g}, "
            f"beta1 = {data.beta1:.6g}, bound = "
            f"{(1.0 + params.alpha * math.sqrt(params.delta1 / params.delta2)) ** 2:.6g}"
        )
    return params


def onset(params: ModelParams) -> OnsetData:
    """Critical value beta1, Hopf frequency omega, and offset mu = beta - beta1.

    Inadmissibility is reported through the flag, never raised, so that
    parameter sweeps can chart the admissibility boundary.
    """
    d1e, d2e = params.effective_diffusion()
    alpha2 = params.alpha ** 2
    beta1 = 1.0 + alpha2 + d1e + d2e
    omega_sq = alpha2 * (1.0 + d1e - d2e) - d2e ** 2
    bound = (1.0 + params.alpha * math.sqrt(params.delta1 / params.delta2)) ** 2
    admissible = omega_sq > 0.0 and beta1 < bound
    omega = math.sqrt(omega_sq) if omega_sq > 0.0 else 0.0
    return OnsetData(beta1=beta1, omega=omega, mu=params.beta - beta1,
                     admissible=admissible)


def load_config(path) -> ModelParams:
    """Read ``key = value`` lines (alpha, beta, delta1, delta2, half_length)."""
    raw = {}
    with open(path) as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ValueError(f"{path}:{lineno}: expected 'key = value', got {line!r}")
            key, value = (part.strip() for part in line.split("=", 1))
            if key not in _POSITIVE_FIELDS:
                raise ValueError(f"{path}:{lineno}: unknown key {key!r}")
            raw[key] = float(value)
    return validate(raw)
