"""Linear stability analysis of the uniform state.

Mode n (integer, wave number k = n*pi/half_length) contributes the 2x2 matrix

    M_n = [[-k^2 delta1 + beta - 1,  alpha^2   ],
           [-beta,                  -k^2 delta2 - alpha^2]]

with characteristic polynomial P_n(lambda, beta) = lambda^2 +
(beta(n)-beta) lambda + gamma(n) - k^2 delta2 beta.  At beta = beta1 the
modes n = +-1 carry the doubled pure-imaginary pair +-i omega; all other
nonzero modes stay off the imaginary axis.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainMismatch, InadmissibleRegime
from .modes import ModeSum
from .params import ModelParams, onset

DEFAULT_IMAG_AXIS_TOL = 1e-10
DEFAULT_N_MAX = 64


@dataclass(frozen=True)
class ModeRecord:
    n: int
    k: float
    roots: tuple
    max_real_part: float


@dataclass(frozen=True)
class ScanResult:
    records: list
    verdict: str                 # "hopf_onset" | "stable" | "unstable"
    critical_modes: list
    certificate_margin: float    # uniform lower bound on (gamma(n) - k^2 d2 beta)/k^2


@dataclass(frozen=True)
class TuringReport:
    roots: tuple
    both_positive_real_part: bool


def beta_n(params: ModelParams, n: int) -> float:
    k = n * params.k1
    return 1.0 + params.alpha ** 2 + k ** 2 * (params.delta1 + params.delta2)


def gamma_n(params: ModelParams, n: int) -> float:
    k2 = (n * params.k1) ** 2
    a2 = params.alpha ** 2
    return k2 * params.delta2 + k2 * params.delta1 * a2 \
        + k2 ** 2 * params.delta1 * params.delta2 + a2


def mode_matrix(params: ModelParams, n: int, beta: float) -> np.ndarray:
    k2 = (n * params.k1) ** 2
    a2 = params.alpha ** 2
    return np.array([[-k2 * params.delta1 + beta - 1.0, a2],
                     [-beta, -k2 * params.delta2 - a2]], dtype=complex)


def _quadratic_roots(b: float, c: float):
    """Roots of lambda^2 + b lambda + c, cancellation-safe."""
    disc = b * b - 4.0 * c
    if disc >= 0.0:
        sq = math.sqrt(disc)
        q = -0.5 * (b + math.copysign(sq, b)) if b != 0.0 else sq / 2.0
        if q == 0.0:
            return (0.0 + 0.0j, 0.0 + 0.0j)
        r1 = complex(q)
        r2 = complex(c / q)
        return (r1, r2)
    sq = math.sqrt(-disc)
    return (complex(-b / 2.0, sq / 2.0), complex(-b / 2.0, -sq / 2.0))


def mode_eigenvalues(params: ModelParams, n: int, beta: float | None = None) -> ModeRecord:
    if beta is None:
        beta = params.beta
    k2 = (n * params.k1) ** 2
    b = beta_n(params, n) - beta
    c = gamma_n(params, n) - k2 * params.delta2 * beta
    roots = _quadratic_roots(b, c)
    return ModeRecord(n=n, k=n * params.k1, roots=roots,
                      max_real_part=max(r.real for r in roots))


def onset_scan(params: ModelParams, beta: float | None = None,
               n_max: int = DEFAULT_N_MAX, tol: float = DEFAULT_IMAG_AXIS_TOL) -> ScanResult:
    """Classify the spectrum over modes |n| <= n_max at the given beta."""
    if n_max < 2:
        raise ValueError("n_max must be at least 2")
    data = onset(params)
    if not data.admissible:
        raise InadmissibleRegime("onset scan requires an admissible parameter set")
    if beta is None:
        beta = params.beta

    records = [mode_eigenvalues(params, n, beta) for n in range(0, n_max + 1)]
    critical = [r.n for r in records
                if r.n != 0 and abs(r.max_real_part) <= tol
                and max(abs(root.real) for root in r.roots) <= tol]
    unstable = [r.n for r in records if r.n != 0 and r.max_real_part > tol]
    if critical and not unstable:
        verdict = "hopf_onset"
    elif unstable:
        verdict = "unstable"
    else:
        verdict = "stable"

    # Closed-form certificate: gamma(n) - k^2 d2 beta >= k^2 d2 (bound - beta),
    # uniform over all nonzero modes.
    bound = (1.0 + params.alpha * math.sqrt(params.delta1 / params.delta2)) ** 2
    margin = params.delta2 * (bound - beta)

    crit = sorted(set(critical) | {-n for n in critical})
    return ScanResult(records=records, verdict=verdict, critical_modes=crit,
                      certificate_margin=margin)


def turing_check(params: ModelParams) -> TuringReport:
    """Diffusionless (n = 0) spectrum at beta1: both roots in the right half plane."""
    data = onset(params)
    rec = mode_eigenvalues(params, 0, data.beta1)
    return TuringReport(roots=rec.roots,
                        both_positive_real_part=all(r.real > 0 for r in rec.roots))


def _critical_amp(params: ModelParams) -> np.ndarray:
    d1e, d2e = params.effective_diffusion()
    a2 = params.alpha ** 2
    w = onset(params).omega
    return np.array([1.0, (-a2 - d2e + 1j * w) / a2], dtype=complex)


def xi1(params: ModelParams) -> ModeSum:
    """Eigenfunction of the critical mode n = 1 for eigenvalue +i omega."""
    return ModeSum.single(1, _critical_amp(params))


def xi2(params: ModelParams) -> ModeSum:
    """Reflected eigenfunction S xi1 (mode -1, same amplitude, eigenvalue +i omega)."""
    return xi1(params).reflect()


def xi1_star(params: ModelParams) -> ModeSum:
    """Dual eigenfunction, normalized so <xi1, xi1*> = 1."""
    d1e, d2e = params.effective_diffusion()
    a2 = params.alpha ** 2
    w = onset(params).omega
    pref = 1j * a2 / (4.0 * params.half_length * w)
    amp = pref * np.array([(d2e + a2 - 1j * w) / a2, 1.0], dtype=complex)
    return ModeSum.single(1, amp)


def inner_product(params: ModelParams, f: ModeSum, g: ModeSum) -> complex:
    """Hermitian pairing int (f1 conj(g1) + f2 conj(g2)) dx over one period.

    Computed exactly by mode orthogonality.  Fields sampled on grids are
    handled by the simulation module; this pairing is the algebraic one.
    """
    if not isinstance(f, ModeSum) or not isinstance(g, ModeSum):
        raise DomainMismatch("inner_product expects two ModeSums over the same domain")
    total = 0.0 + 0.0j
    for n, a in f.terms.items():
        b = g.terms.get(n)
        if b is not None:
            total += np.dot(a, np.conj(b))
    return complex(2.0 * params.half_length * total)


def dispersion_curve(params: ModelParams, beta: float | None = None,
                     n_max: int = DEFAULT_N_MAX):
    """(n, k, max Re lambda, Im lambda of the leading root) rows for plotting."""
    rows = []
    for n in range(0, n_max + 1):
        rec = mode_eigenvalues(params, n, beta)
        lead = max(rec.roots, key=lambda r: (r.real, r.imag))
        rows.append((n, rec.k, rec.max_real_part, lead.imag))
    return rows
