"""Cubic truncated normal form: branches, stability, trajectories, waves.

In polar coordinates z1 = r1 e^{i th1}, z2 = r2 e^{i th2} the truncation
decouples into a planar radial system and two phase equations,

    r1' = r1 (Re a mu + Re b r1^2 + Re c r2^2),
    r2' = r2 (Re a mu + Re b r2^2 + Re c r1^2),
    th1' = omega + Im a mu + Im b r1^2 + Im c r2^2,
    th2' = omega + Im a mu + Im b r2^2 + Im c r1^2.

Nontrivial radial equilibria are the rotating waves (one radius zero) and
the standing waves (equal radii); stability is always read off the radial
Jacobian, never transcribed from a diagram.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import solve_ivp

from .errors import StepSizeUnderflow
from .params import ModelParams, onset
from .spectral import xi1, xi2

DEGENERACY_TOL = 1e-10


@dataclass(frozen=True)
class ReducedSystem:
    mu: float
    omega: float
    a: complex
    b: complex
    c: complex

    @classmethod
    def from_coeffs(cls, nf, mu: float) -> "ReducedSystem":
        return cls(mu=mu, omega=nf.omega, a=nf.a, b=nf.b, c=nf.c)


@dataclass(frozen=True)
class BranchPoint:
    kind: str            # "trivial" | "rotating_wave_1" | "rotating_wave_2" | "standing_wave"
    r1: float
    r2: float
    stability: str       # "stable" | "unstable" | "degenerate"
    frequencies: tuple   # (th1', th2') at the equilibrium


def polar_vector_field(sys: ReducedSystem, r1: float, r2: float,
                       th1: float = 0.0, th2: float = 0.0):
    """(r1', r2', th1', th2'); independent of th1, th2 by construction."""
    aR, bR, cR = sys.a.real, sys.b.real, sys.c.real
    aI, bI, cI = sys.a.imag, sys.b.imag, sys.c.imag
    dr1 = r1 * (aR * sys.mu + bR * r1 ** 2 + cR * r2 ** 2)
    dr2 = r2 * (aR * sys.mu + bR * r2 ** 2 + cR * r1 ** 2)
    dth1 = sys.omega + aI * sys.mu + bI * r1 ** 2 + cI * r2 ** 2
    dth2 = sys.omega + aI * sys.mu + bI * r2 ** 2 + cI * r1 ** 2
    return dr1, dr2, dth1, dth2


def _radial_jacobian(sys: ReducedSystem, r1: float, r2: float) -> np.ndarray:
    aR, bR, cR = sys.a.real, sys.b.real, sys.c.real
    return np.array([
        [aR * sys.mu + 3.0 * bR * r1 ** 2 + cR * r2 ** 2, 2.0 * cR * r1 * r2],
        [2.0 * cR * r1 * r2, aR * sys.mu + 3.0 * bR * r2 ** 2 + cR * r1 ** 2],
    ])


def _stability(sys: ReducedSystem, r1: float, r2: float) -> str:
    eigs = np.linalg.eigvals(_radial_jacobian(sys, r1, r2))
    scale = DEGENERACY_TOL * (1.0 + abs(sys.b) + abs(sys.c))
    if np.any(np.abs(eigs.real) <= scale):
        return "degenerate"
    return "stable" if np.all(eigs.real < 0.0) else "unstable"


def _branch(sys: ReducedSystem, kind: str, r1: float, r2: float,
            stability: str | None = None) -> BranchPoint:
    _, _, dth1, dth2 = polar_vector_field(sys, r1, r2)
    return BranchPoint(kind=kind, r1=r1, r2=r2,
                       stability=stability or _stability(sys, r1, r2),
                       frequencies=(dth1, dth2))


def branches(sys: ReducedSystem) -> list:
    """Trivial branch plus every nontrivial family existing at this mu."""
    aR, bR, cR = sys.a.real, sys.b.real, sys.c.real
    tol = DEGENERACY_TOL * (1.0 + abs(sys.b) + abs(sys.c))
    out = [_branch(sys, "trivial", 0.0, 0.0)]

    if abs(bR) <= tol:
        out.append(_branch(sys, "rotating_wave_1", 0.0, 0.0, stability="degenerate"))
        out.append(_branch(sys, "rotating_wave_2", 0.0, 0.0, stability="degenerate"))
    elif -aR * sys.mu / bR > 0.0:
        r = math.sqrt(-aR * sys.mu / bR)
        out.append(_branch(sys, "rotating_wave_1", r, 0.0))
        out.append(_branch(sys, "rotating_wave_2", 0.0, r))

    bc = bR + cR
    if abs(bc) <= tol:
        out.append(_branch(sys, "standing_wave", 0.0, 0.0, stability="degenerate"))
    elif -aR * sys.mu / bc > 0.0:
        r = math.sqrt(-aR * sys.mu / bc)
        out.append(_branch(sys, "standing_wave", r, r))
    return out


def classify_regime(sys: ReducedSystem) -> dict:
    """Non-degeneracy relations and which wave family is orbitally stable.

    Uses the (A, B) = (c, b - c) correspondence for the quadrant report but
    derives stability from the radial Jacobian, not from a diagram.
    """
    bR, cR = sys.b.real, sys.c.real
    tol = DEGENERACY_TOL * (1.0 + abs(sys.b) + abs(sys.c))
    A = sys.c
    B = sys.b - sys.c
    relations = {
        "Re_B_nonzero": abs(B.real) > tol,                 # Re(b - c) != 0
        "Re_A_plus_B_nonzero": abs(bR) > tol,              # Re b != 0
        "Re_2A_plus_B_nonzero": abs(bR + cR) > tol,        # Re(b + c) != 0
    }
    degenerate = not all(relations.values())

    stable_kinds = []
    if not degenerate:
        probe = sys if sys.mu != 0.0 else ReducedSystem(
            mu=-math.copysign(1e-3, bR), omega=sys.omega, a=sys.a, b=sys.b, c=sys.c)
        for bp in branches(probe):
            if bp.kind != "trivial" and bp.stability == "stable":
                stable_kinds.append(bp.kind)

    return {
        "A_real": A.real,
        "B_real": B.real,
        "sector": (int(np.sign(A.real)), int(np.sign(B.real))),
        "relations": relations,
        "degenerate": degenerate,
        "stable_families": sorted(set(
            "rotating_wave" if k.startswith("rotating") else "standing_wave"
            for k in stable_kinds)),
    }


def integrate_truncated(sys: ReducedSystem, z1_0: complex, z2_0: complex,
                        t_max: float, dt: float, rtol: float = 1e-10,
                        atol: float = 1e-12):
    """Trajectory of the four-real-dimensional truncation, sampled every dt.

    Returns (t, z1, z2) arrays; deterministic for fixed inputs.
    """
    if t_max <= 0.0 or dt <= 0.0:
        raise ValueError("t_max and dt must be positive")

    def rhs(_, y):
        z1 = y[0] + 1j * y[1]
        z2 = y[2] + 1j * y[3]
        f1 = (1j * sys.omega + sys.a * sys.mu + sys.b * abs(z1) ** 2
              + sys.c * abs(z2) ** 2) * z1
        f2 = (1j * sys.omega + sys.a * sys.mu + sys.b * abs(z2) ** 2
              + sys.c * abs(z1) ** 2) * z2
        return [f1.real, f1.imag, f2.real, f2.imag]

    t_eval = np.arange(0.0, t_max + 0.5 * dt, dt)
    y0 = [z1_0.real, z1_0.imag, z2_0.real, z2_0.imag]
    sol = solve_ivp(rhs, (0.0, t_max), y0, t_eval=t_eval, rtol=rtol, atol=atol,
                    method="RK45")
    if not sol.success:
        raise StepSizeUnderflow(sol.message)
    return sol.t, sol.y[0] + 1j * sol.y[1], sol.y[2] + 1j * sol.y[3]


def branch_frequency(sys: ReducedSystem, branch: BranchPoint) -> float:
    """Common rotation rate omega*(mu) at a branch point."""
    return branch.frequencies[0]


def reconstruct_wave(params: ModelParams, sys: ReducedSystem, branch: BranchPoint,
                     phi1: float, phi2: float, t: float, n_grid: int = 256):
    """Sample the leading-order bifurcated wave on the collocation grid.

    Returns (x, u) with u of shape (2, n_grid); the wave is the uniform
    state plus  z1 xi1 + z2 xi2 + conjugates  with z_j = r_j e^{i(w* t + phi_j)}.
    """
    if branch.kind == "trivial":
        raise ValueError("reconstruct_wave requires a nontrivial branch")
    w_star = branch_frequency(sys, branch)
    z1 = branch.r1 * np.exp(1j * (w_star * t + phi1))
    z2 = branch.r2 * np.exp(1j * (w_star * t + phi2))

    L = params.half_length
    x = -L + (2.0 * L / n_grid) * np.arange(n_grid)
    k1 = params.k1
    amp1 = next(iter(xi1(params).terms.values()))
    amp2 = next(iter(xi2(params).terms.values()))
    wave = (z1 * np.exp(1j * k1 * x)[None, :] * amp1[:, None]
            + z2 * np.exp(-1j * k1 * x)[None, :] * amp2[:, None])
    field = wave + np.conj(wave)

    beta = onset(params).beta1 + sys.mu
    uniform = np.array([params.alpha, beta / params.alpha])
    u = uniform[:, None] + field.real
    imag_residue = float(np.max(np.abs(field.imag)))
    return x, u, imag_residue
