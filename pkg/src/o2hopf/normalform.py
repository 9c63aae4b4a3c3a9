"""Normal-form coefficients a, b, c of the cubic O(2)-Hopf reduction.

Three routes are provided:

* ``projection`` (authoritative): solve the four 2x2 resolvent systems for
  the quadratic-order reduction functions, assemble the cubic-order
  residual sums with the multilinear maps, and project onto the dual
  eigenfunction.
* ``direct``: literal complex-arithmetic evaluation of the unsimplified
  projection expressions, with reciprocals of P_2(2i omega), P_0(2i omega)
  and P_2(0) computed by actual complex division.
* ``closed_form``: the fully simplified published expressions through
  the constants N_r, N_i, B_r, B_i, C_2r, C_2i, Q_r, Q_i, P_2(0).  These
  embed a reciprocal of P_2(2i omega) that disagrees with direct division
  by a constant factor, so this route is reproduced and reported as-is
  rather than reconciled; the discrepancy against the other two routes is
  part of the coefficient report.

All coefficients depend only on alpha, delta1, delta2 and the domain
length, never on mu.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import SingularSystem
from .modes import ModeSum, R01, R20, R30
from .params import ModelParams, onset
from .spectral import inner_product, mode_matrix, xi1, xi1_star, xi2

ROUTES = ("projection", "direct", "closed_form")
A_ROUTES = ("projection", "asymptotic")

_DET_GUARD = 1e-13


@dataclass(frozen=True)
class PsiTable:
    psi_00001: ModeSum
    psi_11000: ModeSum
    psi_00110: ModeSum
    psi_20000: ModeSum
    psi_10100: ModeSum
    psi_10010: ModeSum

    def residuals(self, params: ModelParams) -> dict:
        """Relative residual of each defining resolvent equation."""
        w = onset(params).omega
        x1, x2 = xi1(params), xi2(params)
        checks = {
            "psi_11000": (0.0, 0, self.psi_11000,
                          2.0 * R20(params, x1, x1.conj())),
            "psi_20000": (2j * w, 2, self.psi_20000,
                          R20(params, x1, x1)),
            "psi_10100": (2j * w, 0, self.psi_10100,
                          2.0 * R20(params, x1, x2)),
            "psi_10010": (0.0, 2, self.psi_10010,
                          2.0 * R20(params, x1, x2.conj())),
        }
        out = {}
        for name, (z, n, psi, rhs) in checks.items():
            lhs = _apply_resolvent(params, z, psi)
            out[name] = (lhs - rhs).norm() / (1.0 + rhs.norm())
        beta1 = onset(params).beta1
        m0 = mode_matrix(params, 0, beta1) + np.array([[1.0, 0.0], [-1.0, 0.0]])
        out["psi_00001"] = float(np.linalg.norm(m0 @ self.psi_00001.amp(0)))
        return out


@dataclass(frozen=True)
class NormalFormCoeffs:
    a: complex
    b: complex
    c: complex
    route: str
    omega: float
    beta1: float


def _apply_resolvent(params: ModelParams, z: complex, psi: ModeSum) -> ModeSum:
    """(z I - L_{beta1}) acting on a mode sum."""
    beta1 = onset(params).beta1
    out = {}
    for n, amp in psi.terms.items():
        out[n] = (z * np.eye(2) - mode_matrix(params, n, beta1)) @ amp
    return ModeSum(out)


def _solve_2x2(params: ModelParams, z: complex, n: int, rhs: np.ndarray,
               label: str) -> np.ndarray:
    """Solve (z I - M_n) V = rhs by adjugate, guarding against degeneracy."""
    m = z * np.eye(2, dtype=complex) - mode_matrix(params, n, onset(params).beta1)
    det = m[0, 0] * m[1, 1] - m[0, 1] * m[1, 0]
    scale = max(np.max(np.abs(m)) ** 2, 1.0)
    if abs(det) <= _DET_GUARD * scale:
        raise SingularSystem(f"{label}: value {z} is in the spectrum of M_{n}")
    adj = np.array([[m[1, 1], -m[0, 1]], [-m[1, 0], m[0, 0]]], dtype=complex)
    return (adj @ rhs) / det


def solve_psi(params: ModelParams) -> PsiTable:
    """Quadratic-order reduction functions from the four resolvent systems."""
    beta1 = onset(params).beta1
    w = onset(params).omega
    x1, x2 = xi1(params), xi2(params)
    a2 = params.alpha ** 2

    # (L + R01) psi_00001 = 0; the zero-mode matrix has determinant alpha^2.
    m0 = mode_matrix(params, 0, beta1) + np.array([[1.0, 0.0], [-1.0, 0.0]])
    det0 = m0[0, 0] * m0[1, 1] - m0[0, 1] * m0[1, 0]
    if abs(det0 - a2) > 1e-9 * max(a2, 1.0):
        raise SingularSystem("zero-mode matrix for psi_00001 lost its alpha^2 determinant")
    psi_00001 = ModeSum.zero()

    # L psi_11000 = -2 R20(xi1, conj xi1)  <=>  (0 I - M_0) V = 2 R20(...)
    rhs = 2.0 * R20(params, x1, x1.conj())
    psi_11000 = ModeSum.single(0, _solve_2x2(params, 0.0, 0, rhs.amp(0), "psi_11000"))

    # (2i omega - L) psi_20000 = R20(xi1, xi1), mode 2
    rhs = R20(params, x1, x1)
    psi_20000 = ModeSum.single(2, _solve_2x2(params, 2j * w, 2, rhs.amp(2), "psi_20000"))

    # (2i omega - L) psi_10100 = 2 R20(xi1, xi2), mode 0
    rhs = 2.0 * R20(params, x1, x2)
    psi_10100 = ModeSum.single(0, _solve_2x2(params, 2j * w, 0, rhs.amp(0), "psi_10100"))

    # L psi_10010 = -2 R20(xi1, conj xi2)  <=>  (0 I - M_2) V = 2 R20(...), mode 2
    rhs = 2.0 * R20(params, x1, x2.conj())
    psi_10010 = ModeSum.single(2, _solve_2x2(params, 0.0, 2, rhs.amp(2), "psi_10010"))

    return PsiTable(psi_00001=psi_00001,
                    psi_11000=psi_11000,
                    psi_00110=psi_11000.reflect(),
                    psi_20000=psi_20000,
                    psi_10100=psi_10100,
                    psi_10010=psi_10010)


def _char_poly(params: ModelParams, n: int, lam: complex) -> complex:
    """P_n(lambda, beta1) in the unit-wave-number normalization."""
    alpha, (d1, d2) = params.alpha, params.effective_diffusion()
    a2 = alpha ** 2
    beta1 = 1.0 + a2 + d1 + d2
    bn = 1.0 + a2 + n ** 2 * (d1 + d2)
    gn = n ** 2 * d2 + n ** 2 * d1 * a2 + n ** 4 * d1 * d2 + a2
    return lam ** 2 + (bn - beta1) * lam + gn - n ** 2 * d2 * beta1


def coeff_a(params: ModelParams, route: str = "projection") -> complex:
    d1, d2 = params.effective_diffusion()
    w = onset(params).omega
    if route == "projection":
        psi = solve_psi(params)
        vec = R01(xi1(params)) + 2.0 * R20(params, xi1(params), psi.psi_00001)
        return inner_product(params, vec, xi1_star(params))
    if route == "asymptotic":
        # d/dmu of lambda_+(mu) = mu/2 + i sqrt(omega^2 - d2 mu - mu^2/4) at mu = 0
        return 0.5 - 1j * d2 / (2.0 * w)
    raise ValueError(f"unknown a-route {route!r}; expected one of {A_ROUTES}")


def _b_projection(params: ModelParams, psi: PsiTable) -> complex:
    x1 = xi1(params)
    vec = (2.0 * R20(params, x1, psi.psi_11000)
           + 2.0 * R20(params, x1.conj(), psi.psi_20000)
           + 3.0 * R30(params, x1, x1, x1.conj()))
    return inner_product(params, vec, xi1_star(params))


def _c_projection(params: ModelParams, psi: PsiTable) -> complex:
    x1, x2 = xi1(params), xi2(params)
    vec = (2.0 * R20(params, x1, psi.psi_00110)
           + 2.0 * R20(params, x2, psi.psi_10010)
           + 2.0 * R20(params, x2.conj(), psi.psi_10100)
           + 6.0 * R30(params, x1, x2, x2.conj()))
    return inner_product(params, vec, xi1_star(params))


def _b_direct(params: ModelParams) -> complex:
    alpha, (d1, d2) = params.alpha, params.effective_diffusion()
    a2 = alpha ** 2
    data = onset(params)
    beta1, w = data.beta1, data.omega
    p2w = _char_poly(params, 2, 2j * w)
    if p2w == 0:
        raise SingularSystem("P_2(2i omega) vanishes")
    pref = (w - 1j * d2) / (2.0 * w * a2)
    term = 5.0 * (a2 + d2) - 4.0 * beta1 + 1j * w
    fac = -2.0 * (a2 + d2) + beta1 + 2j * w
    brk = -a2 * (2j * w + 4.0 * d1 + 1.0) - (2j * w + 4.0 * d2) * (1j * w - 1.0 - d1)
    return pref * (term + (2.0 / p2w) * fac * brk)


def _c_direct(params: ModelParams) -> complex:
    alpha, (d1, d2) = params.alpha, params.effective_diffusion()
    a2 = alpha ** 2
    data = onset(params)
    beta1, w = data.beta1, data.omega
    p20 = _char_poly(params, 2, 0.0)
    p02w = _char_poly(params, 0, 2j * w)
    if p20 == 0 or p02w == 0:
        raise SingularSystem("P_2(0) or P_0(2i omega) vanishes")
    c1 = (4.0 / p20) * ((2.0 * (a2 + d2) - beta1) / alpha) \
        * (alpha * (4.0 * d1 + 1.0) - (4.0 * d2 / alpha) * (1j * w + 1.0 + d1))
    c2 = (4.0 / p02w) * ((beta1 - 2.0 * (a2 + d2) + 2j * w) / alpha) \
        * (-alpha * (2j * w + 1.0) + (2j * w / alpha) * (-1j * w + 1.0 + d1))
    pref = -1j * (d2 + 1j * w) / (2.0 * w)
    return pref * ((2.0 * (a2 + d2) - 4.0 * beta1 + 2j * w) / a2 + c1 + c2)


def closed_form_constants(params: ModelParams) -> dict:
    """The published intermediate constants, evaluated literally."""
    alpha, (d1, d2) = params.alpha, params.effective_diffusion()
    a2 = alpha ** 2
    data = onset(params)
    beta1, w = data.beta1, data.omega
    w2 = w * w

    n_common = 2.0 * w2 + 4.0 * d2 + 4.0 * d1 * d2 - a2 - 4.0 * a2 * d1
    m_common = 2.0 + 2.0 * d1 - 4.0 * d2 - 2.0 * a2
    nr = (beta1 - 2.0 * a2 - 2.0 * d2) * n_common - 2.0 * w2 * m_common
    ni = (beta1 - 2.0 * a2 - 2.0 * d2) * m_common + 2.0 * n_common

    denom = (a2 - 4.0 * d1 * d2) ** 2 + 4.0 * (d1 + d2) ** 2 * w2
    br = (-6.0 / denom) * ((a2 - 4.0 * d1 * d2) * nr - 2.0 * w2 * (d1 + d2) * ni)
    bi = (-6.0 / denom) * ((a2 - 4.0 * d1 * d2) * ni + 2.0 * (d1 + d2) * nr)

    re_b = (5.0 * a2 + 5.0 * d2 - 4.0 * beta1 + br + d2 + d2 * bi) / (2.0 * a2)
    im_b = (w2 + w2 * bi - 5.0 * d2 * a2 - 5.0 * d2 ** 2 + 4.0 * d2 * beta1
            - d2 * br) / (2.0 * w * a2)

    inner1 = (1.0 + d1 - d2 - a2) * (2.0 * w2 - a2) - 4.0 * (1.0 + d1 - a2) * w2
    inner2 = 2.0 * w2 - a2 + (1.0 + d1 - d2 - a2) * (1.0 + d1 - a2)
    c2r = (a2 - 4.0 * d1 * d2) * inner1 - 4.0 * w2 * (d1 + d2) * inner2
    c2i = 2.0 * w * ((d1 + d2) * inner1 + (a2 - 4.0 * d1 * d2) * inner2)

    p20 = a2 * (4.0 * d1 - 4.0 * d2 + 1.0) + 12.0 * d1 * d2 - 4.0 * d2 ** 2
    if p20 == 0:
        raise SingularSystem("P_2(0) vanishes")
    qr = (2.0 * (a2 + d2) - 4.0 * beta1
          + (4.0 / p20) * (2.0 * a2 + 2.0 * d2 - beta1)
          * (4.0 * a2 * d1 + a2 - 4.0 * d2 - 4.0 * d1 * d2)
          - 12.0 * c2r / denom)
    qi = (2.0 * w - (16.0 * d2 * w / p20) * (2.0 * a2 + 2.0 * d2 - beta1)
          - 12.0 * c2i / denom)

    re_c = (w * qr + d2 * qi) / (2.0 * w * a2)
    im_c = (w * qi - d2 * qr) / (2.0 * w * a2)

    return {
        "N_r": nr, "N_i": ni, "B_r": br, "B_i": bi,
        "C_2r": c2r, "C_2i": c2i, "Q_r": qr, "Q_i": qi,
        "P2_0": p20,
        "P2_2iw": _char_poly(params, 2, 2j * w),
        "P0_2iw": _char_poly(params, 0, 2j * w),
        "b": complex(re_b, im_b),
        "c": complex(re_c, im_c),
        "C_1": (4.0 / p20) * ((2.0 * (a2 + d2) - beta1) / alpha)
               * (alpha * (4.0 * d1 + 1.0) - (4.0 * d2 / alpha) * (1j * w + 1.0 + d1)),
        "C_2": -12.0 * complex(c2r, c2i) / (a2 * denom),
    }


def coeff_b(params: ModelParams, route: str = "projection") -> complex:
    if route == "projection":
        return _b_projection(params, solve_psi(params))
    if route == "direct":
        return _b_direct(params)
    if route == "closed_form":
        return closed_form_constants(params)["b"]
    raise ValueError(f"unknown route {route!r}; expected one of {ROUTES}")


def coeff_c(params: ModelParams, route: str = "projection") -> complex:
    if route == "projection":
        return _c_projection(params, solve_psi(params))
    if route == "direct":
        return _c_direct(params)
    if route == "closed_form":
        return closed_form_constants(params)["c"]
    raise ValueError(f"unknown route {route!r}; expected one of {ROUTES}")


def coeffs(params: ModelParams, route: str = "projection") -> NormalFormCoeffs:
    data = onset(params)
    a_route = "asymptotic" if route != "projection" else "projection"
    return NormalFormCoeffs(a=coeff_a(params, a_route),
                            b=coeff_b(params, route),
                            c=coeff_c(params, route),
                            route=route, omega=data.omega, beta1=data.beta1)


def projection_residual_orthogonality(params: ModelParams) -> dict:
    """|<residual, xi1*>| for the three projected residual vectors.

    Each residual (the assembled sum minus its coefficient times xi1) must
    lie in the range of (i omega - L), hence be orthogonal to xi1*.
    """
    psi = solve_psi(params)
    x1, x2 = xi1(params), xi2(params)
    star = xi1_star(params)
    a = coeff_a(params, "projection")
    b = _b_projection(params, psi)
    c = _c_projection(params, psi)
    vec_a = -a * x1 + R01(x1) + 2.0 * R20(params, x1, psi.psi_00001)
    vec_b = (-b * x1 + 2.0 * R20(params, x1, psi.psi_11000)
             + 2.0 * R20(params, x1.conj(), psi.psi_20000)
             + 3.0 * R30(params, x1, x1, x1.conj()))
    vec_c = (-c * x1 + 2.0 * R20(params, x1, psi.psi_00110)
             + 2.0 * R20(params, x2, psi.psi_10010)
             + 2.0 * R20(params, x2.conj(), psi.psi_10100)
             + 6.0 * R30(params, x1, x2, x2.conj()))
    return {name: abs(inner_product(params, vec, star))
            for name, vec in (("a", vec_a), ("b", vec_b), ("c", vec_c))}


def coeffs_report(params: ModelParams, consistency_tol: float = 1e-8) -> dict:
    """All routes, all intermediate constants, and pairwise discrepancies."""
    from .meanzero import zero_mode_content  # local import to avoid a cycle

    data = onset(params)
    psi = solve_psi(params)
    constants = closed_form_constants(params)

    per_route = {}
    for route in ROUTES:
        per_route[route] = {
            "a": coeff_a(params, "projection" if route == "projection" else "asymptotic"),
            "b": _b_projection(params, psi) if route == "projection"
                 else (_b_direct(params) if route == "direct" else constants["b"]),
            "c": _c_projection(params, psi) if route == "projection"
                 else (_c_direct(params) if route == "direct" else constants["c"]),
        }

    discrepancies = {}
    consistent = {}
    for i, r1 in enumerate(ROUTES):
        for r2 in ROUTES[i + 1:]:
            for name in ("a", "b", "c"):
                v1, v2 = per_route[r1][name], per_route[r2][name]
                gap = abs(v1 - v2)
                discrepancies[f"{name}:{r1}|{r2}"] = gap
                consistent[f"{name}:{r1}|{r2}"] = \
                    gap <= consistency_tol * (1.0 + max(abs(v1), abs(v2)))

    return {
        "params": params,
        "beta1": data.beta1,
        "omega": data.omega,
        "mu": data.mu,
        "routes": per_route,
        "constants": {k: v for k, v in constants.items() if k not in ("b", "c")},
        "psi_residuals": psi.residuals(params),
        "residual_orthogonality": projection_residual_orthogonality(params),
        "discrepancies": discrepancies,
        "consistent": consistent,
        "mean_zero_obstruction": zero_mode_content(params, psi),
    }
