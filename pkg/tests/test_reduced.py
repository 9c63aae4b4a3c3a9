import math

import numpy as np
import pytest
from conftest import evaluate_on_grid

from o2hopf import ReducedSystem, onset, validate
from o2hopf.normalform import coeffs
from o2hopf.reduced import (branch_frequency, branches, classify_regime,
                            integrate_truncated, polar_vector_field,
                            reconstruct_wave)

CANON = validate({"alpha": 2.0, "beta": 7.0})
RT3 = math.sqrt(3.0)
NF = coeffs(CANON, "projection")
A_CANON = 0.5 - 1j / (2.0 * RT3)


def closed_form_system(mu):
    # the published simplified coefficients (Re b = -17/8, Re c = 11/4)
    cf = coeffs(CANON, "closed_form")
    return ReducedSystem(mu=mu, omega=RT3, a=cf.a, b=cf.b, c=cf.c)


def projection_system(mu):
    return ReducedSystem.from_coeffs(NF, mu)


class TestVectorField:
    def test_origin(self):
        sys = projection_system(0.2)
        dr1, dr2, dth1, dth2 = polar_vector_field(sys, 0.0, 0.0)
        assert dr1 == 0.0 and dr2 == 0.0
        expected = RT3 + sys.a.imag * 0.2
        assert abs(dth1 - expected) < 1e-14 and dth1 == dth2

    def test_exchange_symmetry(self):
        sys = projection_system(0.07)
        rng = np.random.default_rng(0)
        for _ in range(5):
            r1, r2 = rng.uniform(0, 0.5, 2)
            f = polar_vector_field(sys, r1, r2)
            g = polar_vector_field(sys, r2, r1)
            assert abs(f[0] - g[1]) < 1e-14 and abs(f[1] - g[0]) < 1e-14
            assert abs(f[2] - g[3]) < 1e-14 and abs(f[3] - g[2]) < 1e-14

    def test_rotating_equilibrium_closed_form(self):
        mu = 0.17
        sys = closed_form_system(mu)
        r_star = math.sqrt(4.0 * mu / 17.0)   # -mu/(2 Re b), Re b = -17/8
        dr1, _, _, _ = polar_vector_field(sys, r_star, 0.0)
        assert abs(dr1) < 1e-14

    def test_phase_independence(self):
        sys = projection_system(0.05)
        a = polar_vector_field(sys, 0.2, 0.1, 0.0, 0.0)
        b = polar_vector_field(sys, 0.2, 0.1, 1.3, -2.2)
        assert a == b


class TestBranches:
    def test_closed_form_mu_positive(self):
        out = {b.kind: b for b in branches(closed_form_system(0.1))}
        assert set(out) == {"trivial", "rotating_wave_1", "rotating_wave_2"}
        r = math.sqrt(0.4 / 17.0)
        assert abs(out["rotating_wave_1"].r1 - r) < 1e-14
        assert out["rotating_wave_1"].r2 == 0.0
        assert out["rotating_wave_2"].r1 == 0.0

    def test_closed_form_standing_is_subcritical(self):
        # Re b + Re c = 5/8 > 0, so the standing family needs mu < 0
        out = {b.kind: b for b in branches(closed_form_system(-0.1))}
        assert "standing_wave" in out
        assert abs(out["standing_wave"].r1 - math.sqrt(0.05 / 0.625)) < 1e-14
        assert out["standing_wave"].r1 == out["standing_wave"].r2

    def test_projection_branches_and_stability(self):
        out = {b.kind: b for b in branches(projection_system(0.1))}
        assert set(out) == {"trivial", "rotating_wave_1", "rotating_wave_2",
                            "standing_wave"}
        assert out["trivial"].stability == "unstable"
        assert out["rotating_wave_1"].stability == "stable"
        assert out["rotating_wave_2"].stability == "stable"
        assert out["standing_wave"].stability == "unstable"
        assert abs(out["rotating_wave_1"].r1
                   - math.sqrt(0.05 * 24.0 / 11.0)) < 1e-12

    def test_mu_zero_only_trivial(self):
        out = branches(projection_system(0.0))
        assert [b.kind for b in out] == ["trivial"]

    def test_all_three_families(self):
        sys = ReducedSystem(mu=0.2, omega=1.0, a=0.5 + 0j,
                            b=-1.0 + 0j, c=-3.0 + 0j)
        kinds = {b.kind for b in branches(sys)}
        assert len(kinds) == 4

    def test_sqrt_mu_scaling_of_radii(self):
        mus = np.geomspace(1e-4, 1e-2, 7)
        radii = []
        for mu in mus:
            out = {b.kind: b for b in branches(projection_system(float(mu)))}
            radii.append(out["rotating_wave_1"].r1)
        slope = np.polyfit(np.log(mus), np.log(radii), 1)[0]
        assert abs(slope - 0.5) < 1e-6

    def test_theta_dot_stays_positive(self):
        for mu in (0.01, 0.05, -0.05):
            sys = projection_system(mu)
            for bp in branches(sys):
                assert bp.frequencies[0] >= sys.omega / 2.0


class TestClassification:
    def test_canonical_closed_form_relations(self):
        reg = classify_regime(closed_form_system(0.1))
        assert not reg["degenerate"]
        assert reg["A_real"] == pytest.approx(11.0 / 4.0)
        # Re b < 0 and Re b + Re c > 0 under the published values
        assert reg["relations"]["Re_A_plus_B_nonzero"]
        sys = closed_form_system(0.1)
        assert sys.b.real < 0.0 and (sys.b + sys.c).real > 0.0

    def test_degenerate_flag(self):
        sys = ReducedSystem(mu=0.1, omega=1.0, a=0.5 + 0j,
                            b=-1.0 + 0.2j, c=-1.0 + 0.2j)
        reg = classify_regime(sys)
        assert reg["degenerate"]
        assert reg["stable_families"] == []

    def test_projection_regime_stable_family(self):
        reg = classify_regime(projection_system(0.1))
        assert reg["stable_families"] == ["rotating_wave"]

    def test_consistency_with_branches(self):
        rng = np.random.default_rng(3)
        for _ in range(10):
            b = complex(rng.uniform(-3, 3), rng.uniform(-1, 1))
            c = complex(rng.uniform(-3, 3), rng.uniform(-1, 1))
            sys = ReducedSystem(mu=0.1, omega=1.0, a=0.5 - 0.1j, b=b, c=c)
            reg = classify_regime(sys)
            if reg["degenerate"]:
                continue
            probe = sys if any(bp.kind != "trivial" for bp in branches(sys)) \
                else ReducedSystem(mu=-0.1, omega=1.0, a=sys.a, b=b, c=c)
            stable = {"rotating_wave" if bp.kind.startswith("rotating")
                      else bp.kind
                      for bp in branches(probe)
                      if bp.kind != "trivial" and bp.stability == "stable"}
            assert set(reg["stable_families"]) == stable


class TestTrajectories:
    def test_origin_is_fixed(self):
        sys = projection_system(0.05)
        _, z1, z2 = integrate_truncated(sys, 0.0, 0.0, t_max=5.0, dt=0.5)
        assert np.max(np.abs(z1)) == 0.0 and np.max(np.abs(z2)) == 0.0

    def test_convergence_to_rotating_radius(self):
        mu = 0.1
        sys = projection_system(mu)
        out = {b.kind: b for b in branches(sys)}
        r_star = out["rotating_wave_1"].r1
        _, z1, z2 = integrate_truncated(sys, (r_star + 0.02) + 0j, 0.005 + 0j,
                                        t_max=300.0, dt=1.0)
        assert abs(abs(z1[-1]) - r_star) < 1e-6
        assert abs(z2[-1]) < 1e-6

    def test_phase_winding_on_branch(self):
        mu = 0.05
        sys = projection_system(mu)
        out = {b.kind: b for b in branches(sys)}
        bp = out["rotating_wave_1"]
        t, z1, _ = integrate_truncated(sys, bp.r1 + 0j, 0.0, t_max=10.0, dt=0.01)
        winding = np.unwrap(np.angle(z1))[-1] - np.angle(z1[0])
        assert abs(winding - branch_frequency(sys, bp) * 10.0) < 1e-6

    def test_bad_arguments(self):
        with pytest.raises(ValueError):
            integrate_truncated(projection_system(0.1), 0.1, 0.1, -1.0, 0.1)


class TestReconstruction:
    def test_field_is_real(self):
        sys = projection_system(0.05)
        bp = {b.kind: b for b in branches(sys)}["standing_wave"]
        _, u, residue = reconstruct_wave(CANON, sys, bp, 0.3, 1.1, t=0.7)
        assert residue <= 1e-13
        assert u.shape == (2, 256)

    def test_trivial_branch_rejected(self):
        sys = projection_system(0.05)
        bp = {b.kind: b for b in branches(sys)}["trivial"]
        with pytest.raises(ValueError):
            reconstruct_wave(CANON, sys, bp, 0.0, 0.0, t=0.0)

    def test_standing_wave_reflection_symmetry(self):
        # R(phi2 - phi1) S U = U, with phases chosen on the grid
        n = 256
        sys = projection_system(0.05)
        bp = {b.kind: b for b in branches(sys)}["standing_wave"]
        m = 37
        phi1, phi2 = 0.45, 0.45 + 2.0 * math.pi * m / n
        _, u, _ = reconstruct_wave(CANON, sys, bp, phi1, phi2, t=0.8, n_grid=n)
        reflected = u[:, (-np.arange(n)) % n]
        translated = np.roll(reflected, m, axis=1)
        assert np.max(np.abs(translated - u)) < 1e-10

    def test_standing_wave_half_period_translation(self):
        # R(pi) U(t) = U(t + pi/omega*)
        n = 128
        sys = projection_system(0.05)
        bp = {b.kind: b for b in branches(sys)}["standing_wave"]
        w_star = branch_frequency(sys, bp)
        _, u_t, _ = reconstruct_wave(CANON, sys, bp, 0.2, 1.4, t=0.3, n_grid=n)
        _, u_shift, _ = reconstruct_wave(CANON, sys, bp, 0.2, 1.4,
                                         t=0.3 + math.pi / w_star, n_grid=n)
        assert np.max(np.abs(np.roll(u_t, n // 2, axis=1) - u_shift)) < 1e-10

    def test_uniform_offset_matches_beta(self):
        sys = projection_system(0.05)
        bp = {b.kind: b for b in branches(sys)}["rotating_wave_1"]
        _, u, _ = reconstruct_wave(CANON, sys, bp, 0.0, 0.0, t=0.0)
        beta = onset(CANON).beta1 + sys.mu
        assert abs(np.mean(u[0]) - CANON.alpha) < 1e-12
        assert abs(np.mean(u[1]) - beta / CANON.alpha) < 1e-12
