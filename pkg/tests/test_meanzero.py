import math

import numpy as np
from conftest import random_admissible

from o2hopf import validate, zero_mode_content
from o2hopf.normalform import solve_psi


def test_canonical_obstruction_present():
    p = validate({"alpha": 2.0, "beta": 7.0})
    rep = zero_mode_content(p, solve_psi(p))
    assert rep["verdict"] == "present"
    # 4(alpha^2 + delta2) - 2 beta1 = 20 - 14
    assert abs(rep["degeneracy_numerator"] - 6.0) < 1e-14
    amps = rep["zero_mode_amplitudes"]
    assert np.linalg.norm(amps["psi_00001"]) == 0.0
    assert np.linalg.norm(amps["psi_11000"]) > 0.1
    assert np.linalg.norm(amps["psi_10100"]) > 0.1
    # the mode-2 solutions carry no constant mode at all
    assert np.linalg.norm(amps["psi_20000"]) == 0.0
    assert np.linalg.norm(amps["psi_10010"]) == 0.0


def test_random_sets_generically_obstructed():
    rng = np.random.default_rng(12)
    for _ in range(10):
        p = random_admissible(rng)
        rep = zero_mode_content(p, solve_psi(p))
        assert rep["verdict"] == "present"


def test_degenerate_case_inconclusive():
    # 4(alpha^2 + delta2) = 2 beta1 reduces to alpha^2 = 1 + delta1 - delta2;
    # there the shared numerator vanishes and the zero modes are absent for
    # a degenerate reason, so no verdict is claimed.
    d1, d2 = 1.0, 0.5
    alpha = math.sqrt(1.0 + d1 - d2)
    p = validate({"alpha": alpha, "beta": 1.0 + alpha ** 2 + d1 + d2,
                  "delta1": d1, "delta2": d2})
    rep = zero_mode_content(p, solve_psi(p))
    assert abs(rep["degeneracy_numerator"]) < 1e-12
    assert rep["verdict"] == "inconclusive"
