"""Coupling renormalization: fixed point solver against an independent route.

The reference route (tests/oracles.py) evaluates the self-consistency
balance with adaptive quadrature and finds the root with brentq; the
package route uses fixed panel rules and damped iteration.  Agreement to
1e-9 on the weight itself is the cross-check.
"""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from rabisplit import (
    Environment,
    LorentzianCavityBath,
    LowFrequencyBath,
    NumericalFailure,
    OhmicBath,
    coupling_renorm_factor,
    solve_environment,
    solve_eta,
)

DELTA = 10.0

# (bath, weight) pairs frozen from the brentq reference route.
FROZEN = [
    (OhmicBath(alpha=1e-4, omega_c=100.0), 0.999378991704),
    (OhmicBath(alpha=1e-2, omega_c=100.0), 0.937876742501),
    (LowFrequencyBath(alpha=1e-4, omega_low=0.2), 0.998810121463),
    (LorentzianCavityBath(g=0.2, linewidth=1e-3, omega_cav=DELTA), 0.999799979996),
    (LorentzianCavityBath(g=2.0, linewidth=0.1, omega_cav=DELTA), 0.979795479814),
    (LorentzianCavityBath(g=1.0, linewidth=0.01, omega_cav=DELTA), 0.994987435351),
]


@pytest.mark.parametrize("bath,frozen", FROZEN, ids=[str(i) for i in range(len(FROZEN))])
def test_frozen_weights(bath, frozen):
    assert solve_eta(bath, DELTA).eta == pytest.approx(frozen, abs=5e-12)


@pytest.mark.parametrize("bath,_", FROZEN, ids=[str(i) for i in range(len(FROZEN))])
def test_matches_brentq_reference(bath, _):
    got = solve_eta(bath, DELTA)
    ref = oracles.eta_reference(bath, DELTA)
    assert abs(got.eta - ref) <= 1e-9
    # and the package's own balance closes at its reported solution
    assert abs(oracles.eta_balance(bath, got.eta, DELTA)) <= 1e-9


def test_zero_coupling_is_exact_unity():
    assert solve_eta(OhmicBath(alpha=0.0, omega_c=100.0), DELTA).eta == 1.0
    assert (
        solve_eta(LorentzianCavityBath(g=0.0, linewidth=1e-3, omega_cav=DELTA), DELTA).eta
        == 1.0
    )


def test_reports_residual_and_iterations():
    result = solve_eta(OhmicBath(alpha=1e-2, omega_c=100.0), DELTA)
    assert result.residual <= 1e-12
    assert 0 < result.iterations <= 200


def test_environment_weight_is_product():
    env = Environment(
        delta=DELTA,
        intrinsic=OhmicBath(alpha=1e-4, omega_c=100.0),
        cavity=LorentzianCavityBath(g=1.0, linewidth=0.1, omega_cav=DELTA),
    )
    dressing = solve_environment(env)
    assert dressing.eta == pytest.approx(
        dressing.intrinsic.eta * dressing.cavity.eta, rel=1e-15
    )
    assert dressing.eta < min(dressing.intrinsic.eta, dressing.cavity.eta)


def test_dressing_profile_anchor_points():
    eta = 0.95
    # 2 eta delta / (omega + eta delta): unity at the dressed splitting, 2 at zero
    assert coupling_renorm_factor(eta * DELTA, eta, DELTA) == pytest.approx(1.0, rel=1e-15)
    assert coupling_renorm_factor(0.0, eta, DELTA) == pytest.approx(2.0, rel=1e-15)
    omega = np.array([0.0, 1.0, 10.0, 200.0])
    profile = coupling_renorm_factor(omega, eta, DELTA)
    assert np.all(np.diff(profile) < 0.0)
    assert np.all(profile > 0.0)


@settings(max_examples=25)
@given(st.floats(min_value=1e-6, max_value=2e-3))
def test_ohmic_weight_decreases_with_coupling(alpha):
    weak = solve_eta(OhmicBath(alpha=alpha, omega_c=100.0), DELTA).eta
    strong = solve_eta(OhmicBath(alpha=2.0 * alpha, omega_c=100.0), DELTA).eta
    assert 0.0 < strong < weak < 1.0


def test_overdamped_bath_refused():
    with pytest.raises(NumericalFailure):
        solve_eta(OhmicBath(alpha=10.0, omega_c=100.0), DELTA)
