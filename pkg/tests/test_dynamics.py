"""Survival amplitude, conjugate-pair factorization, frame-mapped states.

Cross-routes used here: closed-form free evolution, the damped-Rabi
closed form for the excitation-conserving mode, the independently
measured oscillation period against the spectrum's splitting, and the
Schwarz-reflection identity between the two pair kernels.
"""

import numpy as np
import pytest

import oracles
from rabisplit import (
    ConfigurationError,
    Environment,
    LorentzianCavityBath,
    LowFrequencyBath,
    NumericalFailure,
    OhmicBath,
    QubitState,
    ResponseKernel,
    emission_spectrum,
    evolve_density_matrix,
    factorization_check,
    find_peaks,
    memory_kernel_population,
    survival_amplitude,
)
from rabisplit.dynamics import _build_grids, _invert

DELTA = 10.0


def _env(g=1.0, linewidth=0.1, alpha=1e-4, kind="ohmic"):
    intrinsic = (
        OhmicBath(alpha=alpha, omega_c=100.0)
        if kind == "ohmic"
        else LowFrequencyBath(alpha=alpha, omega_low=0.2)
    )
    return Environment(
        delta=DELTA,
        intrinsic=intrinsic,
        cavity=LorentzianCavityBath(g=g, linewidth=linewidth, omega_cav=DELTA),
    )


@pytest.fixture(scope="module")
def trace_g1():
    return survival_amplitude(_env())


def test_initial_amplitude_near_unity(trace_g1):
    i0 = int(np.argmin(np.abs(trace_g1.time)))
    assert trace_g1.time[i0] == 0.0
    assert abs(trace_g1.amplitude[i0] - 1.0) <= 2e-4
    np.testing.assert_array_equal(
        trace_g1.population, np.abs(trace_g1.amplitude) ** 2
    )


def test_causality_residual(trace_g1):
    assert trace_g1.causality_residual <= 1e-3
    recomputed = np.max(np.abs(trace_g1.amplitude[trace_g1.time < 0.0]))
    assert trace_g1.causality_residual == float(recomputed)


def test_decoupled_qubit_is_free_evolution():
    env = _env(g=0.0, alpha=0.0)
    trace = survival_amplitude(env)
    keep = trace.time >= 0.0
    expected = np.exp(-1j * DELTA * trace.time[keep])
    assert np.max(np.abs(trace.amplitude[keep] - expected)) <= 1e-12
    assert trace.causality_residual == 0.0
    assert factorization_check(env) == 0.0


def test_excitation_conserving_mode_damped_rabi():
    # cavity-only exchange against the full-line memory closed form;
    # positive-frequency truncation leaves ~linewidth/omega_cav slack
    g, lam = 1.0, 0.01
    trace = survival_amplitude(_env(g=g, linewidth=lam, alpha=0.0), mode="rwa")
    keep = (trace.time >= 0.0) & (trace.time <= 30.0)
    t = trace.time[keep]
    rotating = trace.amplitude[keep] * np.exp(1j * DELTA * t)
    expected = oracles.damped_rabi_amplitude(g, lam, t)
    assert np.max(np.abs(rotating - expected)) <= 5e-3
    assert np.max(np.abs(trace.population[keep] - expected**2)) <= 5e-3


def test_oscillation_period_matches_spectral_splitting():
    # dual route: time-domain beat period vs the doublet separation that
    # find_peaks reads off the frequency-domain scan
    env = _env(g=2.0)
    trace = survival_amplitude(env)
    report = find_peaks(emission_spectrum(env))
    pop, time = trace.population, trace.time
    sel = time > 0.0
    pop, time = pop[sel], time[sel]
    mins = np.nonzero((pop[1:-1] < pop[:-2]) & (pop[1:-1] < pop[2:]))[0] + 1
    refined = []
    for i in mins[:5]:
        x0, x1, x2 = time[i - 1 : i + 2]
        y0, y1, y2 = pop[i - 1 : i + 2]
        denom = (y0 - 2 * y1 + y2)
        refined.append(x1 + 0.5 * (y0 - y2) / denom * (x1 - x0))
    spacing = np.mean(np.diff(refined))
    assert 2.0 * np.pi / spacing == pytest.approx(report.splitting, rel=0.02)


@pytest.mark.parametrize(
    "env,mode",
    [
        (_env(), "full"),
        (_env(g=0.2, linewidth=1e-3, kind="lowfreq"), "full"),
        (_env(g=0.2, linewidth=1e-3, alpha=0.0), "rwa"),
    ],
    ids=["cavity_strong", "lowfreq_strong", "rwa_strong"],
)
def test_factorization_residual_is_inversion_noise(env, mode):
    assert factorization_check(env, mode=mode) <= 1e-7


def test_pair_kernels_are_schwarz_reflections():
    kernel = ResponseKernel(_env())
    nu, r, g_, q = _build_grids(kernel, 1 << 16, None)
    rev = (nu.size - np.arange(nu.size)) % nu.size
    plus = 1j / (nu - r + 1j * g_)
    minus = 1j / (nu + r[rev] + 1j * g_[rev])
    _, chi_plus = _invert(plus, nu, 0.0, q)
    _, chi_minus = _invert(minus, nu, 0.0, q)
    assert np.max(np.abs(chi_minus - np.conj(chi_plus))) <= 1e-9


def test_memory_kernel_route_agrees_on_smooth_lines():
    # far-detuned regime: R and Gamma flat across the emission line
    env = Environment(
        delta=DELTA,
        intrinsic=OhmicBath(alpha=1e-4, omega_c=100.0),
        cavity=LorentzianCavityBath(g=1e-3, linewidth=1.0, omega_cav=DELTA),
    )
    kwargs = dict(n_points=1 << 17, span=150.0)
    trace = survival_amplitude(env, **kwargs)
    t_mem, pop_mem = memory_kernel_population(env, **kwargs)
    np.testing.assert_array_equal(t_mem, trace.time)
    keep = trace.time >= 0.0
    assert np.max(np.abs(pop_mem[keep] - trace.population[keep])) <= 1e-3


def test_memory_kernel_route_collapses_once_line_splits():
    # same comparison in the doublet regime: the summed-kernel poles sit
    # at splitting/sqrt(2), an O(1) miss this check documents
    env = _env(g=2.0)
    trace = survival_amplitude(env)
    t_mem, pop_mem = memory_kernel_population(env)
    np.testing.assert_array_equal(t_mem, trace.time)
    keep = trace.time >= 0.0
    assert np.max(np.abs(pop_mem[keep] - trace.population[keep])) > 0.5


def test_span_below_content_rejected():
    with pytest.raises(ConfigurationError, match="spectral content"):
        survival_amplitude(_env(), span=1.0)


@pytest.mark.parametrize("n", [1000, 2047])
def test_bad_point_counts_rejected(n):
    with pytest.raises(ConfigurationError, match="n_points"):
        survival_amplitude(_env(), n_points=n)


def test_undecayed_amplitude_refused():
    # microscopic coupling to a narrow line: lifetime ~1e9 ns, no FFT
    # grid within the point budget can hold it
    env = _env(g=1e-6, linewidth=1e-3, alpha=0.0)
    with pytest.raises(NumericalFailure, match="slowly"):
        survival_amplitude(env, mode="rwa")


class TestDensityMatrixFrameMap:
    def test_excited_at_origin(self, trace_g1):
        eta = trace_g1.dressing.eta
        state = evolve_density_matrix(
            QubitState.excited(), trace_g1.env, t=0.0, trace=trace_g1
        )
        assert state.rho11 == pytest.approx(0.5 * (1 + eta), abs=2e-4)
        assert state.rho22 == pytest.approx(0.5 * (1 - eta), abs=2e-4)
        assert state.rho12 == 0.0
        assert state.rho21 == 0.0

    def test_ground_is_stationary(self, trace_g1):
        eta = trace_g1.dressing.eta
        early = evolve_density_matrix(
            QubitState.ground(), trace_g1.env, t=0.0, trace=trace_g1
        )
        late = evolve_density_matrix(
            QubitState.ground(), trace_g1.env, t=7.0, trace=trace_g1
        )
        # the lab ground state keeps a (1 - eta)/2 admixture at all times
        assert early.rho11 == pytest.approx(0.5 * (1 - eta), rel=1e-12)
        assert late.rho11 == early.rho11
        assert late.rho22 == early.rho22

    def test_excited_relaxes_to_frame_floor(self, trace_g1):
        eta = trace_g1.dressing.eta
        t_late = float(0.9 * trace_g1.time[-1])
        state = evolve_density_matrix(
            QubitState.excited(), trace_g1.env, t=t_late, trace=trace_g1
        )
        assert state.rho11 == pytest.approx(0.5 * (1 - eta), abs=1e-8)
        state.validate(tol=1e-10)

    def test_superposition_stays_physical(self, trace_g1):
        plus = QubitState(0.5 + 0j, 0.5 + 0j, 0.5 + 0j, 0.5 + 0j)
        times = np.linspace(0.5, 50.0, 25)
        for t in times:
            state = evolve_density_matrix(
                plus, trace_g1.env, t=float(t), trace=trace_g1
            )
            state.validate(tol=1e-8)
            assert abs(state.rho12 - np.conjugate(state.rho21)) <= 1e-14

    def test_time_bounds_enforced(self, trace_g1):
        with pytest.raises(ValueError, match="t must lie"):
            evolve_density_matrix(
                QubitState.excited(), trace_g1.env, t=-1.0, trace=trace_g1
            )
        with pytest.raises(ValueError, match="t must lie"):
            evolve_density_matrix(
                QubitState.excited(),
                trace_g1.env,
                t=float(trace_g1.time[-1]) + 1.0,
                trace=trace_g1,
            )

    def test_invalid_initial_state_refused(self, trace_g1):
        lopsided = QubitState(0.7 + 0j, 0j, 0j, 0.7 + 0j)
        with pytest.raises(ValueError, match="trace"):
            evolve_density_matrix(
                lopsided, trace_g1.env, t=1.0, trace=trace_g1
            )
