import numpy as np
import pytest

from edspec.errors import DimensionMismatch
from edspec.evolution import FVState, conservation_report, evolve, pseudo_norm
from edspec.frozen_spectrum import decompose
from edspec.operators import (
    ConstantMass,
    GeneralMassSquared,
    Grid,
    assemble_fv,
    build_kleingordon,
)
from edspec.validate import gaussian_state


def _hermitian_system(n_points=40):
    grid = Grid(-8.0, 8.0, n_points)
    h = build_kleingordon(grid, ConstantMass(1.0), 0.0)
    return grid, assemble_fv(h)


def test_eigenstate_picks_up_a_phase():
    _, system = _hermitian_system()
    dec = decompose(system.h_sr)
    n = system.base_dimension
    ket = dec.right_kets[:, 3]
    energy = dec.eigenvalues[3].real
    state = FVState(phi1=ket[:n], phi2=ket[n:], t=0.0)
    trajectory = evolve(system, state, t_final=2.0, steps=4)
    expected = np.exp(-1j * energy * 2.0) * ket
    np.testing.assert_allclose(trajectory[-1].stacked(), expected, atol=1e-8)


def test_single_site_analytic_solution():
    # h = [[0, 4], [1, 0]]: phi2(t) = a e^{-2it} + b e^{+2it} with
    # a = (phi2(0) + phi1(0)/2)/2, b = (phi2(0) - phi1(0)/2)/2
    system = assemble_fv(np.array([[4.0]]))
    state = FVState(phi1=np.array([1.0 + 0.0j]), phi2=np.array([1.0 + 0.0j]), t=0.0)
    trajectory = evolve(system, state, t_final=1.0, steps=10)
    a, b = 0.75, 0.25
    for s in trajectory:
        phi2 = a * np.exp(-2j * s.t) + b * np.exp(2j * s.t)
        phi1 = 2 * a * np.exp(-2j * s.t) - 2 * b * np.exp(2j * s.t)
        assert s.phi2[0] == pytest.approx(phi2, abs=1e-10)
        assert s.phi1[0] == pytest.approx(phi1, abs=1e-10)


def test_zero_time_returns_initial_state():
    _, system = _hermitian_system()
    n = system.base_dimension
    state = FVState(phi1=np.zeros(n, complex), phi2=np.ones(n, complex), t=0.0)
    trajectory = evolve(system, state, t_final=0.0, steps=0)
    assert len(trajectory) == 1
    assert trajectory[0] is state


def test_group_property():
    grid, system = _hermitian_system()
    state = gaussian_state(grid, center=0.5, width=1.0, momentum=1.0)
    direct = evolve(system, state, t_final=3.0, steps=3)[-1]
    partway = evolve(system, state, t_final=1.0, steps=1)[-1]
    resumed = evolve(system, partway, t_final=2.0, steps=2)[-1]
    np.testing.assert_allclose(resumed.stacked(), direct.stacked(), atol=1e-8)


def test_complex_spectrum_warns_but_proceeds():
    grid = Grid(-6.0, 6.0, 16)
    h = build_kleingordon(grid, GeneralMassSquared(lambda z, x: 1.0 + 0.4j * x), 0.0)
    system = assemble_fv(h)
    state = gaussian_state(grid, center=0.0, width=1.0, momentum=0.0)
    with pytest.warns(RuntimeWarning):
        trajectory = evolve(system, state, t_final=1.0, steps=2)
    assert len(trajectory) == 3


# ---------------------------------------------------------------- pseudo-norm

def test_identity_metric_is_euclidean():
    v = np.array([1.0, 2.0j])
    state = FVState(phi1=v[:1], phi2=v[1:], t=0.0)
    assert pseudo_norm(state, np.eye(2)) == pytest.approx(5.0)


def test_swap_metric_signature():
    v = np.array([1.0 + 1.0j, 0.5])
    swap = np.block([[np.zeros((2, 2)), np.eye(2)], [np.eye(2), np.zeros((2, 2))]])
    plus = FVState(phi1=v, phi2=v, t=0.0)
    minus = FVState(phi1=v, phi2=-v, t=0.0)
    norm2 = float(np.linalg.norm(v) ** 2)
    assert pseudo_norm(plus, swap) == pytest.approx(2.0 * norm2)
    assert pseudo_norm(minus, swap) == pytest.approx(-2.0 * norm2)


def test_positive_metric_positive_value(rng):
    w = rng.standard_normal((6, 6))
    metric = np.eye(6) + 0.2 * (w @ w.T)
    state = FVState(phi1=rng.standard_normal(3), phi2=rng.standard_normal(3), t=0.0)
    assert pseudo_norm(state, metric) > 0


def test_dimension_mismatch():
    state = FVState(phi1=np.ones(3), phi2=np.ones(3), t=0.0)
    with pytest.raises(DimensionMismatch):
        pseudo_norm(state, np.eye(4))


# ---------------------------------------------------------------- conservation

def test_swap_metric_conserves_pseudo_norm():
    grid, system = _hermitian_system()
    state = gaussian_state(grid, center=0.0, width=1.2, momentum=1.5)
    trajectory = evolve(system, state, t_final=10.0, steps=100)
    report = conservation_report(trajectory, system.eta_sr, system)
    assert report.drift < 1e-8
    assert report.passed
    assert report.spectrum_real
    assert report.metric_intertwines


def test_wrong_metric_shows_drift():
    grid, system = _hermitian_system()
    state = gaussian_state(grid, center=0.0, width=1.2, momentum=1.5)
    trajectory = evolve(system, state, t_final=10.0, steps=100)
    report = conservation_report(trajectory, np.eye(2 * system.base_dimension), system)
    assert report.drift > 1e-3
    assert not report.passed
    assert not report.metric_intertwines


def test_zero_state_has_zero_drift():
    _, system = _hermitian_system(16)
    n = system.base_dimension
    state = FVState(phi1=np.zeros(n), phi2=np.zeros(n), t=0.0)
    trajectory = evolve(system, state, t_final=1.0, steps=3)
    report = conservation_report(trajectory, system.eta_sr)
    assert report.drift == 0.0
    assert report.degenerate_norm
