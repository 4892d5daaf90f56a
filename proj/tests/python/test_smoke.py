"""Smoke tests for the compiled module: one pass over each main operation."""

import math

import numpy as np
import pytest

import bipsim


def well_spectrum(n_points=257, k=3):
    grid = bipsim.Grid1D(0.0, 1.0, n_points)
    h = bipsim.build_hamiltonian(grid, bipsim.PotentialSpec.infinite_well())
    return bipsim.solve_spectrum(h, k), h


def test_version():
    assert bipsim.__version__ == "0.1.0"


def test_well_energies_match_closed_form():
    spectrum, _ = well_spectrum()
    for n in range(1, 4):
        analytic = n * n * math.pi**2 / 2.0
        assert spectrum.energies[n - 1] == pytest.approx(analytic, rel=1e-3)


def test_states_are_normalized_numpy_arrays():
    spectrum, _ = well_spectrum()
    psi = spectrum.states[0].values
    assert isinstance(psi, np.ndarray)
    assert psi.dtype == np.complex128
    h = spectrum.grid.spacing
    assert np.sum(np.abs(psi) ** 2) * h == pytest.approx(1.0, abs=1e-10)


def test_entropy_endpoints_of_the_two_slit_family():
    spectrum, _ = well_spectrum(129, 2)
    m1, m2 = spectrum.states[0], spectrum.states[1]

    wave = bipsim.two_slit_kernel(bipsim.TwoSlitFamily(m1, m2, bipsim.wave_coefficients()))
    particle = bipsim.two_slit_kernel(
        bipsim.TwoSlitFamily(m1, m2, bipsim.particle_coefficients())
    )

    assert bipsim.entropy(wave) <= 1e-9
    assert bipsim.entropy(particle) == pytest.approx(math.log(2.0), abs=1e-9)

    schmidt = bipsim.schmidt_decompose(particle)
    assert schmidt.rank == 2
    assert schmidt.coefficients[0] == pytest.approx(2.0**-0.5, abs=1e-10)


def test_bipartite_evolution_conserves_norm_and_symmetry():
    spectrum, h = well_spectrum(49, 2)
    c = bipsim.CoefficientMatrix(np.eye(2, dtype=complex) / math.sqrt(2.0))
    psi0 = bipsim.kernel_from_coefficients(c, spectrum.states)

    params = bipsim.EvolutionParams(dt=1e-3, n_steps=20, record_every=5)
    trajectory = bipsim.evolve_bipartite_grid(psi0, h, params)

    assert trajectory.times[0] == 0.0
    assert trajectory.times[-1] == pytest.approx(0.02)
    for snap in trajectory.snapshots:
        assert snap.norm_sq == pytest.approx(1.0, abs=1e-10)
        assert snap.hermiticity_defect <= 1e-9


def test_spectral_evolution_keeps_coefficient_moduli():
    spectrum, _ = well_spectrum(65, 3)
    c0 = bipsim.CoefficientMatrix(np.eye(3, dtype=complex) / math.sqrt(3.0))
    c1 = bipsim.evolve_bipartite_spectral(c0, spectrum, 0.37)
    assert np.abs(c1.entries) == pytest.approx(np.abs(c0.entries), abs=1e-12)


def test_duality_scan_trades_visibility_for_entropy():
    grid = bipsim.Grid1D(-40.0, 40.0, 513)
    tilt = 13.0 * math.pi / 80.0
    m1, m2 = bipsim.make_screen_modes(grid, tilt, 200.0)

    points = bipsim.duality_scan(m1, m2, [0.0, 0.5, 1.0])

    assert points[0].entropy <= 1e-9
    assert points[-1].entropy == pytest.approx(math.log(2.0), abs=1e-9)
    assert points[0].visibility >= 0.99
    assert points[-1].visibility <= 0.01
    entropies = [p.entropy for p in points]
    visibilities = [p.visibility for p in points]
    assert entropies == sorted(entropies)
    assert visibilities == sorted(visibilities, reverse=True)


def test_transition_probabilities_and_collapse():
    spectrum, _ = well_spectrum(65, 2)
    psi = bipsim.two_slit_kernel(
        bipsim.TwoSlitFamily(
            spectrum.states[0], spectrum.states[1], bipsim.particle_coefficients()
        )
    )
    report = bipsim.transition_probabilities(
        bipsim.eigenbasis_coefficients(psi, spectrum, 2).coefficients, spectrum
    )
    assert np.sum(report.probabilities) == pytest.approx(1.0, abs=1e-10)
    assert report.expected_shift == pytest.approx(0.0, abs=1e-9)

    result = bipsim.collapse(psi, spectrum, 0)
    assert result.probability == pytest.approx(0.5, abs=1e-8)
    assert bipsim.entropy(result.state) <= 1e-12


def test_gap_spectroscopy_reads_off_the_gap():
    spectrum, h = well_spectrum(65, 2)
    params = bipsim.EvolutionParams(dt=1e-3, n_steps=200, record_every=2)
    [gap] = bipsim.gap_spectroscopy(spectrum, [(0, 1)], h, params)
    assert gap.rel_error <= 1e-3
    assert gap.fit_residual <= 1e-10
    assert gap.spectral_gap == pytest.approx(
        spectrum.energies[0] - spectrum.energies[1], abs=1e-14
    )


def test_errors_surface_as_python_exceptions():
    with pytest.raises(bipsim.PreconditionError):
        bipsim.Grid1D(0.0, 1.0, 2)
    with pytest.raises(ValueError):
        bipsim.Grid1D(1.0, 0.0, 65)

    spectrum, _ = well_spectrum(65, 3)
    psi = bipsim.kernel_from_product(spectrum.states[0], spectrum.states[0])
    with pytest.raises(bipsim.ZeroProbabilityError):
        bipsim.collapse(psi, spectrum, 2)
    with pytest.raises(bipsim.PreconditionError):
        bipsim.collapse(psi, spectrum, 99)
