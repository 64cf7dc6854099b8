import numpy as np
import pytest

from lugeom.catalog import case
from lugeom.errors import IndexOutOfRange
from lugeom.lie import PAULI, LocalGenerator, local_generator_from_coords
from lugeom.moment import (
    density_pairing,
    in_cartan,
    moment_image,
    moment_pairing,
    reduced_densities,
    reduced_density,
    sorted_trace_form,
    spectra,
)
from lugeom.state import apply_local, basis_state, ghz, make_state, projective_distance, random_local_unitaries, random_state


def test_reduced_density_examples():
    for k in range(3):
        assert np.allclose(reduced_density(ghz(3), k).matrix, np.eye(2) / 2)
    assert np.allclose(reduced_density(basis_state([2, 2], (0, 0)), 0).matrix, np.diag([1, 0]))
    p1, p3 = 0.6, np.sqrt(1 - 0.72)
    assert np.allclose(reduced_density(case(4).state, 0).matrix, np.diag([p1**2, p1**2, p3**2]))
    with pytest.raises(IndexOutOfRange):
        reduced_density(ghz(3), 3)


def test_reduced_density_is_a_density():
    for seed in range(30):
        v = random_state([2, 3, 4], seed)
        for rho in reduced_densities(v):
            assert np.allclose(rho, rho.conj().T, atol=1e-12)
            assert abs(np.trace(rho) - 1) < 1e-12
            assert np.linalg.eigvalsh(rho).min() > -1e-12


def test_moment_pairing_examples():
    z0 = LocalGenerator.single(0, 1j * PAULI["z"])
    assert abs(moment_pairing(basis_state([2, 2], (0, 0)), z0) + 0.5) < 1e-15
    for k in range(4):
        for key in "xyz":
            assert abs(moment_pairing(ghz(4), LocalGenerator.single(k, 1j * PAULI[key]))) < 1e-15
    assert moment_pairing(random_state([2, 2], 0), LocalGenerator(())) == 0


def test_moment_pairing_consistency():
    rng = np.random.default_rng(11)
    for seed in range(100):
        v = random_state([2, 3, 2], seed)
        g = local_generator_from_coords(v.dims, rng.standard_normal(14))
        direct = moment_pairing(v, g)
        assert abs(direct - density_pairing(v, g.blocks(v.dims))) < 1e-10
        assert abs(direct - moment_image(v).pair(g)) < 1e-10


def test_moment_image_examples():
    assert moment_image(ghz(5)).norm() < 1e-15
    img = moment_image(basis_state([2, 2], (0, 0)))
    for c in img.components:
        assert np.allclose(c, np.diag([0.5, -0.5]))
    assert moment_image(case(2).state).norm() < 1e-15
    for c in moment_image(random_state([3, 2], 1)).components:
        assert abs(np.trace(c)) < 1e-12
        assert np.allclose(c, c.conj().T)


def test_equivariance():
    rng = np.random.default_rng(0)
    for seed in range(200):
        dims = [[2, 2], [3, 3], [2, 2, 2], [2, 3]][seed % 4]
        v = random_state(dims, seed)
        us = random_local_unitaries(dims, rng)
        w = apply_local(us, v)
        for u, r1, r2 in zip(us, reduced_densities(v), reduced_densities(w)):
            assert np.max(np.abs(r2 - u @ r1 @ u.conj().T)) < 1e-10


def _check_sorted(form, original):
    for rho in reduced_densities(form.state):
        assert np.max(np.abs(rho - np.diag(np.diag(rho)))) < 1e-9
        assert np.all(np.diff(np.diag(rho).real) <= 1e-12)
    assert projective_distance(apply_local(form.witnesses, original), form.state) < 1e-9


def test_sorted_trace_form_examples():
    v = make_state([3, 3], np.diag([0.8, 0.5, np.sqrt(1 - 0.89)]).reshape(-1))
    form = sorted_trace_form(v)
    _check_sorted(form, v)
    assert np.allclose(np.abs(form.state.amplitudes), np.abs(v.amplitudes))

    swap = make_state([2, 2], [0, 1, 1, 0])
    form = sorted_trace_form(swap)
    _check_sorted(form, swap)
    assert all(np.allclose(s, [0.5, 0.5]) for s in form.spectra)

    form = sorted_trace_form(ghz(3))
    assert projective_distance(form.state, ghz(3)) < 1e-12 or in_cartan(form.state)
    assert form.profiles == ((0, 2),) * 3


def test_sorted_trace_form_random_and_spectra():
    for seed in range(50):
        v = random_state([[2, 2, 2], [3, 2], [2, 2, 2, 2]][seed % 3], seed)
        form = sorted_trace_form(v)
        _check_sorted(form, v)
        for a, b in zip(form.spectra, spectra(v)):
            assert np.allclose(a, b, atol=1e-12)


def test_sorted_trace_form_idempotent():
    for seed in range(20):
        v = random_state([2, 3, 2], seed)
        once = sorted_trace_form(v)
        twice = sorted_trace_form(once.state)
        for a, b in zip(once.spectra, twice.spectra):
            assert np.allclose(a, b, atol=1e-12)
        # nondegenerate spectra: the second witness is diagonal
        for w in twice.witnesses:
            assert np.max(np.abs(w - np.diag(np.diag(w)))) < 1e-8


def test_in_cartan():
    assert in_cartan(case(3).state)
    assert not in_cartan(make_state([2, 2], [1, 1, 0, 0]))
    assert in_cartan(ghz(4))
