import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lugeom.errors import BadArity, DimensionMismatch, IndexOutOfRange, NotBipartite, ZeroVector
from lugeom.state import (
    MultiIndex,
    apply_local,
    basis_state,
    ghz,
    group_multiplicities,
    make_state,
    overlap,
    projective_distance,
    random_local_unitaries,
    random_state,
    schmidt,
)
from lugeom.moment import reduced_density


def test_make_state_normalizes():
    v = make_state([2, 2], [1, 0, 0, 1])
    assert np.allclose(v.amplitudes, [2**-0.5, 0, 0, 2**-0.5])
    assert abs(np.linalg.norm(v.amplitudes) - 1) < 1e-12


def test_make_state_basis_and_qutrit_case():
    v = make_state([2, 2], [1, 0, 0, 0])
    assert v.amplitude((0, 0)) == 1
    q = make_state([3, 3], [0.8, 0, 0, 0, 0.6, 0, 0, 0, 0])
    s = schmidt(q)
    assert np.allclose(s.coefficients, [0.8, 0.6, 0])
    assert s.multiplicities == (1, 1, 1)


def test_make_state_errors():
    with pytest.raises(ZeroVector):
        make_state([2], [1e-16, 0])
    with pytest.raises(DimensionMismatch):
        make_state([2, 2], [1, 0, 0])
    with pytest.raises(IndexOutOfRange):
        MultiIndex.checked((0, 2), (2, 2))


def test_layout_first_index_slowest():
    v = basis_state([2, 3], (1, 2))
    assert np.flatnonzero(v.amplitudes).tolist() == [5]
    assert MultiIndex.checked((1, 2), (2, 3)).flat((2, 3)) == 5


def test_overlap_examples():
    a, b = basis_state([2, 2], (0, 0)), basis_state([2, 2], (1, 1))
    assert overlap(a, a) == 1
    assert overlap(a, b) == 0
    assert abs(overlap(ghz(3), basis_state([2, 2, 2], (0, 0, 0))) - 2**-0.5) < 1e-15
    with pytest.raises(DimensionMismatch):
        overlap(a, ghz(3))


def test_projective_distance():
    u = random_state([2, 3], 4)
    assert projective_distance(u, u) < 1e-15
    rotated = make_state(u.dims, np.exp(0.7j) * u.amplitudes)
    assert projective_distance(u, rotated) < 1e-15
    bell = make_state([2, 2], [1, 0, 0, 1])
    assert abs(projective_distance(basis_state([2, 2], (0, 0)), bell) - 0.5) < 1e-15


@settings(max_examples=50, deadline=None)
@given(st.integers(0, 2**32), st.integers(0, 2**32), st.floats(-np.pi, np.pi))
def test_projective_distance_symmetric_and_phase_invariant(s1, s2, phase):
    u, v = random_state([2, 2], s1), random_state([2, 2], s2)
    w = make_state(v.dims, np.exp(1j * phase) * v.amplitudes)
    assert abs(projective_distance(u, v) - projective_distance(v, u)) < 1e-15
    assert abs(projective_distance(u, v) - projective_distance(u, w)) < 1e-14


def test_schmidt_examples():
    bell = schmidt(make_state([2, 2], [1, 0, 0, 1]))
    assert np.allclose(bell.coefficients, [2**-0.5] * 2) and bell.m0 == 0
    prod = schmidt(basis_state([3, 3], (0, 0)))
    assert np.allclose(prod.coefficients, [1, 0, 0])
    assert prod.multiplicities == (2, 1) and prod.r == 1
    maxent = schmidt(make_state([3, 3], np.eye(3).reshape(-1)))
    assert maxent.multiplicities == (0, 3)
    with pytest.raises(NotBipartite):
        schmidt(ghz(3))
    with pytest.raises(NotBipartite):
        schmidt(random_state([2, 3], 0))


def test_schmidt_round_trip_many():
    worst = 0.0
    for seed in range(1000):
        n = 2 + seed % 3
        v = random_state([n, n], seed)
        s = schmidt(v)
        assert abs(np.sum(s.coefficients**2) - 1) < 1e-12
        assert np.all(np.diff(s.coefficients) <= 0)
        assert sum(s.multiplicities) == n
        for frame in (s.left_basis, s.right_basis):
            assert np.allclose(frame.conj().T @ frame, np.eye(n), atol=1e-10)
        worst = max(worst, projective_distance(v, make_state(v.dims, s.reconstruct())))
    assert worst <= 1e-10


def test_schmidt_round_trip_with_vanishing_coefficients():
    rng = np.random.default_rng(3)
    for _ in range(50):
        amps = np.zeros((3, 3), complex)
        amps[0, 0], amps[1, 1] = 0.8, 0.6
        v = apply_local(random_local_unitaries([3, 3], rng), make_state([3, 3], amps))
        s = schmidt(v)
        assert s.multiplicities == (1, 1, 1)
        assert np.allclose(s.right_basis.conj().T @ s.right_basis, np.eye(3), atol=1e-10)
        assert np.linalg.norm(s.reconstruct() - v.amplitudes) < 1e-10


def test_schmidt_matches_svd_and_reduced_spectra():
    for seed in range(100):
        v = random_state([3, 3], seed)
        s = schmidt(v)
        assert np.allclose(s.coefficients, np.linalg.svd(v.tensor, compute_uv=False), atol=1e-12)
        for k in (0, 1):
            ev = np.sort(np.linalg.eigvalsh(reduced_density(v, k).matrix))[::-1]
            assert np.allclose(ev, s.coefficients**2, atol=1e-10)


def test_group_multiplicities():
    assert group_multiplicities(np.array([0.6, 0.6, 0.5, 0.0])) == (1, 2, 1)
    assert group_multiplicities(np.array([1.0, 0.0, 0.0])) == (2, 1)


def test_random_state_determinism_and_norm():
    a, b = random_state([2, 2], 7), random_state([2, 2], 7)
    assert np.array_equal(a.amplitudes, b.amplitudes)
    assert abs(np.linalg.norm(random_state([2, 2, 2], 1).amplitudes) - 1) < 1e-12


def test_random_state_haar_moment():
    vals = [abs(random_state([2, 2], s).amplitudes[0]) ** 2 for s in range(10_000)]
    assert abs(np.mean(vals) - 0.25) < 0.02


def test_ghz():
    g = ghz(3)
    assert np.flatnonzero(g.amplitudes).tolist() == [0, 7]
    assert np.allclose(g.amplitudes[[0, 7]], 2**-0.5)
    assert np.allclose(schmidt(ghz(2)).coefficients, [2**-0.5] * 2)
    for k in range(4):
        assert np.allclose(reduced_density(ghz(4), k).matrix, np.eye(2) / 2)
    with pytest.raises(BadArity):
        ghz(1)


def test_apply_local_matches_kron():
    rng = np.random.default_rng(0)
    v = random_state([2, 3, 2], 9)
    us = random_local_unitaries(v.dims, rng)
    dense = np.kron(np.kron(us[0], us[1]), us[2]) @ v.amplitudes
    assert np.allclose(apply_local(us, v).amplitudes, dense)
    assert np.allclose(apply_local([None, None, None], v).amplitudes, v.amplitudes)
