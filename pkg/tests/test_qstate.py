import math

import numpy as np
import pytest

from unient.errors import InvalidPartitionError, InvalidStateError, UnknownStateError
from unient.qstate import (
    Bipartition,
    DensityMatrix,
    PureState,
    Spectrum,
    bipartition_of,
    haar_random_pure,
    hermitian_spectrum,
    load_state,
    named_state,
    partial_trace,
    pure_marginal_spectrum,
    purify,
    random_mixed,
    save_state,
)

from oracles import brute_partial_trace


def test_partial_trace_bell():
    bell = named_state("bell", 2)
    rho_a = partial_trace(bell.density(), {0})
    assert np.allclose(rho_a.entries, np.eye(2) / 2, atol=1e-12)


def test_partial_trace_product():
    psi = named_state("product", 2)   # |0> (x) |+>
    rho_a = partial_trace(psi.density(), {0})
    assert np.allclose(rho_a.entries, np.diag([1.0, 0.0]), atol=1e-12)


def test_partial_trace_w_state_against_contraction_oracle():
    w3 = named_state("w", 3)
    rho_a = partial_trace(w3.density(), {0})
    expected = brute_partial_trace(np.asarray(w3.density().entries), 3, [0])
    assert np.allclose(rho_a.entries, expected, atol=1e-12)
    assert np.allclose(rho_a.entries, np.diag([2 / 3, 1 / 3]), atol=1e-12)


@pytest.mark.parametrize("n,keep", [(3, [0]), (3, [1, 2]), (4, [0, 2]), (4, [1]), (4, [0, 1, 3])])
def test_partial_trace_matches_oracle_on_random_states(n, keep):
    rho = random_mixed(n, 2 ** n, seed=n * 37 + len(keep))
    got = partial_trace(rho, keep)
    expected = brute_partial_trace(np.asarray(rho.entries), n, keep)
    assert np.allclose(got.entries, expected, atol=1e-12)


def test_partial_trace_preserves_trace_and_hermiticity():
    rng = np.random.default_rng(99)
    for _ in range(1000):
        n = int(rng.integers(2, 4))
        rank = int(rng.integers(1, 2 ** n + 1))
        rho = random_mixed(n, rank, rng)
        keep = [0] if n == 2 else sorted(rng.choice(n, size=int(rng.integers(1, n)), replace=False).tolist())
        red = partial_trace(rho, keep)
        assert abs(np.trace(red.entries).real - 1.0) < 1e-10
        assert np.max(np.abs(red.entries - red.entries.conj().T)) < 1e-10


def test_partial_trace_rejects_bad_keep_sets():
    rho = named_state("ghz", 3).density()
    with pytest.raises(InvalidPartitionError):
        partial_trace(rho, set())
    with pytest.raises(InvalidPartitionError):
        partial_trace(rho, {0, 5})
    with pytest.raises(InvalidPartitionError):
        partial_trace(rho, {0, 1, 2})


def test_hermitian_spectrum_examples():
    assert np.allclose(
        hermitian_spectrum(DensityMatrix(1, np.eye(2) / 2)).eigenvalues, [0.5, 0.5])
    assert np.allclose(
        hermitian_spectrum(DensityMatrix(1, np.diag([1.0, 0.0]))).eigenvalues, [1.0, 0.0])
    w_marginal = partial_trace(named_state("w", 3).density(), {0})
    assert np.allclose(hermitian_spectrum(w_marginal).eigenvalues, [2 / 3, 1 / 3], atol=1e-12)


def test_eigendecomposition_reconstructs():
    rho = random_mixed(3, 5, seed=5)
    vals, vecs = np.linalg.eigh(rho.entries)
    rebuilt = (vecs * vals) @ vecs.conj().T
    assert np.max(np.abs(rebuilt - rho.entries)) < 1e-8


def test_purify_rank_one_needs_no_ancilla():
    psi = purify(DensityMatrix(1, np.diag([1.0, 0.0])))
    assert psi.n_qubits == 1
    assert np.allclose(psi.amplitudes, [1.0, 0.0])


def test_purify_maximally_mixed_gives_bell_pair():
    psi = purify(DensityMatrix(1, np.eye(2) / 2))
    assert psi.n_qubits == 2
    marg = partial_trace(psi.density(), {0})
    assert np.allclose(marg.entries, np.eye(2) / 2, atol=1e-10)
    # Schmidt coefficients of a Bell pair
    assert np.allclose(sorted(np.abs(psi.amplitudes)), [0, 0, 1 / math.sqrt(2), 1 / math.sqrt(2)])


@pytest.mark.parametrize("n,rank", [(1, 2), (2, 3), (2, 4), (3, 5)])
def test_purify_round_trip(n, rank):
    rho = random_mixed(n, rank, seed=1000 + 7 * rank)
    psi = purify(rho)
    back = partial_trace(psi.density(), range(n))
    assert np.max(np.abs(back.entries - rho.entries)) < 1e-8


def test_haar_random_seed_determinism():
    a = haar_random_pure(3, 42)
    b = haar_random_pure(3, 42)
    c = haar_random_pure(3, 43)
    assert np.array_equal(a.amplitudes, b.amplitudes)
    assert np.max(np.abs(a.amplitudes - c.amplitudes)) > 1e-6


def test_random_mixed_rank_and_spectrum():
    rho = random_mixed(1, 2, seed=7)
    spec = hermitian_spectrum(rho)
    assert abs(spec.eigenvalues.sum() - 1.0) < 1e-10
    assert spec.eigenvalues[-1] > 1e-6   # full rank
    rank3 = random_mixed(2, 3, seed=8)
    vals = hermitian_spectrum(rank3).eigenvalues
    assert vals[2] > 1e-8 and vals[3] < 1e-12


def test_schmidt_symmetry_of_random_pure_states():
    for seed in range(20):
        psi = haar_random_pure(4, 500 + seed)
        sa = pure_marginal_spectrum(psi, [0]).eigenvalues
        sb = pure_marginal_spectrum(psi, [1, 2, 3]).eigenvalues
        assert np.max(np.abs(sa - sb[:2])) < 1e-8
        assert np.max(np.abs(sb[2:])) < 1e-8


def test_named_states():
    ghz = named_state("ghz", 3)
    assert np.allclose(ghz.amplitudes[[0, 7]], 1 / math.sqrt(2))
    assert np.allclose(np.delete(ghz.amplitudes, [0, 7]), 0.0)
    w = named_state("w", 3)
    assert np.allclose(sorted(np.abs(w.amplitudes))[-3:], 1 / math.sqrt(3))
    assert abs(w.amplitudes[1] - 1 / math.sqrt(3)) < 1e-12   # |001>
    bell = named_state("bell", 2)
    assert np.allclose(bell.amplitudes, [1 / math.sqrt(2), 0, 0, 1 / math.sqrt(2)])
    with pytest.raises(UnknownStateError):
        named_state("cluster", 3)
    with pytest.raises(UnknownStateError):
        named_state("bell", 3)


def test_state_validation():
    with pytest.raises(InvalidStateError):
        PureState(2, np.array([1.0, 1.0, 0.0, 0.0]))
    with pytest.raises(InvalidStateError):
        PureState(2, np.array([1.0, 0.0]))
    bad_herm = np.eye(4) / 4 + 1e-6 * np.array([[0, 1j, 0, 0]] + [[0] * 4] * 3)
    with pytest.raises(InvalidStateError):
        DensityMatrix(2, bad_herm)
    with pytest.raises(InvalidStateError):
        DensityMatrix(1, np.diag([1.5, -0.5]))


def test_bipartition_validation():
    with pytest.raises(InvalidPartitionError):
        Bipartition((0,), (0, 1))
    with pytest.raises(InvalidPartitionError):
        Bipartition((), (0,))
    cut = bipartition_of(3, [1])
    assert cut.side_a == (1,) and cut.side_b == (0, 2)
    with pytest.raises(InvalidPartitionError):
        cut.validate_for(2)


def test_spectrum_validation():
    with pytest.raises(InvalidStateError):
        Spectrum(np.array([0.6, 0.6]))
    with pytest.raises(InvalidStateError):
        Spectrum(np.array([1.2, -0.2]))
    spec = Spectrum(np.array([0.3, 0.7]))   # sorted on construction
    assert spec.eigenvalues[0] == 0.7


def test_json_state_round_trip(tmp_path):
    pure = haar_random_pure(2, 3)
    path = tmp_path / "pure.json"
    save_state(pure, path)
    loaded = load_state(path)
    assert isinstance(loaded, PureState)
    assert np.allclose(loaded.amplitudes, pure.amplitudes)

    mixed = random_mixed(2, 3, seed=4)
    path2 = tmp_path / "mixed.json"
    save_state(mixed, path2)
    loaded2 = load_state(path2)
    assert isinstance(loaded2, DensityMatrix)
    assert np.allclose(loaded2.entries, mixed.entries)


def test_json_loader_enforces_invariants(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text('{"n_qubits": 1, "kind": "pure", "amplitudes": [[1.0, 0.0], [1.0, 0.0]]}')
    with pytest.raises(InvalidStateError):
        load_state(path)
