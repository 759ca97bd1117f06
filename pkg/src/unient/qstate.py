"""Multi-qubit state containers and the linear-algebra primitives built on them.

Conventions: qubit 0 is the leftmost tensor factor, so basis states are
enumerated with qubit 0 as the most significant bit.  All containers are
immutable after construction and validate their invariants eagerly.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Iterable, Sequence, Union

import numpy as np

from .errors import InvalidPartitionError, InvalidStateError, UnknownStateError

# Centralized validity tolerances.
NORM_ATOL = 1e-10          # squared 2-norm of pure-state amplitudes
HERMITICITY_ATOL = 1e-10   # entrywise |rho - rho^dag|
PSD_ATOL = -1e-9           # smallest admissible eigenvalue
SPECTRUM_SUM_ATOL = 1e-8   # clamped eigenvalues must sum to 1 within this
RANK_CUTOFF = 1e-12        # eigenvalues below this count as zero

SeedLike = Union[int, np.random.Generator]


def _as_rng(seed: SeedLike) -> np.random.Generator:
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed)


def _frozen(arr: np.ndarray) -> np.ndarray:
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class PureState:
    """Normalized complex amplitude vector over an n-qubit register."""

    n_qubits: int
    amplitudes: np.ndarray

    def __post_init__(self):
        if self.n_qubits < 1:
            raise InvalidStateError("n_qubits must be a positive integer")
        amps = np.ascontiguousarray(self.amplitudes, dtype=np.complex128)
        if amps.shape != (2 ** self.n_qubits,):
            raise InvalidStateError(
                f"expected {2 ** self.n_qubits} amplitudes, got shape {amps.shape}"
            )
        norm_sq = float(np.sum(np.abs(amps) ** 2))
        if abs(norm_sq - 1.0) > NORM_ATOL:
            raise InvalidStateError(f"amplitudes not normalized: |psi|^2 = {norm_sq!r}")
        object.__setattr__(self, "amplitudes", _frozen(amps))

    @property
    def dim(self) -> int:
        return self.amplitudes.shape[0]

    def density(self) -> "DensityMatrix":
        return DensityMatrix(self.n_qubits, np.outer(self.amplitudes, self.amplitudes.conj()))


@dataclass(frozen=True)
class DensityMatrix:
    """Hermitian, positive-semidefinite, unit-trace operator on a qubit register."""

    n_qubits: int
    entries: np.ndarray

    def __post_init__(self):
        if self.n_qubits < 1:
            raise InvalidStateError("n_qubits must be a positive integer")
        dim = 2 ** self.n_qubits
        mat = np.ascontiguousarray(self.entries, dtype=np.complex128)
        if mat.shape != (dim, dim):
            raise InvalidStateError(f"expected shape {(dim, dim)}, got {mat.shape}")
        if np.max(np.abs(mat - mat.conj().T)) > HERMITICITY_ATOL:
            raise InvalidStateError("matrix is not Hermitian within tolerance")
        tr = float(np.trace(mat).real)
        if abs(tr - 1.0) > NORM_ATOL:
            raise InvalidStateError(f"trace is {tr!r}, expected 1")
        smallest = float(np.linalg.eigvalsh(mat)[0])
        if smallest < PSD_ATOL:
            raise InvalidStateError(f"smallest eigenvalue {smallest!r} below PSD tolerance")
        object.__setattr__(self, "entries", _frozen(mat))

    @property
    def dim(self) -> int:
        return self.entries.shape[0]


@dataclass(frozen=True)
class Bipartition:
    """A two-sided split of qubit indices; both sides sorted and nonempty."""

    side_a: tuple
    side_b: tuple

    def __post_init__(self):
        a = tuple(sorted(int(i) for i in self.side_a))
        b = tuple(sorted(int(i) for i in self.side_b))
        if not a or not b:
            raise InvalidPartitionError("both sides of a bipartition must be nonempty")
        if set(a) & set(b):
            raise InvalidPartitionError("bipartition sides overlap")
        object.__setattr__(self, "side_a", a)
        object.__setattr__(self, "side_b", b)

    def validate_for(self, n_qubits: int) -> None:
        """Check that the two sides exactly cover {0, .., n_qubits-1}."""
        union = set(self.side_a) | set(self.side_b)
        if union != set(range(n_qubits)):
            raise InvalidPartitionError(
                f"bipartition {self.side_a}|{self.side_b} does not cover a "
                f"{n_qubits}-qubit register"
            )


def bipartition_of(n_qubits: int, side_a: Iterable[int]) -> Bipartition:
    """Build the cut side_a | rest on an n-qubit register."""
    a = sorted(set(int(i) for i in side_a))
    if any(i < 0 or i >= n_qubits for i in a):
        raise InvalidPartitionError(f"qubit indices {a} out of range for n={n_qubits}")
    b = [i for i in range(n_qubits) if i not in set(a)]
    return Bipartition(tuple(a), tuple(b))


@dataclass(frozen=True)
class Spectrum:
    """Descending real eigenvalues of a density matrix (probabilities)."""

    eigenvalues: np.ndarray

    def __post_init__(self):
        vals = np.ascontiguousarray(self.eigenvalues, dtype=np.float64)
        if vals.ndim != 1 or vals.size == 0:
            raise InvalidStateError("spectrum must be a nonempty 1-d real vector")
        if np.any(np.diff(vals) > 0):
            vals = np.sort(vals)[::-1].copy()
        if vals[-1] < PSD_ATOL or vals[0] > 1.0 - PSD_ATOL:
            raise InvalidStateError(f"eigenvalues outside [{PSD_ATOL}, {1 - PSD_ATOL}]")
        total = float(np.clip(vals, 0.0, 1.0).sum())
        if abs(total - 1.0) > SPECTRUM_SUM_ATOL:
            raise InvalidStateError(f"clamped eigenvalues sum to {total!r}, expected 1")
        object.__setattr__(self, "eigenvalues", _frozen(vals))

    def probabilities(self) -> np.ndarray:
        """Eigenvalues clamped to [0, 1]; negative PSD drift is zeroed."""
        return np.clip(self.eigenvalues, 0.0, 1.0)


# ---------------------------------------------------------------------------
# operations


def _trace_out_qubit(mat: np.ndarray, n_qubits: int, target: int) -> np.ndarray:
    """Trace a single qubit out of a 2^n x 2^n matrix.

    Implemented as a fixed two-term sum so that tracing out a qubit held in an
    exact |0> state is a bitwise no-op on the remaining block.
    """
    d_left = 2 ** target
    d_right = 2 ** (n_qubits - target - 1)
    x = mat.reshape(d_left, 2, d_right, d_left, 2, d_right)
    out = x[:, 0, :, :, 0, :] + x[:, 1, :, :, 1, :]
    keep_dim = d_left * d_right
    return np.ascontiguousarray(out.reshape(keep_dim, keep_dim))


def partial_trace(rho: DensityMatrix, keep: Iterable[int]) -> DensityMatrix:
    """Reduced density matrix on the sorted qubit subset ``keep``.

    Traced qubits are removed one at a time in descending index order; the
    kept qubits retain their relative order.
    """
    keep_set = set(int(i) for i in keep)
    if not keep_set:
        raise InvalidPartitionError("keep set must be nonempty")
    all_qubits = set(range(rho.n_qubits))
    if not keep_set <= all_qubits:
        raise InvalidPartitionError(
            f"keep set {sorted(keep_set)} out of range for n={rho.n_qubits}"
        )
    if keep_set == all_qubits:
        raise InvalidPartitionError("keep set must be a proper subset of the register")

    mat = np.array(rho.entries, dtype=np.complex128)
    n = rho.n_qubits
    for target in sorted(all_qubits - keep_set, reverse=True):
        mat = _trace_out_qubit(mat, n, target)
        n -= 1
    return DensityMatrix(len(keep_set), mat)


def hermitian_spectrum(rho: DensityMatrix) -> Spectrum:
    """Descending eigenvalues of a density matrix."""
    mat = rho.entries
    if np.max(np.abs(mat - mat.conj().T)) > HERMITICITY_ATOL:
        raise InvalidStateError("matrix is not Hermitian within tolerance")
    vals = np.linalg.eigvalsh(mat)[::-1]
    return Spectrum(vals)


def eigensystem(rho: DensityMatrix) -> tuple:
    """(eigenvalues, eigenvectors) with descending eigenvalues.

    Eigenvalues in [PSD_ATOL, 0) are clamped to 0.  Column k of the returned
    matrix is the eigenvector of eigenvalue k.
    """
    vals, vecs = np.linalg.eigh(rho.entries)
    vals = vals[::-1].copy()
    vecs = vecs[:, ::-1].copy()
    vals[(vals < 0.0) & (vals >= PSD_ATOL)] = 0.0
    return vals, vecs


def pure_marginal_spectrum(psi: PureState, side_a: Sequence[int]) -> Spectrum:
    """Spectrum of the reduced state of ``psi`` on the qubits ``side_a``.

    Computed from the Gram matrix of the reshaped amplitude matrix on the
    smaller side; the nonzero spectrum is the same on both sides.
    """
    cut = bipartition_of(psi.n_qubits, side_a)
    axes = cut.side_a + cut.side_b
    d_a = 2 ** len(cut.side_a)
    d_b = 2 ** len(cut.side_b)
    mat = psi.amplitudes.reshape([2] * psi.n_qubits).transpose(axes).reshape(d_a, d_b)
    if d_a <= d_b:
        gram = mat @ mat.conj().T
    else:
        gram = mat.conj().T @ mat
    vals = np.linalg.eigvalsh(gram)[::-1]
    # Pad with exact zeros so the spectrum always has d_a entries.
    if vals.shape[0] < d_a:
        vals = np.concatenate([vals, np.zeros(d_a - vals.shape[0])])
    vals = np.clip(vals, 0.0, 1.0)
    return Spectrum(vals / vals.sum())


def purify(rho: DensityMatrix) -> PureState:
    """Spectral purification on ceil(log2 rank) ancilla qubits.

    The marginal of the returned state on the original register equals the
    input; rank-1 inputs need no ancillas.
    """
    vals, vecs = eigensystem(rho)
    rank = int(np.sum(vals > RANK_CUTOFF))
    rank = max(rank, 1)
    n_anc = 0 if rank == 1 else math.ceil(math.log2(rank))
    d_anc = 2 ** n_anc
    amps = np.zeros(rho.dim * d_anc, dtype=np.complex128)
    for k in range(rank):
        anc = np.zeros(d_anc, dtype=np.complex128)
        anc[k] = 1.0
        amps += math.sqrt(vals[k]) * np.kron(vecs[:, k], anc)
    amps /= np.linalg.norm(amps)
    return PureState(rho.n_qubits + n_anc, amps)


def haar_random_pure(n_qubits: int, seed: SeedLike) -> PureState:
    """Haar-distributed pure state: normalized complex-normal vector."""
    rng = _as_rng(seed)
    dim = 2 ** n_qubits
    z = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
    return PureState(n_qubits, z / np.linalg.norm(z))


def random_mixed(n_qubits: int, rank: int, seed: SeedLike) -> DensityMatrix:
    """Random mixed state of the given rank.

    Built as the marginal of a Haar-like pure state on an ancilla register of
    dimension ``rank``, which makes the rank exact almost surely.
    """
    dim = 2 ** n_qubits
    if not 1 <= rank <= dim:
        raise InvalidStateError(f"rank must lie in [1, {dim}], got {rank}")
    rng = _as_rng(seed)
    g = rng.standard_normal((dim, rank)) + 1j * rng.standard_normal((dim, rank))
    g /= np.linalg.norm(g)
    return DensityMatrix(n_qubits, g @ g.conj().T)


def named_state(kind: str, n_qubits: int) -> PureState:
    """Canonical test states: ghz, w, product, bell."""
    dim = 2 ** n_qubits
    amps = np.zeros(dim, dtype=np.complex128)
    if kind == "ghz":
        if n_qubits < 2:
            raise UnknownStateError("ghz needs at least 2 qubits")
        amps[0] = amps[-1] = 1 / math.sqrt(2)
    elif kind == "w":
        if n_qubits < 2:
            raise UnknownStateError("w needs at least 2 qubits")
        for k in range(n_qubits):
            amps[2 ** k] = 1 / math.sqrt(n_qubits)
    elif kind == "bell":
        if n_qubits != 2:
            raise UnknownStateError("bell is a 2-qubit state")
        amps[0] = amps[3] = 1 / math.sqrt(2)
    elif kind == "product":
        # |0> on qubit 0, |+> on the rest
        one = np.array([1.0, 0.0], dtype=np.complex128)
        plus = np.array([1.0, 1.0], dtype=np.complex128) / math.sqrt(2)
        amps = one
        for _ in range(n_qubits - 1):
            amps = np.kron(amps, plus)
    else:
        raise UnknownStateError(f"unknown state kind {kind!r}")
    return PureState(n_qubits, amps)


# ---------------------------------------------------------------------------
# JSON state files


def save_state(state, path) -> None:
    """Write a pure or mixed state to a JSON state file."""
    if isinstance(state, PureState):
        doc = {
            "n_qubits": state.n_qubits,
            "kind": "pure",
            "amplitudes": [[z.real, z.imag] for z in state.amplitudes],
        }
    elif isinstance(state, DensityMatrix):
        doc = {
            "n_qubits": state.n_qubits,
            "kind": "mixed",
            "matrix": [[[z.real, z.imag] for z in row] for row in state.entries],
        }
    else:
        raise InvalidStateError(f"cannot serialize object of type {type(state).__name__}")
    with open(path, "w") as fh:
        json.dump(doc, fh)


def load_state(path):
    """Read a JSON state file; returns PureState or DensityMatrix."""
    with open(path) as fh:
        doc = json.load(fh)
    kind = doc.get("kind")
    if kind == "pure":
        amps = np.array([complex(re, im) for re, im in doc["amplitudes"]])
        n = int(doc.get("n_qubits", round(math.log2(len(amps)))))
        return PureState(n, amps)
    if kind == "mixed":
        mat = np.array([[complex(re, im) for re, im in row] for row in doc["matrix"]])
        n = int(doc.get("n_qubits", round(math.log2(mat.shape[0]))))
        return DensityMatrix(n, mat)
    raise InvalidStateError(f"unknown state file kind {kind!r}")
