"""Unified-(q,s) entanglement (UE) and its assisted dual (UEoA).

For a pure bipartite state the measure is the unified entropy of the side-A
marginal.  For mixed states the value is a decomposition roof: the minimum
(UE) or maximum (UEoA) of the probability-weighted pure-state measure over
pure-state decompositions of the input.  Decompositions of a rank-r state
are exactly the images of the spectral decomposition under m x r isometries,
which the optimizer parametrizes with a Givens ladder and searches by
multi-restart Nelder-Mead.

Roof values are one-sided: a minimization result is an upper bound on the
true roof and a maximization result is a lower bound; both are achieved by
the returned witness decomposition.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Optional

import numpy as np

from . import _kernel
from .entropy import (
    GENERIC,
    RENYI_LIMIT,
    TSALLIS_VALUE,
    VON_NEUMANN_LIMIT,
    UnifiedParams,
    unified_entropy,
)
from .errors import InvalidStateError, SingularParametersError
from .qstate import (
    RANK_CUTOFF,
    Bipartition,
    DensityMatrix,
    PureState,
    eigensystem,
    pure_marginal_spectrum,
)

_REGIME_CODES = {
    GENERIC: _kernel.REGIME_GENERIC,
    RENYI_LIMIT: _kernel.REGIME_RENYI,
    TSALLIS_VALUE: _kernel.REGIME_TSALLIS,
    VON_NEUMANN_LIMIT: _kernel.REGIME_VON_NEUMANN,
}

MEMBER_DROP = 1e-12   # witness members below this probability are dropped


@dataclass(frozen=True)
class OptBudget:
    """Roof-search budget; exposed through the CLI flags of the harness."""

    restarts: int = 32
    iterations: int = 2000
    ensemble_cap: Optional[int] = None   # None resolves to max(rank^2, 6)
    tol: float = 1e-9
    seed: int = 0

    def __post_init__(self):
        if self.restarts < 1 or self.iterations < 1:
            raise ValueError("restarts and iterations must be positive")
        if self.tol <= 0:
            raise ValueError("tol must be positive")

    def child(self, *keys: int) -> "OptBudget":
        """Budget with a seed derived deterministically from (seed, *keys)."""
        derived = int(np.random.SeedSequence((self.seed,) + tuple(keys)).generate_state(1)[0])
        return replace(self, seed=derived)


@dataclass(frozen=True)
class Decomposition:
    """Probabilistic pure-state ensemble realizing a density matrix."""

    members: tuple

    def __post_init__(self):
        members = tuple((float(p), psi) for p, psi in self.members)
        if not members:
            raise InvalidStateError("decomposition must have at least one member")
        total = sum(p for p, _ in members)
        if abs(total - 1.0) > 1e-9:
            raise InvalidStateError(f"probabilities sum to {total!r}, expected 1")
        if any(p < -1e-12 for p, _ in members):
            raise InvalidStateError("negative member probability")
        object.__setattr__(self, "members", members)

    def reconstruct(self) -> np.ndarray:
        """Sum of p |psi><psi| over the members."""
        dim = self.members[0][1].dim
        out = np.zeros((dim, dim), dtype=np.complex128)
        for p, psi in self.members:
            out += p * np.outer(psi.amplitudes, psi.amplitudes.conj())
        return out


@dataclass(frozen=True)
class RoofResult:
    value: float
    witness: Decomposition
    mode: str               # "min" or "max"
    restarts_used: int
    converged: bool
    at_ensemble_cap: bool = False   # best witness uses the full ensemble cap


def ue_pure(psi: PureState, cut: Bipartition, params: UnifiedParams) -> float:
    """Unified entropy of the side-A marginal of a pure state."""
    cut.validate_for(psi.n_qubits)
    return unified_entropy(pure_marginal_spectrum(psi, cut.side_a), params)


# Restart loop heuristics: run at least MIN_RESTARTS, then stop once PATIENCE
# consecutive restarts fail to improve the best value by more than the budget
# tolerance.  Purely value-driven, so results stay deterministic and the
# best-so-far sequence is a prefix of any longer run with the same seed.
MIN_RESTARTS = 6
PATIENCE = 6


def _ensemble_schedule(rank: int, cap: int, restarts: int) -> list:
    """Ensemble size per restart slot, covering sizes from rank up to cap.

    Most slots stay at the rank (the optimum of a two-qubit roof in the
    theorem regions sits there); the cap size runs early so it is explored
    before any patience stop."""
    cycle = [rank, cap, rank, min(rank + 1, cap), rank, min(rank + 2, cap), rank, rank]
    return [cycle[i % len(cycle)] for i in range(restarts)]


def _restart_start(seed: int, index: int, dim: int) -> np.ndarray:
    if index == 0:
        return np.zeros(dim)   # identity isometry: the spectral decomposition
    rng = np.random.default_rng((seed, index))
    return rng.uniform(-math.pi, math.pi, dim)


def _axis_permutation(n_qubits: int, side_a: tuple, side_b: tuple) -> np.ndarray:
    """Basis-index permutation mapping (a, b)-major flat index to the original."""
    dim = 2 ** n_qubits
    return (
        np.arange(dim)
        .reshape([2] * n_qubits)
        .transpose(side_a + side_b)
        .reshape(dim)
    )


def _witness_from(x, pairs, m, r, ws, n_qubits, cut, params):
    """Decomposition and its weighted measure value, via the library path."""
    v = _kernel.build_isometry(x, pairs, m, r)
    psi_rows = v @ ws
    probs = np.sum(np.abs(psi_rows) ** 2, axis=1)
    members = []
    value = 0.0
    for i in range(m):
        p = float(probs[i])
        if p < MEMBER_DROP:
            continue
        member = PureState(n_qubits, psi_rows[i] / math.sqrt(p))
        value += p * ue_pure(member, cut, params)
        members.append((p, member))
    return value, Decomposition(tuple(members))


def _roof_search(rho: DensityMatrix, cut: Bipartition, params: UnifiedParams,
                 budget: OptBudget, mode: str) -> RoofResult:
    if params.q == 0.0 and params.s == 0.0:
        raise SingularParametersError("roof measures are singular at q = s = 0")
    cut.validate_for(rho.n_qubits)
    vals, vecs = eigensystem(rho)
    rank = max(int(np.sum(vals > RANK_CUTOFF)), 1)

    if rank == 1:
        member = PureState(rho.n_qubits, vecs[:, 0])
        witness = Decomposition(((1.0, member),))
        return RoofResult(ue_pure(member, cut, params), witness, mode, 0, True)

    cap = budget.ensemble_cap if budget.ensemble_cap is not None else max(rank * rank, 6)
    cap = max(cap, rank)
    schedule = _ensemble_schedule(rank, cap, budget.restarts)

    ws = (vecs[:, :rank] * np.sqrt(vals[:rank])).T.copy()   # (r, d) rows sqrt(l_k) v_k
    perm = _axis_permutation(rho.n_qubits, cut.side_a, cut.side_b)
    ws_perm = np.ascontiguousarray(ws[:, perm])
    d_a = 2 ** len(cut.side_a)
    d_b = 2 ** len(cut.side_b)
    sign = 1.0 if mode == "min" else -1.0
    regime = _REGIME_CODES[params.regime]

    # Further restarts cannot beat these a-priori bounds on the objective:
    # 0 from below, the maximally mixed member entropy from above.
    if mode == "min":
        bound = 0.0
    else:
        k = min(d_a, d_b)
        bound = unified_entropy(np.full(k, 1.0 / k), params)

    best_value = None
    best_witness = None
    any_converged = False
    used = 0
    last_improve = 0
    for index, m in enumerate(schedule):
        pairs, dim = _kernel.givens_layout(m, rank)
        x0 = _restart_start(budget.seed, index, dim)
        x1, _, conv = _kernel.nelder_mead(
            x0, 0.4, budget.iterations, budget.tol,
            pairs, m, rank, ws_perm, d_a, d_b, params.q, params.s, regime, sign,
        )
        if not conv:
            x1, _, conv = _kernel.nelder_mead(
                x1, 0.05, budget.iterations, budget.tol,
                pairs, m, rank, ws_perm, d_a, d_b, params.q, params.s, regime, sign,
            )
        any_converged = any_converged or conv
        value, witness = _witness_from(x1, pairs, m, rank, ws, rho.n_qubits, cut, params)
        used += 1
        better = best_value is None or (
            value < best_value if mode == "min" else value > best_value
        )
        if better:
            if best_value is not None and abs(value - best_value) > budget.tol:
                last_improve = index
            best_value = value
            best_witness = witness
        if abs(best_value - bound) <= budget.tol:
            # The objective provably cannot pass this bound, so the best
            # value is optimal within tolerance regardless of simplex state.
            any_converged = True
            break
        if used >= MIN_RESTARTS and index - last_improve >= PATIENCE:
            break
    at_cap = len(best_witness.members) >= cap
    return RoofResult(best_value, best_witness, mode, used, any_converged, at_cap)


def ue_mixed(rho: DensityMatrix, cut: Bipartition, params: UnifiedParams,
             budget: Optional[OptBudget] = None) -> RoofResult:
    """Decomposition-roof minimum of the pure-state measure (upper bound)."""
    return _roof_search(rho, cut, params, budget or OptBudget(), "min")


def ueoa(rho: DensityMatrix, cut: Bipartition, params: UnifiedParams,
         budget: Optional[OptBudget] = None) -> RoofResult:
    """Decomposition-roof maximum of the pure-state measure (lower bound)."""
    return _roof_search(rho, cut, params, budget or OptBudget(), "max")
