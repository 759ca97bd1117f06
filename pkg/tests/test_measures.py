import math

import numpy as np
import pytest

from unient.entropy import UnifiedParams
from unient.measures import Decomposition, OptBudget, ue_mixed, ue_pure, ueoa
from unient.qstate import (
    Bipartition,
    DensityMatrix,
    PureState,
    bipartition_of,
    haar_random_pure,
    named_state,
    partial_trace,
    random_mixed,
)

from oracles import concurrence

P21 = UnifiedParams(2.0, 1.0)
CUT01 = Bipartition((0,), (1,))
FAST = OptBudget(restarts=8, seed=0)


def w3_pair():
    return partial_trace(named_state("w", 3).density(), {0, 1})


def ghz_pair():
    return partial_trace(named_state("ghz", 3).density(), {0, 1})


def test_ue_pure_examples():
    bell = named_state("bell", 2)
    assert abs(ue_pure(bell, CUT01, P21) - 0.5) < 1e-12
    product = named_state("product", 2)
    assert abs(ue_pure(product, CUT01, P21)) < 1e-12
    w3 = named_state("w", 3)
    assert abs(ue_pure(w3, bipartition_of(3, [0]), P21) - 4 / 9) < 1e-12


def test_ue_pure_swap_symmetry():
    for seed in range(10):
        psi = haar_random_pure(3, 700 + seed)
        q = UnifiedParams(2.5, 0.5)
        a = ue_pure(psi, Bipartition((0,), (1, 2)), q)
        b = ue_pure(psi, Bipartition((1, 2), (0,)), q)
        assert abs(a - b) < 1e-9


def test_ue_mixed_on_pure_input_is_exact():
    bell = named_state("bell", 2)
    res = ue_mixed(bell.density(), CUT01, P21, FAST)
    assert abs(res.value - 0.5) < 1e-10
    assert res.mode == "min"
    assert res.converged
    assert len(res.witness.members) == 1
    res_a = ueoa(bell.density(), CUT01, P21, FAST)
    assert abs(res_a.value - res.value) < 1e-10


def test_separable_mixture_reaches_zero():
    res = ue_mixed(ghz_pair(), CUT01, P21, FAST)
    assert res.value < 1e-9


def test_w3_pair_matches_concurrence_oracle():
    rho = w3_pair()
    c = concurrence(np.asarray(rho.entries))
    assert abs(c - 2 / 3) < 1e-9
    res = ue_mixed(rho, CUT01, P21)
    assert abs(res.value - c * c / 2) < 1e-3
    assert abs(res.value - 2 / 9) < 1e-3


def test_ueoa_ghz_pair_reaches_bell_mixture():
    res = ueoa(ghz_pair(), CUT01, P21)
    assert abs(res.value - 0.5) < 1e-3
    assert res.mode == "max"


def test_ueoa_pure_marginal_factor_gives_zero():
    rho_b = random_mixed(1, 2, seed=3)
    ent = np.kron(np.diag([1.0, 0.0]), rho_b.entries)
    rho = DensityMatrix(2, ent)
    res = ueoa(rho, CUT01, P21, FAST)
    assert res.value < 1e-9


def test_max_dominates_min():
    for seed in range(8):
        rho = random_mixed(2, 3, seed=800 + seed)
        lo = ue_mixed(rho, CUT01, P21, FAST)
        hi = ueoa(rho, CUT01, P21, FAST)
        assert hi.value >= lo.value - 1e-9


def test_witness_consistency():
    for fn in (ue_mixed, ueoa):
        res = fn(w3_pair(), CUT01, P21, FAST)
        re_eval = sum(p * ue_pure(psi, CUT01, P21) for p, psi in res.witness.members)
        assert abs(re_eval - res.value) < 1e-8


def test_witness_reconstructs_input():
    rho = random_mixed(2, 4, seed=12)
    res = ue_mixed(rho, CUT01, P21, FAST)
    assert np.max(np.abs(res.witness.reconstruct() - rho.entries)) < 1e-7
    total = sum(p for p, _ in res.witness.members)
    assert abs(total - 1.0) < 1e-9


def test_value_monotone_in_restarts():
    rho = random_mixed(2, 4, seed=21)
    prev_min, prev_max = math.inf, -math.inf
    for restarts in range(1, 7):
        budget = OptBudget(restarts=restarts, seed=5)
        lo = ue_mixed(rho, CUT01, P21, budget).value
        hi = ueoa(rho, CUT01, P21, budget).value
        assert lo <= prev_min + 1e-15
        assert hi >= prev_max - 1e-15
        prev_min, prev_max = lo, hi


def test_restart_seed_determinism():
    rho = random_mixed(2, 4, seed=33)
    a = ue_mixed(rho, CUT01, P21, OptBudget(restarts=6, seed=9))
    b = ue_mixed(rho, CUT01, P21, OptBudget(restarts=6, seed=9))
    assert a.value == b.value
    assert a.restarts_used == b.restarts_used


def test_larger_cut_roof():
    # side A of two qubits exercises the general spectrum path
    rho = random_mixed(3, 2, seed=14)
    cut = Bipartition((0, 1), (2,))
    res = ue_mixed(rho, cut, P21, OptBudget(restarts=4, seed=0))
    assert res.value >= -1e-12
    re_eval = sum(p * ue_pure(psi, cut, P21) for p, psi in res.witness.members)
    assert abs(re_eval - res.value) < 1e-8


def test_budget_validation():
    with pytest.raises(ValueError):
        OptBudget(restarts=0)
    with pytest.raises(ValueError):
        OptBudget(tol=0.0)


def test_decomposition_validation():
    bell = named_state("bell", 2)
    with pytest.raises(Exception):
        Decomposition(((0.5, bell),))   # probabilities do not sum to 1
    dec = Decomposition(((1.0, bell),))
    assert np.allclose(dec.reconstruct(), bell.density().entries)


def test_cut_must_cover_register():
    rho = random_mixed(2, 2, seed=2)
    with pytest.raises(Exception):
        ue_mixed(rho, Bipartition((0,), (2,)), P21, FAST)
