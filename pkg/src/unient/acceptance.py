"""Acceptance-suite driver: one callable per criterion, plus a runner.

Each criterion returns (passed, detail) and is deliberately tolerant-free in
structure: thresholds are keyword arguments with their contractual defaults,
so a tampered tolerance visibly flips the outcome.  Criteria that feed later
ones (the big theorem ensembles) stash their reports on the shared context.
"""

from __future__ import annotations

import math
import tempfile
import time
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .entropy import UnifiedParams, renyi_entropy, tsallis_entropy, unified_entropy, von_neumann_entropy
from .hamming import lemma1_check
from .inequality import (
    check_monogamy_hamming,
    check_monogamy_indexed,
    check_monogamy_plain,
    check_polygamy_hamming,
    check_polygamy_indexed,
    check_polygamy_plain,
    pad_parties,
    tightness_chain,
)
from .measures import OptBudget, ue_mixed, ueoa
from .qstate import (
    Bipartition,
    haar_random_pure,
    named_state,
    partial_trace,
)
from .sweep import SweepConfig, run_sweep, render_reports

MAX_MIXED_QUBIT = np.array([0.5, 0.5])
PURE_SPECTRUM = np.array([1.0, 0.0])

# High-precision reference for S_{2,1/2} of the maximally mixed qubit:
# ((1/2)^(1/2) - 1) / ((1 - 2) * (1/2)) = 2 - sqrt(2).
S_2_HALF_REFERENCE = 0.5857864376269049


def _concurrence(rho: np.ndarray) -> float:
    """Two-qubit concurrence; used as an independent roof oracle."""
    sy = np.array([[0.0, -1.0j], [1.0j, 0.0]])
    yy = np.kron(sy, sy)
    rho_tilde = yy @ rho.conj() @ yy
    ev = np.sqrt(np.maximum(np.linalg.eigvals(rho @ rho_tilde).real, 0.0))
    ev = np.sort(ev)[::-1]
    return max(0.0, ev[0] - ev[1] - ev[2] - ev[3])


def _region_grid():
    """20 (q, s) points, half in each theorem region."""
    mono = [(q, s) for q in (2.0, 2.25, 2.5, 2.75, 3.0) for s in (0.25, 1.0)]
    poly = []
    for q in (1.0, 1.25, 1.5, 1.75, 2.0):
        smin = max(-q * q + 4.0 * q - 3.0, 0.0)
        poly.extend([(q, (smin + 1.0) / 2.0), (q, 1.0)])
    return mono + poly


def _random_spectrum(rng) -> np.ndarray:
    dim = int(rng.integers(2, 9))
    lam = rng.dirichlet(np.ones(dim))
    return np.sort(lam)[::-1]


@dataclass
class _Shared:
    """Reports carried between criteria (6 and 8 feed 9)."""

    chain_bundles: list = field(default_factory=list)


# ---------------------------------------------------------------------------
# criteria


def criterion_entropy_closed_forms(seed, shared, value_tol=1e-9, pure_tol=1e-12):
    exact = unified_entropy(MAX_MIXED_QUBIT, UnifiedParams(2.0, 1.0))
    if exact != 0.5:
        return False, f"S_2,1(I/2) = {exact!r}, expected exactly 0.5"
    half = unified_entropy(MAX_MIXED_QUBIT, UnifiedParams(2.0, 0.5))
    if abs(half - S_2_HALF_REFERENCE) > value_tol:
        return False, f"S_2,0.5(I/2) = {half!r} off reference by {half - S_2_HALF_REFERENCE:.3g}"
    worst = 0.0
    for q, s in _region_grid():
        val = unified_entropy(PURE_SPECTRUM, UnifiedParams(q, s))
        worst = max(worst, abs(val))
    if worst > pure_tol:
        return False, f"pure-state entropy reached {worst:.3g} on the region grid"
    return True, f"S_2,1 exact; S_2,0.5 err {abs(half - S_2_HALF_REFERENCE):.1e}; pure grid max {worst:.1e}"


def criterion_limit_continuity(seed, shared, renyi_tol=1e-4, vn_tol=1e-4, tsallis_tol=1e-8):
    rng = np.random.default_rng((seed, 2))
    worst_r = worst_v = worst_t = 0.0
    for _ in range(100):
        lam = _random_spectrum(rng)
        q = float(rng.uniform(0.1, 4.0))
        if abs(q - 1.0) < 0.01:
            q = 1.5
        s = float(rng.uniform(0.05, 1.0))
        worst_r = max(worst_r, abs(
            unified_entropy(lam, UnifiedParams(q, 1e-5)) - renyi_entropy(lam, q)))
        vn = von_neumann_entropy(lam)
        for qq in (1.0 - 1e-5, 1.0 + 1e-5):
            worst_v = max(worst_v, abs(unified_entropy(lam, UnifiedParams(qq, s)) - vn))
        worst_t = max(worst_t, abs(
            unified_entropy(lam, UnifiedParams(q, 1.0 - 1e-9)) - tsallis_entropy(lam, q)))
    if worst_r > renyi_tol or worst_v > vn_tol or worst_t > tsallis_tol:
        return False, f"limit errors renyi={worst_r:.2e} vn={worst_v:.2e} tsallis={worst_t:.2e}"
    return True, f"renyi {worst_r:.1e}, von Neumann {worst_v:.1e}, tsallis {worst_t:.1e}"


def criterion_lemma_fuzz(seed, shared, sign_tol=1e-12, samples=100_000):
    rng = np.random.default_rng((seed, 3))
    xs = rng.uniform(0.0, 1.0, samples)
    alphas = rng.uniform(1.0, 10.0, samples)
    betas = rng.uniform(0.0, 1.0, samples)
    worst_a = min(lemma1_check(x, a, "alpha") for x, a in zip(xs, alphas))
    worst_b = max(lemma1_check(x, b, "beta") for x, b in zip(xs, betas))
    if worst_a < -sign_tol or worst_b > sign_tol:
        return False, f"sign violations: alpha min {worst_a:.2e}, beta max {worst_b:.2e}"
    return True, f"{samples} samples/mode; alpha min {worst_a:.1e}, beta max {worst_b:.1e}"


def criterion_roof_oracle(seed, shared, roof_tol=1e-3):
    params = UnifiedParams(2.0, 1.0)
    budget = OptBudget(seed=seed)
    w3 = named_state("w", 3)
    rho_w = partial_trace(w3.density(), {0, 1})
    conc = _concurrence(rho_w.entries)
    expect = conc * conc / 2.0
    if abs(conc - 2.0 / 3.0) > 1e-9:
        return False, f"oracle concurrence {conc!r} off 2/3"
    got = ue_mixed(rho_w, Bipartition((0,), (1,)), params, budget).value
    if abs(got - expect) > roof_tol:
        return False, f"W3 pair roof {got!r} vs oracle {expect!r}"
    ghz = named_state("ghz", 3)
    rho_g = partial_trace(ghz.density(), {0, 1})
    got_a = ueoa(rho_g, Bipartition((0,), (1,)), params, budget).value
    if abs(got_a - 0.5) > roof_tol:
        return False, f"GHZ pair assisted roof {got_a!r} vs 0.5"
    return True, f"W3 roof err {abs(got - expect):.1e}; GHZ assisted err {abs(got_a - 0.5):.1e}"


def criterion_saturation(seed, shared, slack_tol=2e-3, lhs_tol=1e-9):
    params = UnifiedParams(2.0, 1.0)
    budget = OptBudget(seed=seed)
    w3 = named_state("w", 3)
    cache = {}
    r1 = check_monogamy_hamming(w3, 0, params=params, alpha=1.0, budget=budget, cache=cache)
    if abs(r1.slack) > slack_tol:
        return False, f"W3 alpha=1 slack {r1.slack!r} exceeds {slack_tol}"
    r2 = check_monogamy_hamming(w3, 0, params=params, alpha=2.0, budget=budget, cache=cache)
    if abs(r2.slack - 4.0 / 81.0) > slack_tol:
        return False, f"W3 alpha=2 slack {r2.slack!r} vs 4/81"
    w4 = named_state("w", 4)
    r3 = check_monogamy_hamming(w4, 0, params=params, alpha=1.0, budget=budget)
    if abs(r3.lhs - 0.375) > lhs_tol:
        return False, f"W4 lhs {r3.lhs!r} vs 3/8"
    if abs(r3.slack) > slack_tol:
        return False, f"W4 alpha=1 slack {r3.slack!r} exceeds {slack_tol}"
    return True, (f"W3 slacks {r1.slack:.1e} / {r2.slack - 4 / 81:.1e} off target; "
                  f"W4 slack {r3.slack:.1e}")


def _theorem_bundle(state, state_id, params, exponents, mode, budget, cache):
    """Hamming/plain/indexed reports at each exponent, sharing pairwise terms."""
    if mode == "monogamy":
        fns = (check_monogamy_hamming, check_monogamy_plain, check_monogamy_indexed)
        expname = "alpha"
    else:
        fns = (check_polygamy_hamming, check_polygamy_plain, check_polygamy_indexed)
        expname = "beta"
    out = []
    for exponent in exponents:
        kw = {expname: exponent}
        ham, plain, idx = (
            fn(state, 0, params=params, budget=budget, cache=cache,
               state_id=state_id, **kw)
            for fn in fns
        )
        out.append({"params": params, "exponent": exponent,
                    "hamming": ham, "plain": plain, "indexed": idx})
    return out


def criterion_monogamy_ensemble(seed, shared, count=200, slack_gate=-1e-7):
    param_grid = [UnifiedParams(2.0, 1.0), UnifiedParams(2.5, 1.0),
                  UnifiedParams(3.0, 0.5), UnifiedParams(2.0, 0.25)]
    alphas = (1.0, 1.5, 2.0, 3.0)
    bad = 0
    worst = math.inf
    for i in range(count):
        state = haar_random_pure(4, np.random.default_rng((seed, 6, i)))
        budget = OptBudget(seed=seed).child(6, i)
        cache = {}
        for params in param_grid:
            bundle = _theorem_bundle(state, f"haar4-{i:03d}", params, alphas,
                                     "monogamy", budget, cache)
            shared.chain_bundles.extend(bundle)
            for entry in bundle:
                rep = entry["hamming"]
                worst = min(worst, rep.slack)
                if rep.verdict != "confirmed" or rep.slack < slack_gate:
                    bad += 1
    if bad:
        return False, f"{bad} unconfirmed checks; worst slack {worst:.3g}"
    return True, f"{count * len(param_grid) * len(alphas)} checks confirmed; min slack {worst:.3g}"


def criterion_condition_gating(seed, shared):
    params = UnifiedParams(2.0, 1.0)
    budget = OptBudget(seed=seed)
    ghz = named_state("ghz", 3)
    r_ghz = check_monogamy_indexed(ghz, 0, params=params, alpha=2.0, budget=budget)
    if r_ghz.condition_met is not True or r_ghz.verdict != "confirmed":
        return False, f"GHZ gating: condition {r_ghz.condition_met}, verdict {r_ghz.verdict}"
    w4 = named_state("w", 4)
    r_w4 = check_monogamy_indexed(w4, 0, params=params, alpha=2.0, budget=budget)
    if r_w4.condition_met is not False or r_w4.verdict is not None:
        return False, f"W4 gating: condition {r_w4.condition_met}, verdict {r_w4.verdict}"
    return True, "GHZ applicable+confirmed; W4 gated not-applicable"


def criterion_polygamy_ensemble(seed, shared, count=100, example_tol=1e-3):
    param_grid = [UnifiedParams(1.5, 1.0), UnifiedParams(1.5, 0.8), UnifiedParams(2.0, 1.0)]
    betas = (0.25, 0.5, 0.75, 1.0)
    bad = 0
    worst = math.inf
    for i in range(count):
        state = haar_random_pure(3, np.random.default_rng((seed, 8, i)))
        budget = OptBudget(seed=seed).child(8, i)
        cache = {}
        for params in param_grid:
            bundle = _theorem_bundle(state, f"haar3-{i:03d}", params, betas,
                                     "polygamy", budget, cache)
            shared.chain_bundles.extend(bundle)
            for entry in bundle:
                rep = entry["hamming"]
                worst = min(worst, rep.slack)
                if rep.verdict != "confirmed":
                    bad += 1
    if bad:
        return False, f"{bad} unconfirmed checks; worst slack {worst:.3g}"
    ghz = named_state("ghz", 3)
    rep = check_polygamy_hamming(ghz, 0, params=UnifiedParams(1.0, 1.0), beta=0.5,
                                 budget=OptBudget(seed=seed))
    lhs_ref, rhs_ref = math.sqrt(math.log(2.0)), 1.5 * math.sqrt(math.log(2.0))
    if abs(rep.lhs - lhs_ref) > example_tol or abs(rep.rhs - rhs_ref) > example_tol:
        return False, f"GHZ assisted example lhs {rep.lhs!r} rhs {rep.rhs!r}"
    return True, (f"{count * len(param_grid) * len(betas)} checks confirmed; min slack "
                  f"{worst:.3g}; GHZ example errs {abs(rep.lhs - lhs_ref):.1e}/"
                  f"{abs(rep.rhs - rhs_ref):.1e}")


def criterion_tightness_chains(seed, shared, chain_tol=1e-10):
    if not shared.chain_bundles:
        return False, "no ensemble reports available (criteria 6/8 must run first)"
    checked = 0
    for entry in shared.chain_bundles:
        cert = tightness_chain(entry["hamming"], entry["plain"], entry["indexed"])
        if not cert.holds:
            return False, (f"chain violated at exponent {entry['exponent']}: "
                           f"plain {cert.rhs_plain}, hamming {cert.rhs_hamming}, "
                           f"indexed {cert.rhs_indexed}")
        checked += 1
    return True, f"{checked} chains ordered within {chain_tol:g}"


def criterion_padding_invariance(seed, shared, drift_tol=1e-9, count=20):
    params = UnifiedParams(2.0, 1.0)
    worst = 0.0
    for i in range(count):
        state = haar_random_pure(4, np.random.default_rng((seed, 10, i)))
        budget = OptBudget(seed=seed).child(10, i)
        base = check_monogamy_hamming(state, 0, (1, 2, 3), params=params,
                                      alpha=2.0, budget=budget)
        padded, parties = pad_parties(state, (1, 2, 3))
        rep = check_monogamy_hamming(padded, 0, parties, params=params,
                                     alpha=2.0, budget=budget)
        if rep.verdict != base.verdict:
            return False, f"verdict changed under padding on state {i}"
        worst = max(worst, abs(rep.slack - base.slack))
    if worst > drift_tol:
        return False, f"slack drift {worst:.3g} exceeds {drift_tol:g}"
    return True, f"{count} states; max slack drift {worst:.2g}"


def criterion_sweep_determinism(seed, shared):
    config_doc = {
        "states": [
            {"kind": "ghz", "n_qubits": 3},
            {"kind": "w", "n_qubits": 3},
            {"kind": "haar", "n_qubits": 3, "count": 2},
        ],
        "params": [[2.0, 1.0]],
        "alphas": [1.0, 2.0],
        "betas": [0.5, 1.0],
        "theorems": ["1", "3"],
        "seed": seed,
        "budget": {"seed": seed},
    }
    outputs = []
    for run in range(2):
        config = SweepConfig.from_dict(config_doc)
        reports = run_sweep(config)
        text = render_reports(reports, "csv")
        with tempfile.TemporaryDirectory() as tmp:
            path = Path(tmp) / f"run{run}.csv"
            path.write_text(text)
            outputs.append(path.read_bytes())
    if outputs[0] != outputs[1]:
        return False, "CSV outputs differ between identical runs"
    rows = outputs[0].decode().strip().splitlines()
    return True, f"byte-identical CSV ({len(rows) - 1} rows)"


CRITERIA = (
    (1, "entropy-closed-forms", criterion_entropy_closed_forms),
    (2, "limit-continuity", criterion_limit_continuity),
    (3, "lemma-fuzz", criterion_lemma_fuzz),
    (4, "roof-oracle-cross-check", criterion_roof_oracle),
    (5, "theorem1-saturation", criterion_saturation),
    (6, "theorem1-ensemble", criterion_monogamy_ensemble),
    (7, "theorem2-gating", criterion_condition_gating),
    (8, "theorem3-ensemble", criterion_polygamy_ensemble),
    (9, "tightness-chains", criterion_tightness_chains),
    (10, "padding-invariance", criterion_padding_invariance),
    (11, "sweep-determinism", criterion_sweep_determinism),
)


@dataclass
class CriterionResult:
    index: int
    name: str
    passed: bool
    seconds: float
    detail: str


def criterion_names() -> list:
    return [f"{idx}: {name}" for idx, name, _ in CRITERIA]


def run_all(seed: int = 0, indices=None) -> list:
    """Run the acceptance criteria in order; returns per-criterion results."""
    shared = _Shared()
    results = []
    for idx, name, fn in CRITERIA:
        if indices is not None and idx not in indices:
            continue
        start = time.perf_counter()
        passed, detail = fn(seed, shared)
        results.append(CriterionResult(idx, name, passed, time.perf_counter() - start, detail))
    return results
