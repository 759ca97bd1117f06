"""Weighted monogamy and polygamy checks on multi-qubit states.

A check compares the measure of the cut between a focus qubit A and all
parties B_0..B_{N-1} (raised to an exponent) against a weighted sum of
powered pairwise terms.  Three weightings are supported for slot j of the
descending-sorted pairwise values:

    unit      1                      (the base inequalities)
    hamming   exponent ** popcount(j)
    indexed   exponent ** j          (needs the dominance condition)

Verdicts are one-sided.  Pairwise minimization roofs overestimate and
maximization roofs underestimate their true values, so nonnegative slack
soundly confirms an inequality while negative slack is only ever reported
as inconclusive, never as a violation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Iterable, Optional, Sequence, Union

import numpy as np

from .entropy import UnifiedParams
from .errors import (
    InvalidPartitionError,
    MeasurementError,
    MismatchedReportsError,
    RegionError,
    UnientError,
)
from .hamming import hamming_weight
from .measures import OptBudget, RoofResult, ue_mixed, ue_pure, ueoa
from .qstate import Bipartition, DensityMatrix, PureState, bipartition_of, partial_trace

SLACK_ATOL = 1e-7         # slack above this (negated) confirms
CONDITION_ATOL = 1e-9     # tolerance of the dominance condition
CHAIN_ATOL = 1e-10        # tightness-chain comparisons
TERM_MATCH_ATOL = 1e-9    # chain inputs must agree this closely
NEGATIVE_TERM_ATOL = -1e-9

MONOGAMY = "monogamy"
POLYGAMY = "polygamy"

_THEOREM_LABELS = {
    (MONOGAMY, "hamming"): "1",
    (MONOGAMY, "indexed"): "2",
    (POLYGAMY, "hamming"): "3",
    (POLYGAMY, "indexed"): "4",
    (MONOGAMY, "unit"): "base-mono",
    (POLYGAMY, "unit"): "base-poly",
}

StateLike = Union[PureState, DensityMatrix]


@dataclass(frozen=True)
class RegionSpec:
    """Validity region of the base inequalities in the (q, s) plane."""

    mode: str
    q: float
    s: float

    def valid(self) -> bool:
        q, s = self.q, self.s
        if self.mode == MONOGAMY:
            return q >= 2.0 and 0.0 <= s <= 1.0 and q * s <= 3.0
        if self.mode == POLYGAMY:
            return 1.0 <= q <= 2.0 and (-q * q + 4.0 * q - 3.0) <= s <= 1.0
        raise UnientError(f"unknown mode {self.mode!r}")

    def require(self) -> None:
        if not self.valid():
            raise RegionError(
                f"(q, s) = ({self.q}, {self.s}) outside the {self.mode} region"
            )


@dataclass(frozen=True)
class RhsTerm:
    party: int       # qubit index of the party in this slot
    value: float     # pairwise measure value (pre-exponent)
    weight: float


@dataclass(frozen=True)
class InequalityReport:
    mode: str
    theorem: str
    q: float
    s: float
    exponent: float
    lhs: float                       # already raised to the exponent
    rhs: float
    slack: float                     # lhs - rhs (monogamy), rhs - lhs (polygamy)
    rhs_terms: tuple                 # RhsTerm per slot, sorted order
    permutation: tuple               # input positions in descending-value order
    condition_met: Optional[bool]    # indexed weighting only
    verdict: Optional[str]           # "confirmed" | "inconclusive" | None (n/a)
    converged: bool
    lhs_exact: bool
    exploratory: bool
    notes: tuple
    state_id: str = ""
    term_witnesses: Optional[tuple] = None   # Decomposition per slot, or None


def order_subsystems(pairwise: Sequence[float]) -> tuple:
    """Stable descending order of pairwise values; ties keep input order."""
    vals = [float(v) for v in pairwise]
    if any(not math.isfinite(v) for v in vals):
        raise MeasurementError(f"non-finite pairwise value in {vals}")
    if any(v < NEGATIVE_TERM_ATOL for v in vals):
        raise MeasurementError(f"negative pairwise value in {vals}")
    return tuple(sorted(range(len(vals)), key=lambda i: (-vals[i], i)))


def dominance_condition(values: Sequence[float], atol: float = CONDITION_ATOL) -> bool:
    """Each value must dominate the sum of all later ones (index weighting gate)."""
    values = [float(v) for v in values]
    return all(
        values[i] + atol >= sum(values[i + 1:])
        for i in range(len(values) - 1)
    )


def _slot_weight(weighting: str, slot: int, exponent: float) -> float:
    if weighting == "unit":
        return 1.0
    if weighting == "hamming":
        return exponent ** hamming_weight(slot)
    if weighting == "indexed":
        return exponent ** slot
    raise UnientError(f"unknown weighting {weighting!r}")


def _term_power(value: float, exponent: float) -> float:
    # x^0 follows the limit convention: 1 for x > 0, 0 at x = 0.
    if exponent == 0.0:
        return 1.0 if value > 0.0 else 0.0
    return max(value, 0.0) ** exponent


def _as_density(state: StateLike) -> DensityMatrix:
    return state.density() if isinstance(state, PureState) else state


def _validate_scope(state: StateLike, focus: int, parties: Sequence[int]) -> tuple:
    n = state.n_qubits
    parties = tuple(int(b) for b in parties)
    if not parties:
        raise InvalidPartitionError("at least one party is required")
    scope = [int(focus), *parties]
    if len(set(scope)) != len(scope):
        raise InvalidPartitionError(f"focus/parties overlap: {focus}, {parties}")
    if any(i < 0 or i >= n for i in scope):
        raise InvalidPartitionError(f"qubit indices out of range for n={n}")
    return parties


def _pair_marginal(state: StateLike, focus: int, party: int, cache: dict) -> DensityMatrix:
    key = ("marginal", party)
    if key not in cache:
        cache[key] = partial_trace(_as_density(state), {focus, party})
    return cache[key]


def _pairwise_term(state, focus, party, params, budget, roof_mode, cache) -> RoofResult:
    key = ("pair", party, params.q, params.s, roof_mode)
    if key not in cache:
        rho = _pair_marginal(state, focus, party, cache)
        pos = sorted((focus, party)).index(focus)
        cut = Bipartition((pos,), (1 - pos,))
        fn = ue_mixed if roof_mode == "min" else ueoa
        cache[key] = fn(rho, cut, params,
                        budget.child(2, party, 0 if roof_mode == "min" else 1))
    return cache[key]


def _lhs_measure(state, focus, parties, params, budget, roof_mode, cache):
    """Raw (unexponentiated) measure of the cut A | B_0..B_{N-1}.

    Returns (value, exact, converged).  Exact for globally pure scope, else a
    one-sided roof value.
    """
    key = ("lhs", params.q, params.s, roof_mode)
    if key in cache:
        return cache[key]
    n = state.n_qubits
    scope = sorted({focus, *parties})
    if isinstance(state, PureState) and len(scope) == n:
        out = (ue_pure(state, bipartition_of(n, [focus]), params), True, True)
    else:
        rho = _as_density(state)
        if len(scope) < n:
            rho = partial_trace(rho, scope)
        pos = scope.index(focus)
        cut = bipartition_of(len(scope), [pos])
        fn = ue_mixed if roof_mode == "min" else ueoa
        res = fn(rho, cut, params, budget.child(3, 0 if roof_mode == "min" else 1))
        forced_pure = len(res.witness.members) == 1 and res.restarts_used == 0
        out = (res.value, forced_pure, res.converged)
    cache[key] = out
    return out


def _run_check(state, focus, parties, params, exponent, mode, weighting,
               budget, exploratory, cache, state_id) -> InequalityReport:
    parties = _validate_scope(state, focus, parties)
    if mode == MONOGAMY:
        if exponent < 1.0:
            raise UnientError(f"monogamy checks need exponent >= 1, got {exponent}")
        roof_mode = "min"
    else:
        if not 0.0 <= exponent <= 1.0:
            raise UnientError(f"polygamy checks need exponent in [0, 1], got {exponent}")
        roof_mode = "max"

    region = RegionSpec(mode, params.q, params.s)
    in_region = region.valid()
    if not in_region and not exploratory:
        region.require()

    if cache is None:
        cache = {}
    notes = []
    if exploratory and not in_region:
        notes.append("exploratory-out-of-region")

    results = [
        _pairwise_term(state, focus, party, params, budget, roof_mode, cache)
        for party in parties
    ]
    values = [r.value for r in results]
    perm = order_subsystems(values)
    sorted_parties = tuple(parties[i] for i in perm)
    sorted_values = tuple(values[i] for i in perm)
    sorted_results = tuple(results[i] for i in perm)

    lhs_raw, lhs_exact, lhs_conv = _lhs_measure(
        state, focus, parties, params, budget, roof_mode, cache
    )
    if not lhs_exact:
        notes.append("upper-bound-lhs" if mode == MONOGAMY else "lower-bound-lhs")

    lhs = _term_power(lhs_raw, exponent)
    terms = tuple(
        RhsTerm(party, value, _slot_weight(weighting, slot, exponent))
        for slot, (party, value) in enumerate(zip(sorted_parties, sorted_values))
    )
    rhs = float(sum(t.weight * _term_power(t.value, exponent) for t in terms))
    slack = lhs - rhs if mode == MONOGAMY else rhs - lhs

    condition_met = None
    if weighting == "indexed":
        condition_met = dominance_condition(sorted_values)

    converged = lhs_conv and all(r.converged for r in results)
    if exponent == 0.0:
        notes.append("beta-zero-term-convention")
    if any(r.at_ensemble_cap for r in sorted_results):
        notes.append("roof-at-ensemble-cap")
    if not converged:
        notes.append("optimizer-not-converged")

    if weighting == "indexed" and not condition_met:
        verdict = None
        notes.append("not-applicable")
    elif not in_region:
        verdict = "inconclusive"
    elif not converged:
        verdict = "inconclusive"
    elif slack >= -SLACK_ATOL:
        verdict = "confirmed"
    else:
        verdict = "inconclusive"

    return InequalityReport(
        mode=mode,
        theorem=_THEOREM_LABELS[(mode, weighting)],
        q=params.q,
        s=params.s,
        exponent=float(exponent),
        lhs=lhs,
        rhs=rhs,
        slack=slack,
        rhs_terms=terms,
        permutation=perm,
        condition_met=condition_met,
        verdict=verdict,
        converged=converged,
        lhs_exact=lhs_exact,
        exploratory=bool(exploratory),
        notes=tuple(notes),
        state_id=state_id,
        term_witnesses=tuple(r.witness for r in sorted_results),
    )


def _default_parties(state: StateLike, focus: int, parties) -> Sequence[int]:
    if parties is not None:
        return parties
    return [i for i in range(state.n_qubits) if i != focus]


def check_monogamy_hamming(state: StateLike, focus: int, parties=None, *,
                           params: UnifiedParams, alpha: float = 1.0,
                           budget: Optional[OptBudget] = None,
                           exploratory: bool = False, cache: dict = None,
                           state_id: str = "") -> InequalityReport:
    """Hamming-weighted monogamy check (weights alpha^popcount(slot))."""
    return _run_check(state, focus, _default_parties(state, focus, parties), params,
                      alpha, MONOGAMY, "hamming", budget or OptBudget(), exploratory,
                      cache, state_id)


def check_monogamy_indexed(state: StateLike, focus: int, parties=None, *,
                           params: UnifiedParams, alpha: float = 1.0,
                           budget: Optional[OptBudget] = None,
                           exploratory: bool = False, cache: dict = None,
                           state_id: str = "") -> InequalityReport:
    """Index-weighted monogamy check (weights alpha^slot, dominance-gated)."""
    return _run_check(state, focus, _default_parties(state, focus, parties), params,
                      alpha, MONOGAMY, "indexed", budget or OptBudget(), exploratory,
                      cache, state_id)


def check_monogamy_plain(state: StateLike, focus: int, parties=None, *,
                         params: UnifiedParams, alpha: float = 1.0,
                         budget: Optional[OptBudget] = None,
                         exploratory: bool = False, cache: dict = None,
                         state_id: str = "") -> InequalityReport:
    """Unweighted monogamy check; alpha = 1 is the base inequality."""
    return _run_check(state, focus, _default_parties(state, focus, parties), params,
                      alpha, MONOGAMY, "unit", budget or OptBudget(), exploratory,
                      cache, state_id)


def check_polygamy_hamming(state: StateLike, focus: int, parties=None, *,
                           params: UnifiedParams, beta: float = 1.0,
                           budget: Optional[OptBudget] = None,
                           exploratory: bool = False, cache: dict = None,
                           state_id: str = "") -> InequalityReport:
    """Hamming-weighted polygamy check (weights beta^popcount(slot))."""
    return _run_check(state, focus, _default_parties(state, focus, parties), params,
                      beta, POLYGAMY, "hamming", budget or OptBudget(), exploratory,
                      cache, state_id)


def check_polygamy_indexed(state: StateLike, focus: int, parties=None, *,
                           params: UnifiedParams, beta: float = 1.0,
                           budget: Optional[OptBudget] = None,
                           exploratory: bool = False, cache: dict = None,
                           state_id: str = "") -> InequalityReport:
    """Index-weighted polygamy check (weights beta^slot, dominance-gated)."""
    return _run_check(state, focus, _default_parties(state, focus, parties), params,
                      beta, POLYGAMY, "indexed", budget or OptBudget(), exploratory,
                      cache, state_id)


def check_polygamy_plain(state: StateLike, focus: int, parties=None, *,
                         params: UnifiedParams, beta: float = 1.0,
                         budget: Optional[OptBudget] = None,
                         exploratory: bool = False, cache: dict = None,
                         state_id: str = "") -> InequalityReport:
    """Unweighted polygamy check; beta = 1 is the base inequality."""
    return _run_check(state, focus, _default_parties(state, focus, parties), params,
                      beta, POLYGAMY, "unit", budget or OptBudget(), exploratory,
                      cache, state_id)


@dataclass(frozen=True)
class ChainCertificate:
    """Ordering certificate for the three RHS variants on identical terms."""

    mode: str
    exponent: float
    rhs_plain: float
    rhs_hamming: float
    rhs_indexed: Optional[float]
    holds: bool


def tightness_chain(report_hamming: InequalityReport,
                    report_plain: InequalityReport,
                    report_indexed: Optional[InequalityReport] = None) -> ChainCertificate:
    """Certify rhs_indexed >= rhs_hamming >= rhs_plain (monogamy; reversed
    for polygamy) on reports computed from identical terms."""
    reports = [report_hamming, report_plain] + (
        [report_indexed] if report_indexed is not None else []
    )
    head = report_hamming
    for rep in reports[1:]:
        if (rep.mode, rep.q, rep.s, rep.exponent, rep.permutation, rep.state_id) != (
            head.mode, head.q, head.s, head.exponent, head.permutation, head.state_id
        ):
            raise MismatchedReportsError("chain reports differ in state or parameters")
        for t1, t2 in zip(rep.rhs_terms, head.rhs_terms):
            if t1.party != t2.party or abs(t1.value - t2.value) > TERM_MATCH_ATOL:
                raise MismatchedReportsError("chain reports differ in pairwise terms")

    rhs_indexed = report_indexed.rhs if report_indexed is not None else None
    if head.mode == MONOGAMY:
        holds = report_hamming.rhs >= report_plain.rhs - CHAIN_ATOL
        if rhs_indexed is not None:
            holds = holds and rhs_indexed >= report_hamming.rhs - CHAIN_ATOL
    else:
        holds = report_hamming.rhs <= report_plain.rhs + CHAIN_ATOL
        if rhs_indexed is not None:
            holds = holds and rhs_indexed <= report_hamming.rhs + CHAIN_ATOL
    return ChainCertificate(head.mode, head.exponent, report_plain.rhs,
                            report_hamming.rhs, rhs_indexed, holds)


def pad_parties(state: StateLike, parties: Sequence[int], target: Optional[int] = None):
    """Append |0> parties so the party count reaches the next power of two.

    Returns (padded_state, padded_parties).  Appended parties sit at the end
    of the register, carry zero pairwise measure, and leave the full-cut
    measure unchanged.
    """
    parties = tuple(int(b) for b in parties)
    n_parties = len(parties)
    if target is None:
        target = 1 << max(n_parties - 1, 0).bit_length()
    if target < n_parties:
        raise InvalidPartitionError(f"target {target} below party count {n_parties}")
    if target & (target - 1):
        raise InvalidPartitionError(f"target {target} is not a power of two")
    extra = target - n_parties
    if extra == 0:
        return state, parties
    n = state.n_qubits
    new_parties = parties + tuple(range(n, n + extra))
    zero_block = np.zeros(2 ** extra)
    zero_block[0] = 1.0
    if isinstance(state, PureState):
        padded = PureState(n + extra, np.kron(state.amplitudes, zero_block))
    else:
        padded = DensityMatrix(n + extra, np.kron(state.entries, np.outer(zero_block, zero_block)))
    return padded, new_parties


# ---------------------------------------------------------------------------
# report serialization

CSV_HEADER = "state_id,mode,theorem,q,s,exponent,lhs,rhs,slack,verdict,condition_met,permutation"


def _fmt(x: float) -> str:
    return format(float(x), ".12g")


def report_csv_row(report: InequalityReport) -> str:
    verdict = report.verdict if report.verdict is not None else "not-applicable"
    condition = "" if report.condition_met is None else str(report.condition_met).lower()
    permutation = "-".join(str(i) for i in report.permutation)
    fields = [
        report.state_id,
        report.mode,
        report.theorem,
        _fmt(report.q),
        _fmt(report.s),
        _fmt(report.exponent),
        _fmt(report.lhs),
        _fmt(report.rhs),
        _fmt(report.slack),
        verdict,
        condition,
        permutation,
    ]
    return ",".join(fields)


def report_to_dict(report: InequalityReport, include_witness: bool = False) -> dict:
    doc = {
        "state_id": report.state_id,
        "mode": report.mode,
        "theorem": report.theorem,
        "q": report.q,
        "s": report.s,
        "exponent": report.exponent,
        "lhs": report.lhs,
        "rhs": report.rhs,
        "slack": report.slack,
        "verdict": report.verdict if report.verdict is not None else "not-applicable",
        "condition_met": report.condition_met,
        "permutation": list(report.permutation),
        "rhs_terms": [
            {"party": t.party, "value": t.value, "weight": t.weight}
            for t in report.rhs_terms
        ],
        "converged": report.converged,
        "lhs_exact": report.lhs_exact,
        "exploratory": report.exploratory,
        "notes": list(report.notes),
    }
    if include_witness and report.term_witnesses is not None:
        doc["witnesses"] = [
            [
                {
                    "probability": p,
                    "amplitudes": [[z.real, z.imag] for z in psi.amplitudes],
                }
                for p, psi in witness.members
            ]
            for witness in report.term_witnesses
        ]
    return doc
