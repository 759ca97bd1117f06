"""Command-line front end.

Subcommands:
  entropy     evaluate S_{q,s} of a spectrum or of a state file's spectrum
  measure     UE / UEoA of a state file across a cut
  check       one theorem check on one state
  sweep       batch verification from a JSON config, emitting CSV/JSON rows
  acceptance  run the acceptance criteria with per-criterion pass/fail lines
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from . import acceptance as acceptance_mod
from .entropy import UnifiedParams, unified_entropy
from .errors import UnientError, UsageError
from .inequality import report_to_dict
from .measures import OptBudget, ue_mixed, ueoa
from .qstate import (
    DensityMatrix,
    PureState,
    bipartition_of,
    hermitian_spectrum,
    load_state,
    named_state,
)
from .sweep import (
    THEOREMS,
    SweepConfig,
    inconclusive_in_region,
    run_sweep,
    write_reports,
)
from .sweep import _DISPATCH


def _add_budget_flags(parser):
    parser.add_argument("--restarts", type=int, default=32, help="optimizer restarts")
    parser.add_argument("--iters", type=int, default=2000, help="simplex iterations per restart")
    parser.add_argument("--ensemble-cap", type=int, default=None,
                        help="max decomposition size (default rank^2, at least 6)")
    parser.add_argument("--tol", type=float, default=1e-9, help="objective tolerance")
    parser.add_argument("--seed", type=int, default=0, help="optimizer seed")


def _budget_from(args) -> OptBudget:
    return OptBudget(restarts=args.restarts, iterations=args.iters,
                     ensemble_cap=args.ensemble_cap, tol=args.tol, seed=args.seed)


def _load_check_state(args):
    if args.state:
        return load_state(args.state)
    if args.named:
        kind, _, num = args.named.partition(":")
        if not num:
            raise UsageError("--named expects KIND:N, e.g. ghz:3")
        return named_state(kind, int(num))
    raise UsageError("provide --state FILE or --named KIND:N")


def _cmd_entropy(args) -> int:
    params = UnifiedParams(args.q, args.s)
    if args.state:
        state = load_state(args.state)
        rho = state.density() if isinstance(state, PureState) else state
        spectrum = hermitian_spectrum(rho)
    elif args.eigenvalues:
        spectrum = np.array(sorted(args.eigenvalues, reverse=True))
    else:
        raise UsageError("provide eigenvalues or --state FILE")
    print(format(unified_entropy(spectrum, params), ".12g"))
    return 0


def _cmd_measure(args) -> int:
    state = load_state(args.state)
    rho = state.density() if isinstance(state, PureState) else state
    side_a = [int(i) for i in args.side_a.split(",")]
    cut = bipartition_of(rho.n_qubits, side_a)
    params = UnifiedParams(args.q, args.s)
    fn = ue_mixed if args.measure == "ue" else ueoa
    res = fn(rho, cut, params, _budget_from(args))
    doc = {
        "measure": args.measure,
        "q": args.q,
        "s": args.s,
        "cut": {"side_a": list(cut.side_a), "side_b": list(cut.side_b)},
        "value": res.value,
        "mode": res.mode,
        "restarts_used": res.restarts_used,
        "converged": res.converged,
        "witness_size": len(res.witness.members),
    }
    print(json.dumps(doc, indent=2))
    return 0


def _cmd_check(args) -> int:
    state = _load_check_state(args)
    checker, mode = _DISPATCH[args.theorem]
    exponent = args.alpha if mode == "monogamy" else args.beta
    expname = "alpha" if mode == "monogamy" else "beta"
    parties = None
    if args.parties:
        parties = [int(i) for i in args.parties.split(",")]
    report = checker(state, args.focus, parties,
                     params=UnifiedParams(args.q, args.s),
                     budget=_budget_from(args),
                     exploratory=args.exploratory,
                     state_id=args.state or args.named or "",
                     **{expname: exponent})
    print(json.dumps(report_to_dict(report, include_witness=args.include_witness), indent=2))
    return 0 if report.verdict == "confirmed" else 1


def _cmd_sweep(args) -> int:
    if args.config:
        config = SweepConfig.from_file(args.config)
    else:
        config = SweepConfig()
    if args.q is not None or args.s is not None:
        if args.q is None or args.s is None:
            raise UsageError("--q and --s must be given together")
        config.params = [(args.q, args.s)]
    if args.alpha is not None:
        config.alphas = [args.alpha]
    if args.beta is not None:
        config.betas = [args.beta]
    if args.theorem is not None:
        config.theorems = [args.theorem]
    if args.seed is not None:
        config.seed = args.seed
        config.budget = OptBudget(
            restarts=config.budget.restarts, iterations=config.budget.iterations,
            ensemble_cap=config.budget.ensemble_cap, tol=config.budget.tol,
            seed=args.seed)
    if args.restarts is not None or args.iters is not None or \
            args.ensemble_cap is not None or args.tol is not None:
        config.budget = OptBudget(
            restarts=args.restarts if args.restarts is not None else config.budget.restarts,
            iterations=args.iters if args.iters is not None else config.budget.iterations,
            ensemble_cap=args.ensemble_cap if args.ensemble_cap is not None
            else config.budget.ensemble_cap,
            tol=args.tol if args.tol is not None else config.budget.tol,
            seed=config.budget.seed)
    if args.out:
        config.out_path = args.out
    if args.format:
        config.out_format = args.format
    if args.exploratory:
        config.exploratory = True
    if args.jobs is not None:
        config.jobs = args.jobs
    if args.include_witness:
        config.include_witness = True

    reports = run_sweep(config)
    text = write_reports(reports, config)
    if not config.out_path:
        sys.stdout.write(text)
    else:
        print(f"wrote {len(reports)} rows to {config.out_path}")
    return 1 if inconclusive_in_region(reports) else 0


def _cmd_acceptance(args) -> int:
    if args.list:
        for line in acceptance_mod.criterion_names():
            print(line)
        return 0
    indices = set(args.only) if args.only else None
    results = acceptance_mod.run_all(seed=args.seed, indices=indices)
    failures = 0
    for res in results:
        status = "PASS" if res.passed else "FAIL"
        print(f"[{res.index:2d}] {res.name:<24s} {status}  ({res.seconds:7.2f} s)  {res.detail}")
        failures += 0 if res.passed else 1
    print(f"{len(results) - failures}/{len(results)} criteria passed")
    return 1 if failures else 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="unient",
                                     description="unified-(q,s) entanglement toolkit")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("entropy", help="S_{q,s} of a spectrum")
    p.add_argument("eigenvalues", nargs="*", type=float)
    p.add_argument("--q", type=float, required=True)
    p.add_argument("--s", type=float, required=True)
    p.add_argument("--state", help="JSON state file instead of eigenvalues")
    p.set_defaults(func=_cmd_entropy)

    p = sub.add_parser("measure", help="UE/UEoA of a state file")
    p.add_argument("--state", required=True, help="JSON state file")
    p.add_argument("--measure", choices=("ue", "ueoa"), default="ue")
    p.add_argument("--q", type=float, required=True)
    p.add_argument("--s", type=float, required=True)
    p.add_argument("--side-a", default="0", help="comma-separated side-A qubits")
    _add_budget_flags(p)
    p.set_defaults(func=_cmd_measure)

    p = sub.add_parser("check", help="one theorem on one state")
    p.add_argument("--theorem", choices=THEOREMS, required=True)
    p.add_argument("--state", help="JSON state file")
    p.add_argument("--named", help="named state KIND:N, e.g. w:4")
    p.add_argument("--focus", type=int, default=0)
    p.add_argument("--parties", help="comma-separated party qubits (default: rest)")
    p.add_argument("--q", type=float, required=True)
    p.add_argument("--s", type=float, required=True)
    p.add_argument("--alpha", type=float, default=1.0)
    p.add_argument("--beta", type=float, default=1.0)
    p.add_argument("--exploratory", action="store_true")
    p.add_argument("--include-witness", action="store_true")
    _add_budget_flags(p)
    p.set_defaults(func=_cmd_check)

    p = sub.add_parser("sweep", help="batch verification from a JSON config")
    p.add_argument("--config", help="JSON sweep config")
    p.add_argument("--q", type=float)
    p.add_argument("--s", type=float)
    p.add_argument("--alpha", type=float)
    p.add_argument("--beta", type=float)
    p.add_argument("--theorem", choices=THEOREMS)
    p.add_argument("--seed", type=int)
    p.add_argument("--restarts", type=int)
    p.add_argument("--iters", type=int)
    p.add_argument("--ensemble-cap", type=int)
    p.add_argument("--tol", type=float)
    p.add_argument("--out", help="output path")
    p.add_argument("--format", choices=("csv", "json"))
    p.add_argument("--exploratory", action="store_true")
    p.add_argument("--include-witness", action="store_true")
    p.add_argument("--jobs", type=int, help="worker pool size (default: all cores)")
    p.set_defaults(func=_cmd_sweep)

    p = sub.add_parser("acceptance", help="run the acceptance suite")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--list", action="store_true", help="list criteria without running")
    p.add_argument("--only", type=int, nargs="*", help="criterion indices to run")
    p.set_defaults(func=_cmd_acceptance)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UnientError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
