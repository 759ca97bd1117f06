"""Ensemble generation, parameter sweeps, and report emission.

A sweep runs the requested theorem checks over a list of states and a grid
of (q, s) pairs and exponents, emitting one report row per combination.
Rows are deterministic for a fixed seed: per-state optimizer seeds derive
from the sweep seed and the state's position, never from scheduling.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, field, replace
from multiprocessing import Pool
from pathlib import Path

import numpy as np

from .entropy import UnifiedParams
from .errors import UsageError
from .inequality import (
    CSV_HEADER,
    MONOGAMY,
    POLYGAMY,
    RegionSpec,
    check_monogamy_hamming,
    check_monogamy_indexed,
    check_monogamy_plain,
    check_polygamy_hamming,
    check_polygamy_indexed,
    check_polygamy_plain,
    report_csv_row,
    report_to_dict,
)
from .measures import OptBudget
from .qstate import haar_random_pure, load_state, named_state, random_mixed

THEOREMS = ("1", "2", "3", "4", "base-mono", "base-poly")

_DISPATCH = {
    "1": (check_monogamy_hamming, MONOGAMY),
    "2": (check_monogamy_indexed, MONOGAMY),
    "base-mono": (check_monogamy_plain, MONOGAMY),
    "3": (check_polygamy_hamming, POLYGAMY),
    "4": (check_polygamy_indexed, POLYGAMY),
    "base-poly": (check_polygamy_plain, POLYGAMY),
}


def default_ensemble() -> list:
    """The stock verification ensemble used when a config lists no states."""
    specs = [{"kind": "ghz", "n_qubits": 3}, {"kind": "w", "n_qubits": 3},
             {"kind": "ghz", "n_qubits": 4}, {"kind": "w", "n_qubits": 4}]
    specs.append({"kind": "haar", "n_qubits": 3, "count": 200})
    specs.append({"kind": "haar", "n_qubits": 4, "count": 200})
    specs.append({"kind": "mixed", "n_qubits": 3, "rank": 4, "count": 50})
    return specs


@dataclass
class SweepConfig:
    states: list = field(default_factory=default_ensemble)
    focus: int = 0
    params: list = field(default_factory=lambda: [(2.0, 1.0)])
    alphas: list = field(default_factory=lambda: [1.0])
    betas: list = field(default_factory=lambda: [1.0])
    theorems: list = field(default_factory=lambda: ["1"])
    budget: OptBudget = field(default_factory=OptBudget)
    seed: int = 0
    out_path: str = ""
    out_format: str = "csv"
    exploratory: bool = False
    jobs: int = 0                 # 0 means available parallelism
    include_witness: bool = False

    @classmethod
    def from_dict(cls, doc: dict) -> "SweepConfig":
        known = {
            "states", "focus", "params", "alphas", "betas", "theorems",
            "budget", "seed", "output", "exploratory", "jobs", "include_witness",
        }
        unknown = set(doc) - known
        if unknown:
            raise UsageError(f"unknown config fields: {sorted(unknown)}")
        kwargs = {}
        for key in ("states", "focus", "alphas", "betas", "theorems",
                    "seed", "exploratory", "jobs", "include_witness"):
            if key in doc:
                kwargs[key] = doc[key]
        if "params" in doc:
            kwargs["params"] = [tuple(float(v) for v in p) for p in doc["params"]]
        if "budget" in doc:
            kwargs["budget"] = OptBudget(**doc["budget"])
        output = doc.get("output", {})
        kwargs["out_path"] = output.get("path", "")
        kwargs["out_format"] = output.get("format", "csv")
        return cls(**kwargs)

    @classmethod
    def from_file(cls, path) -> "SweepConfig":
        try:
            with open(path) as fh:
                doc = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise UsageError(f"cannot read config {path}: {exc}") from exc
        return cls.from_dict(doc)

    def validate(self) -> None:
        if not self.states:
            raise UsageError("state list is empty")
        bad = [t for t in self.theorems if t not in THEOREMS]
        if bad:
            raise UsageError(f"unknown theorems {bad}; choose from {THEOREMS}")
        if self.out_format not in ("csv", "json"):
            raise UsageError(f"format must be csv or json, got {self.out_format!r}")
        if any(a < 1.0 for a in self.alphas):
            raise UsageError("alpha exponents must be >= 1")
        if any(not 0.0 <= b <= 1.0 for b in self.betas):
            raise UsageError("beta exponents must lie in [0, 1]")
        if not self.exploratory:
            for theorem in self.theorems:
                mode = _DISPATCH[theorem][1]
                for q, s in self.params:
                    spec = RegionSpec(mode, q, s)
                    if not spec.valid():
                        raise UsageError(
                            f"(q, s) = ({q}, {s}) outside the {mode} region for "
                            f"theorem {theorem}; pass exploratory to run anyway"
                        )


def materialize_states(config: SweepConfig) -> list:
    """Resolve state specs into (state_id, state) pairs, deterministically."""
    out = []
    for spec_index, spec in enumerate(config.states):
        kind = spec.get("kind")
        if kind in ("ghz", "w", "product", "bell"):
            n = int(spec["n_qubits"])
            out.append((f"{kind}{n}", named_state(kind, n)))
        elif kind == "haar":
            n = int(spec["n_qubits"])
            count = int(spec.get("count", 1))
            base = spec.get("seed", None)
            for i in range(count):
                entropy = (config.seed, 1, spec_index, i) if base is None else (int(base), i)
                rng = np.random.default_rng(entropy)
                out.append((f"haar{n}-{i:03d}", haar_random_pure(n, rng)))
        elif kind == "mixed":
            n = int(spec["n_qubits"])
            rank = int(spec.get("rank", 2 ** n))
            count = int(spec.get("count", 1))
            base = spec.get("seed", None)
            for i in range(count):
                entropy = (config.seed, 2, spec_index, i) if base is None else (int(base), i)
                rng = np.random.default_rng(entropy)
                out.append((f"mixed{n}r{rank}-{i:03d}", random_mixed(n, rank, rng)))
        elif kind == "file":
            path = spec["path"]
            out.append((Path(path).stem, load_state(path)))
        else:
            raise UsageError(f"unknown state kind {kind!r}")
    return out


@dataclass
class _StateTask:
    index: int
    state_id: str
    state: object
    focus: int
    params: list
    alphas: list
    betas: list
    theorems: list
    budget: OptBudget
    exploratory: bool


def _state_reports(task: _StateTask) -> list:
    budget = task.budget.child(task.index)
    cache = {}
    reports = []
    for theorem in task.theorems:
        checker, mode = _DISPATCH[theorem]
        exponents = task.alphas if mode == MONOGAMY else task.betas
        expname = "alpha" if mode == MONOGAMY else "beta"
        for q, s in task.params:
            params = UnifiedParams(q, s)
            for exponent in exponents:
                reports.append(checker(
                    task.state, task.focus, None,
                    params=params, budget=budget, exploratory=task.exploratory,
                    cache=cache, state_id=task.state_id, **{expname: exponent},
                ))
    return reports


def run_sweep(config: SweepConfig) -> list:
    """Execute a sweep; returns the flat report list in configured row order."""
    config.validate()
    states = materialize_states(config)
    tasks = [
        _StateTask(i, sid, st, config.focus, config.params, config.alphas,
                   config.betas, config.theorems, config.budget, config.exploratory)
        for i, (sid, st) in enumerate(states)
    ]
    jobs = config.jobs if config.jobs > 0 else (os.cpu_count() or 1)
    if jobs > 1 and len(tasks) > 1:
        with Pool(jobs) as pool:
            chunks = pool.map(_state_reports, tasks)
    else:
        chunks = [_state_reports(t) for t in tasks]
    return [rep for chunk in chunks for rep in chunk]


def render_reports(reports, out_format: str, include_witness: bool = False) -> str:
    if out_format == "csv":
        lines = [CSV_HEADER]
        lines.extend(report_csv_row(r) for r in reports)
        return "\n".join(lines) + "\n"
    if out_format == "json":
        docs = [report_to_dict(r, include_witness=include_witness) for r in reports]
        return json.dumps(docs, indent=2) + "\n"
    raise UsageError(f"unknown output format {out_format!r}")


def write_reports(reports, config: SweepConfig) -> str:
    text = render_reports(reports, config.out_format, config.include_witness)
    if config.out_path:
        with open(config.out_path, "w") as fh:
            fh.write(text)
    return text


def inconclusive_in_region(reports) -> int:
    """Count of in-region checks that failed to confirm (drives exit status)."""
    return sum(
        1
        for r in reports
        if r.verdict == "inconclusive" and "exploratory-out-of-region" not in r.notes
    )
