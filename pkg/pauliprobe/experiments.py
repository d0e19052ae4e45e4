"""
Seeded, reproducible tester and learner experiments.

Trial i of an experiment with base seed s uses seed s + i for both its
instance and its oracle (on separate streams), so a record depends only on
the configuration. Rows are emitted in trial order whatever the pool size.
"""
import csv
import io
import json
import logging
import os
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field, fields
from typing import Dict, List, Optional

import numpy as np

from . import settings as pauliprobe_settings
from .enums import Decision, ExperimentKind, InstanceLabel, PlanMode, VerifyLevel
from .exceptions import InvalidExperimentConfig
from .generators import DEFAULT_DENSITY, planted_instance, random_k_local
from .learner import (
    LearnerPlan,
    learn,
    measured_error_terms,
    practical_parameters,
    theory_parameters,
)
from .oracles import EvolutionOracle
from .signals import experiment_finished, trial_finished
from .tester import TesterPlan, compute_plan, test_locality
from .utils import derive_seed, format_float, wilson_interval

logger = logging.getLogger(__name__)

TESTER_COLUMNS = (
    "trial",
    "seed",
    "label",
    "exact_tail",
    "decision",
    "estimated_tail_mass",
    "correct",
    "queries",
    "evolution_time",
)
LEARNER_COLUMNS = (
    "trial",
    "seed",
    "support_size",
    "distance",
    "sup_distance",
    "term_I",
    "term_II",
    "measured_I",
    "measured_II",
    "success",
    "queries",
    "evolution_time",
)
VERIFY_COLUMNS = ("check", "measured", "threshold", "passed")

CSV_COLUMNS = {
    ExperimentKind.tester: TESTER_COLUMNS,
    ExperimentKind.learner: LEARNER_COLUMNS,
    ExperimentKind.verify: VERIFY_COLUMNS,
}
SUCCESS_COLUMN = {
    ExperimentKind.tester: "correct",
    ExperimentKind.learner: "success",
    ExperimentKind.verify: "passed",
}


@dataclass
class ExperimentConfig:
    kind: str = ExperimentKind.tester
    n: int = 4
    k: int = 1
    eps1: float = 0.0
    eps2: float = 0.3
    eps: float = 0.2
    delta: float = 0.1
    density: float = DEFAULT_DENSITY
    mode: str = PlanMode.practical
    alpha: Optional[float] = None
    gamma: Optional[float] = None
    beta: Optional[float] = None
    m1: Optional[int] = None
    m: Optional[int] = None
    c: Optional[float] = None
    C: Optional[float] = None
    tolerance: Optional[float] = None
    trials: int = 10
    seed: int = 0
    level: str = VerifyLevel.quick
    out: Optional[str] = None
    threads: Optional[int] = None
    save: bool = False
    gnuplot_stub: bool = False

    @classmethod
    def field_names(cls):
        return [f.name for f in fields(cls)]

    @classmethod
    def from_dict(cls, data: dict) -> "ExperimentConfig":
        unknown = sorted(set(data) - set(cls.field_names()))
        if unknown:
            raise InvalidExperimentConfig(
                "Unknown configuration keys: {}.".format(", ".join(unknown))
            )
        return cls(**data)

    @classmethod
    def from_json(cls, path: str, **overrides) -> "ExperimentConfig":
        """Load a JSON config file; non-None ``overrides`` win over its values."""
        try:
            with open(path) as f:
                data = json.load(f)
        except (OSError, ValueError) as e:
            raise InvalidExperimentConfig(
                "Could not read config file {path}: {error}".format(path=path, error=e)
            ) from e
        if not isinstance(data, dict):
            raise InvalidExperimentConfig("Config file must hold a JSON object.")
        data.update(
            {key: value for key, value in overrides.items() if value is not None}
        )
        return cls.from_dict(data)

    def validate(self) -> "ExperimentConfig":
        """Check every range before any work starts."""
        try:
            self._check_ranges()
        except TypeError as e:
            raise InvalidExperimentConfig("Invalid configuration: {}".format(e)) from e
        return self

    def _check_ranges(self):
        errors = []

        def need(condition, message):
            if not condition:
                errors.append(message)

        need(
            self.kind in ExperimentKind.values(),
            "kind must be tester, learner or verify",
        )
        need(self.mode in PlanMode.values(), "mode must be theory or practical")
        need(self.level in VerifyLevel.values(), "level must be quick or full")
        need(_is_int(self.trials) and self.trials >= 1, "trials must be at least 1")
        need(
            _is_int(self.seed) and self.seed >= 0,
            "seed must be a non-negative integer",
        )
        if self.threads is not None:
            need(
                _is_int(self.threads) and self.threads >= 1,
                "threads must be at least 1",
            )

        if self.kind != ExperimentKind.verify:
            cap = pauliprobe_settings.get_qubit_cap()
            need(
                _is_int(self.n) and 1 <= self.n <= cap,
                "n must lie in [1, {cap}]".format(cap=cap),
            )
            need(
                _is_int(self.k) and 1 <= self.k <= max(self.n, 1),
                "k must lie in [1, n]",
            )
            need(0 < self.delta < 1, "delta must lie in (0, 1)")
            need(0 < self.density <= 1, "density must lie in (0, 1]")
        if self.kind == ExperimentKind.tester:
            need(0 <= self.eps1 < self.eps2 <= 1, "need 0 <= eps1 < eps2 <= 1")
            need(
                not (_is_int(self.k) and _is_int(self.n)) or self.k < self.n,
                "tester experiments need k < n so that Far instances exist",
            )
            if self.m is not None:
                need(_is_int(self.m) and self.m >= 1, "m must be at least 1")
                need(
                    self.mode == PlanMode.practical,
                    "m override needs --mode practical",
                )
        if self.kind == ExperimentKind.learner:
            need(0 < self.eps < 1, "eps must lie in (0, 1)")
            if self.m1 is not None:
                need(_is_int(self.m1) and self.m1 >= 1, "m1 must be at least 1")
            if self.tolerance is not None:
                need(self.tolerance > 0, "tolerance must be positive")
            if self.mode == PlanMode.theory:
                need(
                    all(
                        v is None
                        for v in (self.alpha, self.gamma, self.beta, self.m1)
                    ),
                    "alpha/gamma/beta/m1 overrides need --mode practical",
                )

        if errors:
            raise InvalidExperimentConfig(
                "Invalid configuration: " + "; ".join(errors) + "."
            )

    def build_plan(self):
        """The tester or learner plan; raises InfeasiblePlan."""
        if self.kind == ExperimentKind.tester:
            return compute_plan(
                self.eps1, self.eps2, self.delta, self.k, c=self.c, m=self.m
            )
        if self.kind == ExperimentKind.learner:
            if self.mode == PlanMode.theory:
                return theory_parameters(
                    self.k, self.eps, self.delta, C=self.C, c=self.c
                )
            return practical_parameters(
                self.k,
                self.eps,
                self.delta,
                alpha=self.alpha,
                gamma=self.gamma,
                beta=self.beta,
                m1=self.m1,
                C=self.C,
                c=self.c,
            )
        return None

    @property
    def success_tolerance(self) -> float:
        return self.eps if self.tolerance is None else self.tolerance

    def to_json_dict(self) -> dict:
        return asdict(self)


def _is_int(value) -> bool:
    return isinstance(value, (int, np.integer)) and not isinstance(value, bool)


@dataclass
class ExperimentRecord:
    config: ExperimentConfig
    rows: List[Dict] = field(default_factory=list)
    plan: Optional[dict] = None
    duration_seconds: float = 0.0

    @property
    def kind(self) -> str:
        return self.config.kind

    @property
    def columns(self):
        return CSV_COLUMNS[self.kind]

    @property
    def successes(self) -> int:
        column = SUCCESS_COLUMN[self.kind]
        return sum(1 for row in self.rows if row[column])

    @property
    def aggregates(self) -> dict:
        """Recomputed from the rows every time."""
        count = len(self.rows)
        successes = self.successes
        low, high = wilson_interval(successes, count)
        aggregates = {
            "trials": count,
            "successes": successes,
            "success_rate": successes / count if count else None,
            "wilson_low": low,
            "wilson_high": high,
        }
        if self.kind != ExperimentKind.verify and count:
            aggregates["mean_queries"] = float(
                np.mean([r["queries"] for r in self.rows])
            )
            aggregates["mean_evolution_time"] = float(
                np.mean([r["evolution_time"] for r in self.rows])
            )
        if self.kind == ExperimentKind.learner and count:
            aggregates["mean_distance"] = float(
                np.mean([r["distance"] for r in self.rows])
            )
        return aggregates

    def to_csv(self) -> str:
        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator="\n")
        writer.writerow(self.columns)
        for row in self.rows:
            writer.writerow([_csv_cell(row[column]) for column in self.columns])
        return buffer.getvalue()

    def to_gnuplot(self) -> str:
        """Whitespace-separated numeric columns with a commented header."""
        numeric = [
            column
            for column in self.columns
            if all(not isinstance(row[column], str) for row in self.rows)
        ]
        lines = ["# " + " ".join(numeric)]
        for row in self.rows:
            lines.append(" ".join(_csv_cell(row[column]) for column in numeric))
        return "\n".join(lines) + "\n"

    def to_json_dict(self) -> dict:
        return {
            "kind": self.kind,
            "config": self.config.to_json_dict(),
            "plan": self.plan,
            "columns": list(self.columns),
            "rows": self.rows,
            "aggregates": self.aggregates,
            "duration_seconds": self.duration_seconds,
        }

    def write(self, directory: str) -> Dict[str, str]:
        """Write ``<kind>.json`` and ``<kind>.csv`` (and ``<kind>.dat``)."""
        os.makedirs(directory, exist_ok=True)
        paths = {
            "json": os.path.join(directory, "{}.json".format(self.kind)),
            "csv": os.path.join(directory, "{}.csv".format(self.kind)),
        }
        with open(paths["json"], "w") as f:
            json.dump(self.to_json_dict(), f, indent=2, sort_keys=True)
            f.write("\n")
        with open(paths["csv"], "w", newline="") as f:
            f.write(self.to_csv())
        if self.config.gnuplot_stub:
            paths["dat"] = os.path.join(directory, "{}.dat".format(self.kind))
            with open(paths["dat"], "w") as f:
                f.write(self.to_gnuplot())
        return paths

    def save(self):
        """Store the record as an ExperimentRun with one TrialOutcome per row."""
        from .models import ExperimentRun, TrialOutcome

        success_column = SUCCESS_COLUMN[self.kind]
        run = ExperimentRun.objects.create(
            kind=self.kind,
            seed=self.config.seed,
            trials=len(self.rows),
            config=self.config.to_json_dict(),
            aggregates=self.aggregates,
            record=self.to_json_dict(),
            csv_columns=list(self.columns),
            duration_seconds=self.duration_seconds,
        )
        TrialOutcome.objects.bulk_create(
            [
                TrialOutcome(
                    run=run,
                    index=index,
                    seed=row.get("seed", self.config.seed),
                    success=bool(row[success_column]),
                    row=row,
                )
                for index, row in enumerate(self.rows)
            ]
        )
        return run


def _csv_cell(value) -> str:
    if isinstance(value, str):
        return value
    return format_float(value)


def run_tester_trial(config: ExperimentConfig, plan: TesterPlan, index: int) -> dict:
    """Trial i plants a Close instance for even i and a Far one for odd i."""
    seed = derive_seed(config.seed, index)
    label = InstanceLabel.close if index % 2 == 0 else InstanceLabel.far
    instance = planted_instance(
        config.n,
        config.k,
        config.eps1,
        config.eps2,
        label,
        seed,
        density=config.density,
    )
    oracle = EvolutionOracle(instance.hamiltonian, seed=seed)
    verdict = test_locality(oracle, plan)
    if label == InstanceLabel.close:
        expected = Decision.close_to_local
    else:
        expected = Decision.far_from_local
    return {
        "trial": index,
        "seed": seed,
        "label": label,
        "exact_tail": instance.exact_tail,
        "decision": verdict.decision,
        "estimated_tail_mass": verdict.estimated_tail_mass,
        "correct": verdict.decision == expected,
        "queries": verdict.ledger.query_count,
        "evolution_time": verdict.ledger.total_evolution_time,
    }


def run_learner_trial(config: ExperimentConfig, plan: LearnerPlan, index: int) -> dict:
    seed = derive_seed(config.seed, index)
    hamiltonian = random_k_local(config.n, config.k, config.density, seed)
    oracle = EvolutionOracle(hamiltonian, seed=seed)
    learned = learn(oracle, plan, threads=1)
    distance = learned.distance(hamiltonian)
    budget = learned.error_budget()
    measured = measured_error_terms(learned, hamiltonian)
    return {
        "trial": index,
        "seed": seed,
        "support_size": len(learned.detection.support),
        "distance": distance,
        "sup_distance": learned.sup_distance(hamiltonian),
        "term_I": budget["term_I"],
        "term_II": budget["term_II"],
        "measured_I": measured["measured_I"],
        "measured_II": measured["measured_II"],
        "success": distance <= config.success_tolerance,
        "queries": learned.ledger.query_count,
        "evolution_time": learned.ledger.total_evolution_time,
    }


def _verify_rows(config: ExperimentConfig) -> List[dict]:
    from .verification import verify_suite

    report = verify_suite(config.level, seed=config.seed)
    return [check.to_row() for check in report.checks]


def run_experiment(config: ExperimentConfig, write: bool = True) -> ExperimentRecord:
    """
    Run ``config.trials`` trials on a bounded worker pool and assemble the
    record. Writes JSON and CSV to ``config.out`` (or PAULIPROBE_OUTPUT_DIR)
    when ``write`` is set, and stores the record in the database when
    ``config.save`` or PAULIPROBE_PERSIST_RECORDS is set.
    """
    config.validate()
    plan = config.build_plan()
    callback = pauliprobe_settings.get_callback_function("PAULIPROBE_TRIAL_CALLBACK")
    started = time.monotonic()
    logger.info(
        "Starting %s experiment: %d trials, seed %d",
        config.kind,
        config.trials,
        config.seed,
    )

    pool = None
    if config.kind == ExperimentKind.verify:
        results = iter(_verify_rows(config))
    else:
        if config.kind == ExperimentKind.tester:
            trial = run_tester_trial
        else:
            trial = run_learner_trial
        threads = config.threads or pauliprobe_settings.get_thread_count()
        threads = min(threads, config.trials)
        if threads > 1:
            pool = ThreadPoolExecutor(max_workers=threads)
            results = pool.map(lambda i: trial(config, plan, i), range(config.trials))
        else:
            results = (trial(config, plan, i) for i in range(config.trials))

    record = ExperimentRecord(
        config=config, plan=plan.to_json_dict() if plan is not None else None
    )
    try:
        for index, row in enumerate(results):
            record.rows.append(row)
            trial_finished.send(
                sender=ExperimentRecord, row=row, kind=config.kind, index=index
            )
            if callback:
                callback(row)
    finally:
        if pool is not None:
            pool.shutdown(wait=True)

    record.duration_seconds = time.monotonic() - started
    if write:
        record.write(config.out or pauliprobe_settings.get_output_dir())
    if config.save or pauliprobe_settings.get_persist_records():
        record.save()
    logger.info(
        "Finished %s experiment in %.1fs: %d/%d successful",
        config.kind,
        record.duration_seconds,
        record.successes,
        len(record.rows),
    )
    experiment_finished.send(sender=ExperimentRecord, record=record)
    return record
