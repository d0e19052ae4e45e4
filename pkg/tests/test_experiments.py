"""
pauli-probe experiment runner tests.
"""
import json
import os
from unittest.mock import Mock

from django.test import TestCase
from django.test.utils import override_settings

from pauliprobe.enums import ExperimentKind, InstanceLabel, PlanMode
from pauliprobe.exceptions import InfeasiblePlan, InvalidExperimentConfig
from pauliprobe.experiments import (
    LEARNER_COLUMNS,
    TESTER_COLUMNS,
    ExperimentConfig,
    ExperimentRecord,
    run_experiment,
)
from pauliprobe.models import ExperimentRun
from pauliprobe.signals import experiment_finished, trial_finished

from . import SEED, TemporaryDirectoryMixin


def make_tester_config(**kwargs):
    options = dict(
        kind=ExperimentKind.tester,
        n=2,
        k=1,
        eps1=0.0,
        eps2=0.3,
        delta=1 / 3,
        m=200_000,
        trials=4,
        seed=SEED,
        threads=1,
    )
    options.update(kwargs)
    return ExperimentConfig(**options)


def make_learner_config(**kwargs):
    options = dict(
        kind=ExperimentKind.learner,
        n=2,
        k=1,
        eps=0.2,
        delta=0.1,
        alpha=0.2,
        gamma=0.005,
        beta=0.005,
        m1=200_000,
        C=2.0,
        tolerance=0.15,
        trials=2,
        seed=SEED,
        threads=1,
    )
    options.update(kwargs)
    return ExperimentConfig(**options)


class TestExperimentConfig(TemporaryDirectoryMixin, TestCase):
    def test_defaults_are_valid(self):
        config = ExperimentConfig().validate()
        self.assertEqual(config.kind, ExperimentKind.tester)
        self.assertEqual(config.mode, PlanMode.practical)

    def test_zero_trials(self):
        with self.assertRaisesMessage(InvalidExperimentConfig, "trials"):
            make_tester_config(trials=0).validate()

    def test_collects_every_error(self):
        config = make_tester_config(trials=0, seed=-1, delta=2.0)
        with self.assertRaises(InvalidExperimentConfig) as cm:
            config.validate()
        message = str(cm.exception)
        self.assertIn("trials", message)
        self.assertIn("seed", message)
        self.assertIn("delta", message)

    def test_wrong_types(self):
        with self.assertRaises(InvalidExperimentConfig):
            make_tester_config(delta="small").validate()

    def test_tester_needs_heavy_strings(self):
        with self.assertRaises(InvalidExperimentConfig):
            make_tester_config(n=2, k=2).validate()

    @override_settings(PAULIPROBE_QUBIT_CAP=3)
    def test_qubit_cap(self):
        with self.assertRaisesMessage(InvalidExperimentConfig, "[1, 3]"):
            make_tester_config(n=4).validate()

    def test_theory_mode_rejects_overrides(self):
        with self.assertRaises(InvalidExperimentConfig):
            make_learner_config(mode=PlanMode.theory).validate()
        with self.assertRaisesMessage(InvalidExperimentConfig, "m override"):
            make_tester_config(mode=PlanMode.theory).validate()
        make_tester_config(mode=PlanMode.theory, m=None).validate()

    def test_verify_skips_instance_checks(self):
        ExperimentConfig(kind=ExperimentKind.verify, n=100).validate()

    def test_unknown_keys(self):
        with self.assertRaisesMessage(InvalidExperimentConfig, "colour"):
            ExperimentConfig.from_dict({"n": 3, "colour": "blue"})

    def test_from_json(self):
        path = os.path.join(self.tmpdir, "config.json")
        with open(path, "w") as f:
            json.dump({"kind": "learner", "n": 3, "trials": 5}, f)
        config = ExperimentConfig.from_json(path, trials=7, seed=None)
        self.assertEqual(config.kind, ExperimentKind.learner)
        self.assertEqual(config.n, 3)
        self.assertEqual(config.trials, 7)
        self.assertEqual(config.seed, 0)

    def test_from_json_errors(self):
        with self.assertRaises(InvalidExperimentConfig):
            ExperimentConfig.from_json(os.path.join(self.tmpdir, "missing.json"))
        path = os.path.join(self.tmpdir, "list.json")
        with open(path, "w") as f:
            f.write("[1, 2]")
        with self.assertRaises(InvalidExperimentConfig):
            ExperimentConfig.from_json(path)

    def test_build_plan(self):
        plan = make_tester_config().build_plan()
        self.assertEqual(plan.m_samples, 200_000)
        theory = make_tester_config(mode=PlanMode.theory, m=None).build_plan()
        self.assertEqual(theory.m_samples, theory.theory_samples)
        learner_plan = make_learner_config().build_plan()
        self.assertEqual(learner_plan.gamma, 0.005)
        self.assertIsNone(ExperimentConfig(kind=ExperimentKind.verify).build_plan())

    def test_infeasible_plan(self):
        with self.assertRaises(InfeasiblePlan):
            make_tester_config(eps2=1.0, c=0.5).build_plan()

    def test_success_tolerance(self):
        self.assertEqual(make_learner_config().success_tolerance, 0.15)
        self.assertEqual(make_learner_config(tolerance=None).success_tolerance, 0.2)


class TestTesterExperiment(TemporaryDirectoryMixin, TestCase):
    def test_rows(self):
        record = run_experiment(make_tester_config(out=self.tmpdir))
        self.assertEqual(record.columns, TESTER_COLUMNS)
        self.assertEqual(len(record.rows), 4)
        self.assertEqual(
            [row["label"] for row in record.rows],
            [InstanceLabel.close, InstanceLabel.far] * 2,
        )
        self.assertEqual(
            [row["seed"] for row in record.rows], [SEED + i for i in range(4)]
        )
        for row in record.rows:
            self.assertTrue(row["correct"])
            self.assertEqual(row["queries"], 200_000)
        aggregates = record.aggregates
        self.assertEqual(aggregates["successes"], 4)
        self.assertEqual(aggregates["success_rate"], 1.0)
        self.assertLess(aggregates["wilson_low"], 1.0)
        self.assertEqual(aggregates["mean_queries"], 200_000)

    def test_files(self):
        record = run_experiment(make_tester_config(out=self.tmpdir, gnuplot_stub=True))
        with open(os.path.join(self.tmpdir, "tester.csv")) as f:
            csv_text = f.read()
        self.assertEqual(csv_text, record.to_csv())
        self.assertTrue(csv_text.startswith(",".join(TESTER_COLUMNS) + "\n"))
        self.assertEqual(len(csv_text.splitlines()), 5)

        with open(os.path.join(self.tmpdir, "tester.json")) as f:
            data = json.load(f)
        self.assertEqual(data["kind"], "tester")
        self.assertEqual(data["config"]["seed"], SEED)
        self.assertEqual(data["plan"]["m_samples"], 200_000)
        self.assertEqual(len(data["rows"]), 4)

        with open(os.path.join(self.tmpdir, "tester.dat")) as f:
            header = f.readline()
        self.assertNotIn("label", header)
        self.assertIn("estimated_tail_mass", header)

    def test_reproducible(self):
        first = run_experiment(make_tester_config(), write=False)
        second = run_experiment(make_tester_config(), write=False)
        self.assertEqual(first.to_csv(), second.to_csv())

    def test_thread_count_does_not_change_rows(self):
        serial = run_experiment(make_tester_config(), write=False)
        pooled = run_experiment(make_tester_config(threads=3), write=False)
        self.assertEqual(serial.to_csv(), pooled.to_csv())

    def test_different_seed(self):
        first = run_experiment(make_tester_config(), write=False)
        second = run_experiment(make_tester_config(seed=SEED + 100), write=False)
        self.assertNotEqual(first.to_csv(), second.to_csv())

    def test_invalid_config_runs_nothing(self):
        receiver = Mock()
        trial_finished.connect(receiver)
        self.addCleanup(trial_finished.disconnect, receiver)
        with self.assertRaises(InvalidExperimentConfig):
            run_experiment(make_tester_config(trials=0, out=self.tmpdir))
        receiver.assert_not_called()
        self.assertFalse(os.path.exists(os.path.join(self.tmpdir, "tester.csv")))


class TestLearnerExperiment(TemporaryDirectoryMixin, TestCase):
    def test_rows(self):
        record = run_experiment(make_learner_config(out=self.tmpdir))
        self.assertEqual(record.columns, LEARNER_COLUMNS)
        for row in record.rows:
            self.assertTrue(row["success"])
            self.assertLessEqual(row["distance"], 0.15)
            self.assertAlmostEqual(
                row["measured_I"] + row["measured_II"], row["distance"] ** 2
            )
            self.assertGreater(row["queries"], 200_000)
        self.assertIn("mean_distance", record.aggregates)
        self.assertTrue(os.path.exists(os.path.join(self.tmpdir, "learner.csv")))

    def test_reproducible(self):
        first = run_experiment(make_learner_config(), write=False)
        second = run_experiment(make_learner_config(threads=2), write=False)
        self.assertEqual(first.to_csv(), second.to_csv())


class TestHooks(TemporaryDirectoryMixin, TestCase):
    def test_signals(self):
        rows, records = [], []

        def on_trial(sender, row, kind, index, **kwargs):
            rows.append((kind, index, row["trial"]))

        def on_experiment(sender, record, **kwargs):
            records.append(record)

        trial_finished.connect(on_trial)
        experiment_finished.connect(on_experiment)
        self.addCleanup(trial_finished.disconnect, on_trial)
        self.addCleanup(experiment_finished.disconnect, on_experiment)

        record = run_experiment(make_tester_config(trials=2, threads=2), write=False)
        self.assertEqual(rows, [("tester", 0, 0), ("tester", 1, 1)])
        self.assertEqual(records, [record])

    def test_trial_callback(self):
        callback = Mock()
        with override_settings(PAULIPROBE_TRIAL_CALLBACK=callback):
            record = run_experiment(make_tester_config(trials=2), write=False)
        self.assertEqual(callback.call_count, 2)
        callback.assert_called_with(record.rows[1])


class TestPersistence(TemporaryDirectoryMixin, TestCase):
    def test_save(self):
        config = make_tester_config(trials=2, save=True, out=self.tmpdir)
        record = run_experiment(config)
        run = ExperimentRun.objects.get()
        self.assertEqual(run.kind, ExperimentKind.tester)
        self.assertEqual(run.seed, SEED)
        self.assertEqual(run.trials, 2)
        self.assertEqual(run.success_rate, record.aggregates["success_rate"])
        self.assertEqual(run.csv_columns, list(TESTER_COLUMNS))
        self.assertEqual(
            list(run.outcomes.values_list("index", "seed")),
            [(0, SEED), (1, SEED + 1)],
        )

    @override_settings(PAULIPROBE_PERSIST_RECORDS=True)
    def test_persist_setting(self):
        run_experiment(make_tester_config(trials=1), write=False)
        self.assertEqual(ExperimentRun.objects.count(), 1)

    def test_not_saved_by_default(self):
        run_experiment(make_tester_config(trials=1), write=False)
        self.assertFalse(ExperimentRun.objects.exists())


class TestExperimentRecord(TestCase):
    def test_empty_aggregates(self):
        record = ExperimentRecord(config=make_tester_config())
        aggregates = record.aggregates
        self.assertEqual(aggregates["trials"], 0)
        self.assertIsNone(aggregates["success_rate"])
        self.assertEqual(aggregates["wilson_low"], 0.0)
        self.assertEqual(aggregates["wilson_high"], 1.0)

    def test_verify_record(self):
        config = ExperimentConfig(kind=ExperimentKind.verify)
        record = ExperimentRecord(
            config=config,
            rows=[
                {"check": "a", "measured": 0.0, "threshold": 1.0, "passed": True},
                {"check": "b", "measured": 2.0, "threshold": 1.0, "passed": False},
            ],
        )
        self.assertEqual(record.successes, 1)
        self.assertEqual(
            record.to_csv(),
            "check,measured,threshold,passed\na,0.0,1.0,1\nb,2.0,1.0,0\n",
        )
        self.assertNotIn("mean_queries", record.aggregates)
