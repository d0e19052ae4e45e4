"""
Desk-scale statistical runs of the tester, the learner and the
Bohnenblust-Hille certification. Deselect with ``-m "not slow"``.
"""
import pytest
from django.test import TestCase

from pauliprobe.enums import ExperimentKind
from pauliprobe.experiments import ExperimentConfig, run_experiment
from pauliprobe.generators import random_k_local
from pauliprobe.learner import certify_bh_constant

from . import SEED


@pytest.mark.slow
class TestTesterAcceptance(TestCase):
    def test_balanced_trials(self):
        config = ExperimentConfig(
            kind=ExperimentKind.tester,
            n=4,
            k=1,
            eps1=0.0,
            eps2=0.3,
            delta=1 / 3,
            m=100_000,
            trials=200,
            seed=SEED,
        )
        aggregates = run_experiment(config, write=False).aggregates
        self.assertGreaterEqual(aggregates["success_rate"], 0.9)
        self.assertGreaterEqual(aggregates["wilson_low"], 0.85)


@pytest.mark.slow
class TestLearnerAcceptance(TestCase):
    def test_one_local(self):
        config = ExperimentConfig(
            kind=ExperimentKind.learner,
            n=2,
            k=1,
            eps=0.2,
            alpha=0.2,
            gamma=0.02,
            beta=0.005,
            m1=100_000,
            C=2.0,
            tolerance=0.1,
            trials=50,
            seed=SEED,
        )
        record = run_experiment(config, write=False)
        self.assertGreaterEqual(record.aggregates["success_rate"], 0.9)

    def test_two_local(self):
        config = ExperimentConfig(
            kind=ExperimentKind.learner,
            n=4,
            k=2,
            eps=0.2,
            alpha=0.2,
            gamma=0.005,
            beta=0.002,
            m1=1_000_000,
            tolerance=0.2,
            trials=50,
            seed=SEED,
        )
        record = run_experiment(config, write=False)
        self.assertGreaterEqual(record.aggregates["success_rate"], 0.9)


@pytest.mark.slow
class TestBohnenblustHilleAcceptance(TestCase):
    def test_default_constant(self):
        for k in (1, 2, 3):
            family = (random_k_local(4, k, 0.5, SEED + i) for i in range(1000))
            certificate = certify_bh_constant(family, k)
            self.assertTrue(certificate.holds)
            self.assertEqual(certificate.checked, 1000)
