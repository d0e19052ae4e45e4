"""
pauli-probe locality tester tests.
"""
import math

import numpy as np
from django.test import TestCase
from django.test.utils import override_settings

from pauliprobe import tester
from pauliprobe.enums import Decision, InstanceLabel, PlanMode
from pauliprobe.exceptions import InfeasiblePlan
from pauliprobe.generators import planted_instance
from pauliprobe.oracles import EvolutionOracle
from pauliprobe.pauli import SupportProperty
from pauliprobe.tester import compute_plan

from . import SEED, oracle_for


class TestComputePlan(TestCase):
    def test_worked_example(self):
        plan = compute_plan(0.0, 0.3, 1 / 3, 1)
        self.assertAlmostEqual(plan.alpha, 0.1)
        self.assertAlmostEqual(plan.low_bound, 0.01)
        self.assertAlmostEqual(plan.high_bound, 0.02)
        self.assertAlmostEqual(plan.threshold, 2.5e-4)
        self.assertAlmostEqual(plan.tau, 1.5e-4)
        self.assertEqual(plan.theory_samples, 39816878)
        self.assertEqual(plan.m_samples, plan.theory_samples)
        self.assertEqual(plan.mode, PlanMode.theory)
        self.assertAlmostEqual(plan.theory_evolution_time, 3981687.8, places=3)

    def test_error_targets(self):
        plan = compute_plan(0.1, 0.4, 0.05, 2)
        self.assertAlmostEqual(plan.loose_error_target, (0.09 / 18) ** 2)
        self.assertLessEqual(plan.loose_error_target, plan.tau)
        self.assertLess(plan.low_bound ** 2, plan.threshold)
        self.assertLess(plan.threshold, plan.high_bound ** 2)

    def test_samples_follow_hoeffding(self):
        plan = compute_plan(0.1, 0.4, 0.05, 2)
        expected = math.ceil(math.log(2 / 0.05) / (2 * plan.tau ** 2))
        self.assertEqual(plan.theory_samples, expected)

    @override_settings(PAULIPROBE_TAYLOR_CONSTANT=2.0)
    def test_constant_from_settings(self):
        plan = compute_plan(0.0, 0.3, 0.1, 1)
        self.assertEqual(plan.c, 2.0)
        self.assertAlmostEqual(plan.alpha, 0.05)

    def test_override(self):
        plan = compute_plan(0.0, 0.3, 0.1, 1, m=1000)
        self.assertEqual(plan.m_samples, 1000)
        self.assertEqual(plan.mode, PlanMode.practical)
        self.assertAlmostEqual(plan.planned_evolution_time, 100.0)
        self.assertEqual(plan.with_samples(None).mode, PlanMode.theory)
        with self.assertRaises(InfeasiblePlan):
            plan.with_samples(0)

    def test_with_delta(self):
        plan = compute_plan(0.0, 0.3, 0.1, 1, m=1000).with_delta(0.01)
        self.assertEqual(plan.delta, 0.01)
        self.assertEqual(plan.m_samples, 1000)
        base = compute_plan(0.0, 0.3, 0.1, 1)
        self.assertGreater(plan.theory_samples, base.theory_samples)

    def test_infeasible(self):
        with self.assertRaises(InfeasiblePlan):
            compute_plan(0.3, 0.3, 0.1, 1)
        with self.assertRaises(InfeasiblePlan):
            compute_plan(0.0, 1.2, 0.1, 1)
        with self.assertRaises(InfeasiblePlan):
            compute_plan(0.0, 0.3, 0.0, 1)
        with self.assertRaises(InfeasiblePlan):
            compute_plan(0.0, 0.3, 0.1, 1, c=0)
        with self.assertRaises(InfeasiblePlan):
            compute_plan(0.0, 0.3, 0.1, -1)
        with self.assertRaises(InfeasiblePlan):
            compute_plan(0.0, 0.3, 0.1, 1, m=0)

    def test_outside_taylor_regime(self):
        # alpha = 1 / (3 * 0.5) = 2/3
        with self.assertRaises(InfeasiblePlan):
            compute_plan(0.0, 1.0, 0.1, 1, c=0.5)

    def test_json(self):
        data = compute_plan(0.0, 0.3, 0.1, 1).to_json_dict()
        for key in ("alpha", "threshold", "tau", "theory_samples", "m_samples"):
            self.assertIn(key, data)
        self.assertEqual(data["mode"], "theory")


class TestLocalityTester(TestCase):
    def setUp(self):
        self.plan = compute_plan(0.0, 0.3, 1 / 3, 1, m=100_000)

    def test_exactly_local_is_close(self):
        # U(alpha) = cos(alpha) Id - i sin(alpha) ZI has no weight-2 mass.
        verdict = tester.test_locality(oracle_for({"ZI": 1.0}, n=2), self.plan)
        self.assertEqual(verdict.decision, Decision.close_to_local)
        self.assertFalse(verdict.is_far)
        self.assertEqual(verdict.estimated_tail_mass, 0.0)

    def test_two_body_is_far(self):
        # Tail mass sin(0.1)^2 ~ 1e-2, far above the 2.5e-4 threshold.
        verdict = tester.test_locality(oracle_for({"XX": 1.0}, n=2), self.plan)
        self.assertEqual(verdict.decision, Decision.far_from_local)
        self.assertTrue(verdict.is_far)
        self.assertAlmostEqual(
            verdict.estimated_tail_mass, math.sin(0.1) ** 2, delta=2e-3
        )

    def test_ledger(self):
        oracle = oracle_for({"XX": 1.0}, n=2)
        verdict = tester.test_locality(oracle, self.plan)
        self.assertEqual(verdict.samples, 100_000)
        self.assertEqual(verdict.ledger.query_count, 100_000)
        self.assertAlmostEqual(verdict.ledger.total_evolution_time, 10_000.0)

    def test_json(self):
        verdict = tester.test_locality(oracle_for({"ZI": 1.0}, n=2), self.plan)
        data = verdict.to_json_dict()
        self.assertEqual(data["decision"], "close_to_local")
        self.assertEqual(data["ledger"]["queries"], 100_000)
        self.assertEqual(data["plan"]["m_samples"], 100_000)


class TestPropertyTester(TestCase):
    def setUp(self):
        self.plan = compute_plan(0.0, 0.3, 1 / 3, 1, m=100_000)
        self.member = SupportProperty(["II", "ZI"])

    def test_supported(self):
        oracle = oracle_for({"ZI": 1.0}, n=2)
        verdict = tester.test_property(oracle, self.plan, self.member)
        self.assertEqual(verdict.decision, Decision.close_to_local)

    def test_unsupported(self):
        oracle = oracle_for({"IX": 1.0}, n=2)
        verdict = tester.test_property(oracle, self.plan, self.member)
        self.assertEqual(verdict.decision, Decision.far_from_local)

    def test_predicate(self):
        def only_z(p):
            return set(p.label) <= {"I", "Z"}

        oracle = oracle_for({"ZZ": 1.0}, n=2)
        self.assertFalse(tester.test_property(oracle, self.plan, only_z).is_far)

    def test_weight_predicate_matches_locality(self):
        for offset, want in enumerate((InstanceLabel.close, InstanceLabel.far)):
            instance = planted_instance(3, 1, 0.0, 0.3, want, SEED + offset)
            by_locality = tester.test_locality(
                EvolutionOracle(instance.hamiltonian, seed=SEED), self.plan
            )
            by_predicate = tester.test_property(
                EvolutionOracle(instance.hamiltonian, seed=SEED),
                self.plan,
                lambda p: p.weight <= 1,
            )
            self.assertEqual(by_predicate.decision, by_locality.decision)
            self.assertEqual(
                by_predicate.estimated_tail_mass, by_locality.estimated_tail_mass
            )

    def test_identity_support_rejects_planted_far(self):
        identity = SupportProperty(["III"])
        far = 0
        trials = 20
        for trial in range(trials):
            instance = planted_instance(3, 1, 0.0, 0.3, InstanceLabel.far, SEED + trial)
            off_identity = instance.hamiltonian.spectrum.coefficients[1:]
            mass = np.sum(np.abs(off_identity) ** 2)
            self.assertGreaterEqual(mass, 0.3 ** 2 - 1e-12)
            oracle = EvolutionOracle(instance.hamiltonian, seed=SEED + trial)
            far += tester.test_property(oracle, self.plan, identity).is_far
        self.assertGreaterEqual(far / trials, 0.9)


class TestMany(TestCase):
    def setUp(self):
        self.plans = [
            (compute_plan(0.0, 0.3, 0.1, 1, m=1000), SupportProperty(["II", "ZI"])),
            (compute_plan(0.0, 0.3, 0.1, 1, m=3000), lambda p: p.weight <= 1),
        ]

    def test_shared_stream(self):
        oracle = oracle_for({"XX": 1.0}, n=2)
        verdicts = tester.test_many(oracle, self.plans, 0.2)
        self.assertEqual(len(verdicts), 2)
        self.assertEqual(oracle.ledger.query_count, 3000)
        self.assertEqual([v.samples for v in verdicts], [1000, 3000])
        for verdict in verdicts:
            self.assertAlmostEqual(verdict.plan.delta, 0.1)

    def test_separate_streams(self):
        oracle = oracle_for({"XX": 1.0}, n=2)
        tester.test_many(oracle, self.plans, 0.2, shared_stream=False)
        self.assertEqual(oracle.ledger.query_count, 4000)

    def test_groups_by_alpha(self):
        plans = self.plans + [
            (compute_plan(0.0, 0.6, 0.1, 1, m=500), lambda p: p.weight <= 1)
        ]
        oracle = oracle_for({"XX": 1.0}, n=2)
        verdicts = tester.test_many(oracle, plans, 0.3)
        self.assertEqual(oracle.ledger.query_count, 3500)
        self.assertAlmostEqual(verdicts[2].plan.alpha, 0.2)

    def test_invalid(self):
        oracle = oracle_for({"XX": 1.0}, n=2)
        with self.assertRaises(ValueError):
            tester.test_many(oracle, [], 0.1)
        with self.assertRaises(InfeasiblePlan):
            tester.test_many(oracle, self.plans, 1.0)
