"""
pauli-probe verification suite tests.
"""
from unittest.mock import patch

import pytest
from django.test import TestCase

from pauliprobe.enums import VerifyLevel
from pauliprobe.pauli import spectrum_from_dense
from pauliprobe.verification import (
    CheckResult,
    check_bh_sums,
    check_claim_bounds,
    check_estimator,
    check_sampler,
    check_transform,
    verify_suite,
)

from . import SEED

CHECK_NAMES = [
    "parseval",
    "transform_equivalence",
    "round_trip",
    "unitary_parseval",
    "taylor_remainder",
    "coefficient_deviation",
    "claim_bounds",
    "bh_sums",
    "sampler_tv",
    "estimator_miss_rate",
]


def scaled_transform(matrix):
    """A deliberately wrong transform: every coefficient 1% too large."""
    return spectrum_from_dense(matrix) * 1.01


class TestCheckResult(TestCase):
    def test_passed(self):
        self.assertTrue(CheckResult("a", 0.5, 1.0).passed)
        self.assertTrue(CheckResult("a", 1.0, 1.0).passed)
        self.assertFalse(CheckResult("a", 1.5, 1.0).passed)

    def test_row(self):
        self.assertEqual(
            CheckResult("claim_bounds", 0, 0).to_row(),
            {"check": "claim_bounds", "measured": 0, "threshold": 0, "passed": True},
        )

    def test_str(self):
        self.assertTrue(str(CheckResult("a", 0.5, 1.0)).startswith("ok"))
        line = str(CheckResult("round_trip", 2.0, 1.0))
        self.assertTrue(line.startswith("FAIL"))
        self.assertIn("round_trip", line)
        self.assertIn("measured=2.0", line)


class TestChecks(TestCase):
    def test_transform(self):
        results = check_transform(spectrum_from_dense, 3, SEED)
        self.assertEqual(
            [r.name for r in results], ["transform_equivalence", "round_trip"]
        )
        self.assertTrue(all(r.passed for r in results))

    def test_faulty_transform(self):
        equivalence, round_trip = check_transform(scaled_transform, 2, SEED)
        self.assertFalse(equivalence.passed)
        self.assertFalse(round_trip.passed)

    def test_claim_bounds(self):
        result = check_claim_bounds(3, SEED)
        self.assertEqual(result.measured, 0)
        self.assertTrue(result.passed)

    def test_bh_sums(self):
        result = check_bh_sums(5, SEED)
        self.assertTrue(result.passed)
        self.assertGreater(result.measured, 0)

    def test_sampler(self):
        result = check_sampler(SEED)
        self.assertTrue(result.passed)
        self.assertEqual(result.threshold, 0.02)

    def test_estimator(self):
        result = check_estimator(50, SEED)
        self.assertTrue(result.passed)


class TestVerifySuite(TestCase):
    def test_quick(self):
        report = verify_suite(VerifyLevel.quick, seed=SEED)
        self.assertEqual([check.name for check in report.checks], CHECK_NAMES)
        self.assertTrue(report.passed, [str(c) for c in report.failures])
        self.assertEqual(report.level, VerifyLevel.quick)

    def test_injected_transform(self):
        with self.assertLogs("pauliprobe.verification", "WARNING"):
            report = verify_suite(VerifyLevel.quick, transform=scaled_transform)
        self.assertFalse(report.passed)
        self.assertIn("transform_equivalence", [c.name for c in report.failures])

    def test_patched_transform(self):
        with patch("pauliprobe.verification.spectrum_from_dense", scaled_transform):
            report = verify_suite(VerifyLevel.quick)
        self.assertEqual(
            sorted(c.name for c in report.failures),
            ["round_trip", "transform_equivalence"],
        )

    def test_unknown_level(self):
        with self.assertRaises(ValueError):
            verify_suite("exhaustive")

    @pytest.mark.slow
    def test_full(self):
        report = verify_suite(VerifyLevel.full)
        self.assertTrue(report.passed, [str(c) for c in report.failures])
