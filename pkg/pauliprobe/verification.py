"""
The exact-math and sampler checks behind ``pauliprobe verify``.

Every check reports a measured value against a threshold; a check passes
when measured <= threshold. ``quick`` runs reduced sweeps, ``full`` the
acceptance-scale ones.
"""
import logging
from dataclasses import dataclass
from typing import Callable, List, Optional

import numpy as np

from . import settings as pauliprobe_settings
from .context_managers import verification_mode
from .enums import InstanceLabel, VerifyLevel
from .evolution import (
    claim_bounds_check,
    remainder_check,
    taylor_coefficient_deviation,
    unitary_spectrum,
)
from .generators import planted_instance, random_k_local
from .learner import bh_sum
from .oracles import EvolutionOracle
from .pauli import (
    PauliString,
    dense_from_spectrum,
    frobenius_two_norm,
    spectrum_from_dense,
    spectrum_from_dense_naive,
)
from .tester import compute_plan
from .utils import (
    INSTANCE_STREAM,
    derive_seed,
    format_float,
    make_rng,
    total_variation,
)

logger = logging.getLogger(__name__)

TAYLOR_TIMES = tuple(round(0.05 * i, 2) for i in range(1, 11))

SWEEPS = {
    VerifyLevel.quick: {
        "hamiltonians": 20,
        "transform_qubits": 3,
        "planted": 10,
        "bh": 50,
        "calibration": 200,
    },
    VerifyLevel.full: {
        "hamiltonians": 100,
        "transform_qubits": 4,
        "planted": 100,
        "bh": 1000,
        "calibration": 1000,
    },
}


@dataclass(frozen=True)
class CheckResult:
    name: str
    measured: float
    threshold: float

    @property
    def passed(self) -> bool:
        return bool(self.measured <= self.threshold)

    def to_row(self) -> dict:
        return {
            "check": self.name,
            "measured": self.measured,
            "threshold": self.threshold,
            "passed": self.passed,
        }

    def __str__(self):
        template = "{status:4}  {name:<24} measured={measured:<24} "
        template += "threshold={threshold}"
        return template.format(
            status="ok" if self.passed else "FAIL",
            name=self.name,
            measured=format_float(self.measured),
            threshold=format_float(self.threshold),
        )


@dataclass(frozen=True)
class VerificationReport:
    level: str
    checks: List[CheckResult]

    @property
    def passed(self) -> bool:
        return all(check.passed for check in self.checks)

    @property
    def failures(self) -> List[CheckResult]:
        return [check for check in self.checks if not check.passed]


def _random_hamiltonians(count: int, seed: int, qubits=(2, 3, 4, 5)):
    """Normalized random Hamiltonians cycling through the given qubit counts."""
    hamiltonians = []
    for i in range(count):
        n = qubits[i % len(qubits)]
        k = 1 + i % n
        hamiltonians.append(random_k_local(n, k, 0.5, derive_seed(seed, i)))
    return hamiltonians


def _random_matrix(rng, n: int) -> np.ndarray:
    size = 2 ** n
    return rng.normal(size=(size, size)) + 1j * rng.normal(size=(size, size))


def check_parseval(hamiltonians) -> CheckResult:
    """||H||_2 from the spectrum against the normalized Frobenius norm."""
    worst = 0.0
    for hamiltonian in hamiltonians:
        from_spectrum = hamiltonian.spectrum.two_norm()
        from_dense = frobenius_two_norm(hamiltonian.dense())
        if from_dense:
            worst = max(worst, abs(from_spectrum - from_dense) / from_dense)
    return CheckResult("parseval", worst, pauliprobe_settings.get_norm_rtol())


def check_transform(
    transform: Callable, max_qubits: int, seed: int
) -> List[CheckResult]:
    rng = make_rng(seed, INSTANCE_STREAM, 1)
    atol = pauliprobe_settings.get_transform_atol()
    equivalence = round_trip = 0.0
    for n in range(1, max_qubits + 1):
        matrix = _random_matrix(rng, n)
        fast = transform(matrix)
        naive = spectrum_from_dense_naive(matrix)
        equivalence = max(
            equivalence, float(np.max(np.abs(fast.coefficients - naive.coefficients)))
        )
        round_trip = max(
            round_trip, float(np.max(np.abs(dense_from_spectrum(fast) - matrix)))
        )
    return [
        CheckResult("transform_equivalence", equivalence, atol),
        CheckResult("round_trip", round_trip, atol),
    ]


def check_unitary_parseval(hamiltonians) -> CheckResult:
    worst = 0.0
    for hamiltonian in hamiltonians:
        for t in (0.1, 0.5):
            coefficients = unitary_spectrum(hamiltonian, t).coefficients
            total = float(np.sum(np.abs(coefficients) ** 2))
            worst = max(worst, abs(total - 1))
    return CheckResult("unitary_parseval", worst, pauliprobe_settings.get_norm_rtol())


def check_taylor(hamiltonians) -> List[CheckResult]:
    """Remainder and coefficient deviation, both in units of their bounds."""
    remainder = deviation = 0.0
    for hamiltonian in hamiltonians:
        for t in TAYLOR_TIMES:
            result = remainder_check(hamiltonian, t)
            remainder = max(remainder, result.remainder_norm / result.bound)
            coefficient = taylor_coefficient_deviation(hamiltonian, t)
            deviation = max(deviation, coefficient.total / coefficient.total_bound)
    return [
        CheckResult("taylor_remainder", remainder, 1.0),
        CheckResult("coefficient_deviation", deviation, 1.0),
    ]


def check_claim_bounds(count: int, seed: int) -> CheckResult:
    """Exact ||U(alpha)_{>1}||_2 on planted n=4 instances at eps = (0, 0.3)."""
    plan = compute_plan(0.0, 0.3, 1 / 3, 1)
    violations = 0
    for i in range(count):
        for label in (InstanceLabel.close, InstanceLabel.far):
            instance = planted_instance(4, 1, 0.0, 0.3, label, derive_seed(seed, i))
            if not claim_bounds_check(instance.hamiltonian, 1, plan).holds_for(label):
                violations += 1
    return CheckResult("claim_bounds", violations, 0)


def check_bh_sums(count: int, seed: int) -> CheckResult:
    """Largest bh_sum / C^k over random normalized k-local instances, n = 4."""
    constant = pauliprobe_settings.get_bh_constant()
    worst = 0.0
    for k in (1, 2, 3):
        for i in range(count):
            hamiltonian = random_k_local(4, k, 0.5, derive_seed(seed, 10_000 * k + i))
            worst = max(worst, bh_sum(hamiltonian, k) / constant ** k)
    return CheckResult("bh_sums", worst, 1.0)


def check_sampler(seed: int, samples: int = 100_000) -> CheckResult:
    """TV distance between 10^5 Bell samples and the exact distribution, n = 4."""
    hamiltonian = random_k_local(4, 2, 0.5, seed)
    oracle = EvolutionOracle(hamiltonian, seed=seed)
    counts = np.bincount(oracle.bell_sample_indices(0.25, samples), minlength=4 ** 4)
    with verification_mode(oracle):
        exact = oracle.exact_distribution(0.25)
    return CheckResult("sampler_tv", total_variation(counts / samples, exact), 0.02)


def check_estimator(calls: int, seed: int, beta: float = 0.05, delta: float = 0.1):
    """Fraction of coefficient estimates off by more than beta."""
    hamiltonian = random_k_local(3, 2, 0.5, seed)
    spectrum = unitary_spectrum(hamiltonian, 0.3).spectrum
    oracle = EvolutionOracle(hamiltonian, seed=seed)
    rng = make_rng(seed, INSTANCE_STREAM, 2)
    misses = 0
    for index in rng.integers(0, 4 ** 3, size=calls):
        x = PauliString.from_index(3, int(index))
        estimate = oracle.estimate_coefficient(0.3, x, beta, delta)
        if abs(estimate - spectrum[x]) > beta:
            misses += 1
    return CheckResult("estimator_miss_rate", misses / calls, delta)


def verify_suite(
    level: str = VerifyLevel.quick,
    transform: Optional[Callable] = None,
    seed: int = 0,
) -> VerificationReport:
    """
    Run every check. ``transform`` replaces the dense -> spectrum transform
    under test (it defaults to the fast one).
    """
    if level not in SWEEPS:
        raise ValueError("level must be 'quick' or 'full', got {!r}.".format(level))
    sweep = SWEEPS[level]
    if transform is None:
        transform = spectrum_from_dense

    hamiltonians = _random_hamiltonians(sweep["hamiltonians"], seed)
    checks = [check_parseval(hamiltonians)]
    checks += check_transform(transform, sweep["transform_qubits"], seed)
    checks.append(check_unitary_parseval(hamiltonians))
    checks += check_taylor(hamiltonians)
    checks.append(check_claim_bounds(sweep["planted"], seed))
    checks.append(check_bh_sums(sweep["bh"], seed))
    checks.append(check_sampler(seed))
    checks.append(check_estimator(sweep["calibration"], seed))

    for check in checks:
        logger.debug("%s", check)
    report = VerificationReport(level=level, checks=checks)
    if not report.passed:
        logger.warning(
            "Verification failed: %s", ", ".join(c.name for c in report.failures)
        )
    return report
