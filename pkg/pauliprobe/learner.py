"""
Learning a k-local Hamiltonian from queries to U(alpha).

Stage one Bell-samples U(alpha) m1 times and keeps the strings whose empirical
amplitude exceeds gamma. Stage two estimates those coefficients (and the
identity one) to accuracy beta, and the output H'' reads the Hamiltonian off
the first-order term u_x ~ -i alpha h_x. The coefficients that were never
detected are accounted for by the Bohnenblust-Hille inequality.
"""
import logging
import math
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Optional

import numpy as np

from . import settings as pauliprobe_settings
from .enums import PlanMode
from .evolution import TAYLOR_REGIME_MAX_TIME
from .exceptions import BHConstantViolated, InfeasiblePlan, SpectrumError
from .oracles import EvolutionOracle, QueryLedger, coefficient_sample_count
from .pauli import (
    Hamiltonian,
    PauliSpectrum,
    PauliString,
    pauli_sup_distance,
    truncate,
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class LearnerPlan:
    k: int
    eps: float
    delta: float
    C: float
    c: float
    alpha: float
    gamma: float
    beta: float
    m1: int
    mode: str = PlanMode.theory

    @property
    def stage_delta(self) -> float:
        """Failure budget of each stage."""
        return self.delta / 2

    @property
    def max_support(self) -> int:
        """|S_gamma| can never exceed gamma^-2."""
        return int(math.floor(1 / self.gamma ** 2))

    def coefficient_delta(self, support_size: int) -> float:
        """Per-coefficient failure probability after the stage-two union bound."""
        return self.delta / (2 * (support_size + 1))

    @property
    def m2(self) -> int:
        """Bernoulli samples per coefficient part at the worst-case support size."""
        return coefficient_sample_count(
            self.beta, self.coefficient_delta(self.max_support)
        )

    @property
    def worst_case_queries(self) -> int:
        return self.m1 + (self.max_support + 1) * 2 * self.m2

    @property
    def worst_case_evolution_time(self) -> float:
        return self.worst_case_queries * self.alpha

    @property
    def term_I(self) -> float:
        """Budget for the estimated coordinates: 2c^2 a^2 + 2 a^-2 b^2 (g^-2 + 1)."""
        a, b, g = self.alpha, self.beta, self.gamma
        return 2 * self.c ** 2 * a ** 2 + 2 * b ** 2 / a ** 2 * (1 / g ** 2 + 1)

    @property
    def term_II(self) -> float:
        """Budget for the truncated coordinates: (2g/a + ca)^(2/(k+1)) C^k."""
        a, g = self.alpha, self.gamma
        return (2 * g / a + self.c * a) ** (2 / (self.k + 1)) * self.C ** self.k

    def error_budget(self) -> Dict[str, float]:
        return {
            "term_I": self.term_I,
            "term_II": self.term_II,
            "total": self.term_I + self.term_II,
        }

    def to_json_dict(self) -> dict:
        return {
            "k": self.k,
            "eps": self.eps,
            "delta": self.delta,
            "C": self.C,
            "c": self.c,
            "alpha": self.alpha,
            "gamma": self.gamma,
            "beta": self.beta,
            "m1": self.m1,
            "m2": self.m2,
            "mode": self.mode,
            "worst_case_queries": self.worst_case_queries,
            "worst_case_evolution_time": self.worst_case_evolution_time,
        }


def _check_learning_target(k: int, eps: float, delta: float, C: float, c: float):
    if k < 1:
        raise InfeasiblePlan("k must be at least 1, got {}.".format(k))
    if not 0 < eps < 1:
        raise InfeasiblePlan("eps must lie in (0, 1), got {}.".format(eps))
    if not 0 < delta < 1:
        raise InfeasiblePlan("delta must lie in (0, 1), got {}.".format(delta))
    if C <= 1:
        raise InfeasiblePlan(
            "The Bohnenblust-Hille constant C must exceed 1, got {}.".format(C)
        )
    if c <= 0:
        raise InfeasiblePlan("c must be positive, got {}.".format(c))


def _check_alpha(alpha: float):
    if not 0 < alpha <= TAYLOR_REGIME_MAX_TIME:
        raise InfeasiblePlan(
            "alpha = {:.6g} must lie in (0, 1/2], the Taylor regime.".format(alpha)
        )


def _stage_one_samples(gamma: float, delta: float) -> int:
    """m1 = ceil(2 ln(2/delta) / gamma^4)."""
    if gamma ** 4 == 0:
        raise InfeasiblePlan(
            "gamma = {:.3g} is too small for a finite sample count.".format(gamma)
        )
    return int(math.ceil(2 * math.log(2 / delta) / gamma ** 4))


def theory_parameters(
    k: int,
    eps: float,
    delta: float,
    C: Optional[float] = None,
    c: Optional[float] = None,
) -> LearnerPlan:
    """alpha = eps^(k+1) C^(-k(k+1)/2), gamma = alpha^2, beta = alpha^3 eps."""
    if C is None:
        C = pauliprobe_settings.get_bh_constant()
    if c is None:
        c = pauliprobe_settings.get_taylor_constant()
    _check_learning_target(k, eps, delta, C, c)

    alpha = eps ** (k + 1) * C ** (-k * (k + 1) / 2)
    _check_alpha(alpha)
    gamma = alpha ** 2
    beta = alpha ** 3 * eps
    m1 = _stage_one_samples(gamma, delta)
    plan = LearnerPlan(
        k=k,
        eps=eps,
        delta=delta,
        C=C,
        c=c,
        alpha=alpha,
        gamma=gamma,
        beta=beta,
        m1=m1,
        mode=PlanMode.theory,
    )
    logger.debug("Learner theory plan: %s", plan)
    return plan


def practical_parameters(
    k: int,
    eps: float,
    delta: float,
    alpha: Optional[float] = None,
    gamma: Optional[float] = None,
    beta: Optional[float] = None,
    m1: Optional[int] = None,
    C: Optional[float] = None,
    c: Optional[float] = None,
) -> LearnerPlan:
    """
    A plan with user overrides for alpha, gamma, beta and m1. Parameters left
    as None keep their theory value (derived from the overridden alpha where
    applicable). Overrides void the 1 - delta guarantee.
    """
    if C is None:
        C = pauliprobe_settings.get_bh_constant()
    if c is None:
        c = pauliprobe_settings.get_taylor_constant()
    _check_learning_target(k, eps, delta, C, c)

    if alpha is None:
        alpha = eps ** (k + 1) * C ** (-k * (k + 1) / 2)
    _check_alpha(alpha)
    if gamma is None:
        gamma = alpha ** 2
    if beta is None:
        beta = alpha ** 3 * eps
    if not 0 < gamma < 1:
        raise InfeasiblePlan("gamma must lie in (0, 1), got {}.".format(gamma))
    if not 0 < beta <= 1:
        raise InfeasiblePlan("beta must lie in (0, 1], got {}.".format(beta))
    if m1 is None:
        m1 = _stage_one_samples(gamma, delta)
    if m1 < 1:
        raise InfeasiblePlan("m1 must be positive, got {}.".format(m1))

    return LearnerPlan(
        k=k,
        eps=eps,
        delta=delta,
        C=C,
        c=c,
        alpha=alpha,
        gamma=gamma,
        beta=beta,
        m1=int(m1),
        mode=PlanMode.practical,
    )


@dataclass(frozen=True)
class DetectionResult:
    n: int
    amplitudes: np.ndarray = field(repr=False)
    support: tuple
    samples: int

    @property
    def strings(self) -> List[PauliString]:
        return [PauliString.from_index(self.n, index) for index in self.support]

    def amplitude(self, x: PauliString) -> float:
        return float(self.amplitudes[x.index])


def detect_big_coefficients(
    oracle: EvolutionOracle, plan: LearnerPlan
) -> DetectionResult:
    """
    Bell-sample U(alpha) m1 times; u'_x = sqrt(count_x / m1) and
    S_gamma = {x : u'_x > gamma} without the identity.
    """
    n = oracle.n
    counts = np.zeros(4 ** n, dtype=np.int64)
    for chunk in oracle.iter_bell_sample_indices(plan.alpha, plan.m1):
        counts += np.bincount(chunk, minlength=counts.shape[0])
    amplitudes = np.sqrt(counts / plan.m1)
    amplitudes.setflags(write=False)

    big = amplitudes > plan.gamma
    big[0] = False
    support = tuple(int(index) for index in np.flatnonzero(big))
    logger.debug(
        "Detected %d big coefficients out of %d strings", len(support), 4 ** n
    )
    return DetectionResult(
        n=n, amplitudes=amplitudes, support=support, samples=plan.m1
    )


@dataclass(frozen=True)
class CoefficientEstimates:
    estimates: Dict[PauliString, complex]
    beta: float
    coefficient_delta: float

    def __getitem__(self, x: PauliString) -> complex:
        return self.estimates[x]

    def __len__(self):
        return len(self.estimates)

    def keys(self):
        return self.estimates.keys()


def estimate_big_coefficients(
    oracle: EvolutionOracle,
    plan: LearnerPlan,
    detection: DetectionResult,
    threads: Optional[int] = None,
) -> CoefficientEstimates:
    """Estimate u_x for x in S_gamma and for the identity, all to within beta."""
    strings = [PauliString.identity(oracle.n)] + detection.strings
    coefficient_delta = plan.coefficient_delta(len(detection.support))
    estimates = oracle.estimate_coefficients(
        plan.alpha, strings, plan.beta, coefficient_delta, threads=threads
    )
    return CoefficientEstimates(estimates, plan.beta, coefficient_delta)


@dataclass(frozen=True)
class LearnedHamiltonian:
    hamiltonian: Hamiltonian
    plan: LearnerPlan
    detection: DetectionResult
    estimates: CoefficientEstimates
    ledger: QueryLedger

    @property
    def n(self) -> int:
        return self.hamiltonian.n

    @property
    def support(self) -> tuple:
        """S_gamma plus the identity."""
        return (0,) + self.detection.support

    def error_budget(self) -> Dict[str, float]:
        return self.plan.error_budget()

    def as_k_local(self, k: Optional[int] = None) -> Hamiltonian:
        """Projection of H'' onto strings of weight at most k."""
        if k is None:
            k = self.plan.k
        return Hamiltonian(
            truncate(self.hamiltonian.spectrum, k), declared_locality=k
        )

    def distance(self, hamiltonian: Hamiltonian) -> float:
        return (hamiltonian.spectrum - self.hamiltonian.spectrum).two_norm()

    def sup_distance(self, hamiltonian: Hamiltonian) -> float:
        return pauli_sup_distance(hamiltonian.spectrum, self.hamiltonian.spectrum)

    def to_json_dict(self) -> dict:
        data = self.hamiltonian.spectrum.to_json_dict()
        data["plan"] = self.plan.to_json_dict()
        budget = self.error_budget()
        data["error_budget"] = {
            "term_I": budget["term_I"],
            "term_II": budget["term_II"],
        }
        data["ledger"] = self.ledger.to_json_dict()
        return data


def learn(
    oracle: EvolutionOracle, plan: LearnerPlan, threads: Optional[int] = None
) -> LearnedHamiltonian:
    """
    H'' = Re(i (u''_0 - 1) / alpha) Id + sum_{x in S_gamma} Re(i u''_x / alpha) sigma_x.
    """
    detection = detect_big_coefficients(oracle, plan)
    estimates = estimate_big_coefficients(oracle, plan, detection, threads=threads)

    coefficients = np.zeros(4 ** oracle.n, dtype=np.float64)
    for x, u in estimates.estimates.items():
        # Re(i z) = -Im(z), and subtracting 1 leaves the imaginary part alone.
        coefficients[x.index] = -u.imag / plan.alpha
    learned = Hamiltonian(PauliSpectrum(oracle.n, coefficients))
    logger.debug(
        "Learned H'' with %d terms using %d queries",
        len(learned.spectrum),
        oracle.ledger.query_count,
    )
    return LearnedHamiltonian(
        hamiltonian=learned,
        plan=plan,
        detection=detection,
        estimates=estimates,
        ledger=oracle.ledger.snapshot(),
    )


def bh_sum(hamiltonian: Hamiltonian, k: int) -> float:
    """sum_x |h_x|^(2k/(k+1)) for a k-local H."""
    if k < 1:
        raise ValueError("k must be at least 1, got {}.".format(k))
    if not hamiltonian.is_k_local(k):
        raise SpectrumError(
            "bh_sum needs a {k}-local Hamiltonian; H has heavier terms.".format(k=k)
        )
    magnitudes = np.abs(hamiltonian.coefficients)
    return float(np.sum(magnitudes[magnitudes > 0] ** (2 * k / (k + 1))))


@dataclass(frozen=True)
class BHCertificate:
    k: int
    C: float
    checked: int
    worst_sum: float
    violations: int

    @property
    def bound(self) -> float:
        return self.C ** self.k

    @property
    def holds(self) -> bool:
        return self.violations == 0


def certify_bh_constant(
    hamiltonians: Iterable[Hamiltonian],
    k: int,
    C: Optional[float] = None,
    raise_on_violation: bool = True,
) -> BHCertificate:
    """Check bh_sum(H, k) <= C^k over a family of normalized k-local Hamiltonians."""
    if C is None:
        C = pauliprobe_settings.get_bh_constant()
    bound = C ** k
    checked = violations = 0
    worst = 0.0
    for hamiltonian in hamiltonians:
        value = bh_sum(hamiltonian, k)
        checked += 1
        worst = max(worst, value)
        if value > bound:
            violations += 1
    certificate = BHCertificate(
        k=k, C=C, checked=checked, worst_sum=worst, violations=violations
    )
    if violations:
        logger.warning(
            "Bohnenblust-Hille sum exceeded C^k = %g on %d of %d Hamiltonians (max %g)",
            bound,
            violations,
            checked,
            worst,
        )
        if raise_on_violation:
            raise BHConstantViolated(k, C, worst, violations)
    return certificate


def undetected_coefficient_bound(plan: LearnerPlan) -> float:
    """|h_x| <= (2 gamma + c alpha^2) / alpha for every x outside S_gamma."""
    return (2 * plan.gamma + plan.c * plan.alpha ** 2) / plan.alpha


def measured_error_terms(
    learned: LearnedHamiltonian, hamiltonian: Hamiltonian
) -> Dict[str, float]:
    """
    Split ||H - H''||_2^2 into the part on the estimated coordinates
    (S_gamma and the identity) and the part on everything that was truncated.
    """
    if hamiltonian.n != learned.n:
        raise SpectrumError(
            "Qubit counts differ: {} vs {}.".format(hamiltonian.n, learned.n)
        )
    squared = (hamiltonian.coefficients - learned.hamiltonian.coefficients) ** 2
    estimated = np.zeros(squared.shape[0], dtype=bool)
    estimated[list(learned.support)] = True
    return {
        "measured_I": float(squared[estimated].sum()),
        "measured_II": float(squared[~estimated].sum()),
    }
