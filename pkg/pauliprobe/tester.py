"""
Tolerant testing of k-locality (and of any Pauli-set property) from Bell
samples of U(alpha).

A Hamiltonian eps1-close to k-local has ||U(alpha)_{>k}||_2 <= low_bound and
one eps2-far has ||U(alpha)_{>k}||_2 >= high_bound, for alpha = (eps2-eps1)/(3c).
The tester estimates the tail mass sum_{|x|>k} |u_x|^2 by the fraction of
Bell samples outside the property and cuts at the midpoint of the squared
bounds.
"""
import logging
import math
from collections import OrderedDict
from dataclasses import dataclass, replace
from typing import List, Optional, Sequence, Tuple

import numpy as np

from . import settings as pauliprobe_settings
from .enums import Decision, PlanMode
from .evolution import TAYLOR_REGIME_MAX_TIME
from .exceptions import InfeasiblePlan
from .oracles import EvolutionOracle, QueryLedger
from .pauli import LocalityProperty, as_property

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class TesterPlan:
    eps1: float
    eps2: float
    delta: float
    k: int
    c: float
    alpha: float
    low_bound: float
    high_bound: float
    threshold: float
    tau: float
    theory_samples: int
    m_override: Optional[int] = None

    @property
    def mode(self) -> str:
        return PlanMode.theory if self.m_override is None else PlanMode.practical

    @property
    def m_samples(self) -> int:
        """Samples actually drawn: the override if set, else the Hoeffding count."""
        return self.theory_samples if self.m_override is None else self.m_override

    @property
    def planned_evolution_time(self) -> float:
        return self.m_samples * self.alpha

    @property
    def theory_evolution_time(self) -> float:
        return self.theory_samples * self.alpha

    @property
    def loose_error_target(self) -> float:
        """((eps2 - eps1)^2 / (18c))^2, never larger than tau."""
        return ((self.eps2 - self.eps1) ** 2 / (18 * self.c)) ** 2

    def with_delta(self, delta: float) -> "TesterPlan":
        return compute_plan(
            self.eps1, self.eps2, delta, self.k, c=self.c, m=self.m_override
        )

    def with_samples(self, m: Optional[int]) -> "TesterPlan":
        if m is not None and m < 1:
            raise InfeasiblePlan("Sample override must be positive, got {}.".format(m))
        return replace(self, m_override=m)

    def to_json_dict(self) -> dict:
        return {
            "eps1": self.eps1,
            "eps2": self.eps2,
            "delta": self.delta,
            "k": self.k,
            "c": self.c,
            "alpha": self.alpha,
            "low_bound": self.low_bound,
            "high_bound": self.high_bound,
            "threshold": self.threshold,
            "tau": self.tau,
            "loose_error_target": self.loose_error_target,
            "theory_samples": self.theory_samples,
            "m_samples": self.m_samples,
            "mode": self.mode,
        }


def compute_plan(
    eps1: float,
    eps2: float,
    delta: float,
    k: int,
    c: Optional[float] = None,
    m: Optional[int] = None,
) -> TesterPlan:
    if c is None:
        c = pauliprobe_settings.get_taylor_constant()
    if not 0 <= eps1 < eps2 <= 1:
        raise InfeasiblePlan(
            "Need 0 <= eps1 < eps2 <= 1, got eps1={}, eps2={}.".format(eps1, eps2)
        )
    if not 0 < delta < 1:
        raise InfeasiblePlan("delta must lie in (0, 1), got {}.".format(delta))
    if c <= 0:
        raise InfeasiblePlan("c must be positive, got {}.".format(c))
    if k < 0:
        raise InfeasiblePlan("k must be non-negative, got {}.".format(k))
    if m is not None and m < 1:
        raise InfeasiblePlan("Sample override must be positive, got {}.".format(m))

    gap = eps2 - eps1
    alpha = gap / (3 * c)
    if alpha > TAYLOR_REGIME_MAX_TIME:
        raise InfeasiblePlan(
            "alpha = (eps2 - eps1)/(3c) = {:.6g} > 1/2 leaves the "
            "Taylor regime.".format(alpha)
        )
    low_bound = gap * (2 * eps1 + eps2) / (9 * c)
    high_bound = gap * (eps1 + 2 * eps2) / (9 * c)
    threshold = (low_bound ** 2 + high_bound ** 2) / 2
    tau = (high_bound ** 2 - low_bound ** 2) / 2
    theory_samples = int(math.ceil(math.log(2 / delta) / (2 * tau ** 2)))

    plan = TesterPlan(
        eps1=eps1,
        eps2=eps2,
        delta=delta,
        k=k,
        c=c,
        alpha=alpha,
        low_bound=low_bound,
        high_bound=high_bound,
        threshold=threshold,
        tau=tau,
        theory_samples=theory_samples,
        m_override=m,
    )
    logger.debug("Tester plan: %s", plan)
    return plan


@dataclass(frozen=True)
class TestVerdict:
    decision: str
    estimated_tail_mass: float
    plan: TesterPlan
    ledger: QueryLedger
    samples: int

    # Not a pytest test class.
    __test__ = False

    @property
    def is_far(self) -> bool:
        return self.decision == Decision.far_from_local

    def to_json_dict(self) -> dict:
        return {
            "decision": self.decision,
            "estimated_tail_mass": self.estimated_tail_mass,
            "samples": self.samples,
            "plan": self.plan.to_json_dict(),
            "ledger": self.ledger.to_json_dict(),
        }


def _decide(plan: TesterPlan, outside: int, samples: int, ledger: QueryLedger):
    estimated = outside / samples
    if estimated > plan.threshold:
        decision = Decision.far_from_local
    else:
        decision = Decision.close_to_local
    return TestVerdict(decision, estimated, plan, ledger.snapshot(), samples)


def _run(oracle: EvolutionOracle, plan: TesterPlan, outside_mask: np.ndarray):
    outside = 0
    for chunk in oracle.iter_bell_sample_indices(plan.alpha, plan.m_samples):
        outside += int(np.count_nonzero(outside_mask[chunk]))
    return _decide(plan, outside, plan.m_samples, oracle.ledger)


def test_locality(oracle: EvolutionOracle, plan: TesterPlan) -> TestVerdict:
    """Decide whether the hidden H is eps1-close to or eps2-far from k-local."""
    return test_property(oracle, plan, LocalityProperty(plan.k))


def test_property(oracle: EvolutionOracle, plan: TesterPlan, member) -> TestVerdict:
    """
    Same as :func:`test_locality` for the property "supported on S", where
    ``member`` is a PauliProperty or a predicate on PauliStrings.
    """
    mask = as_property(member).mask(oracle.n)
    return _run(oracle, plan, ~mask)


def test_many(
    oracle: EvolutionOracle,
    plans_and_predicates: Sequence[Tuple[TesterPlan, object]],
    delta_total: float,
    shared_stream: bool = True,
) -> List[TestVerdict]:
    """
    Test M properties so that all verdicts are simultaneously correct with
    probability >= 1 - delta_total (each test planned with delta_total / M).

    With ``shared_stream`` the tests that query at the same alpha classify a
    single Bell-sample stream, whose length is the largest m_samples among them.
    """
    if not plans_and_predicates:
        raise ValueError("test_many needs at least one (plan, predicate) pair.")
    if not 0 < delta_total < 1:
        raise InfeasiblePlan(
            "delta_total must lie in (0, 1), got {}.".format(delta_total)
        )

    per_test = delta_total / len(plans_and_predicates)
    entries = [
        (plan.with_delta(per_test), ~as_property(member).mask(oracle.n))
        for plan, member in plans_and_predicates
    ]

    if not shared_stream:
        return [_run(oracle, plan, outside_mask) for plan, outside_mask in entries]

    groups = OrderedDict()
    for position, (plan, _) in enumerate(entries):
        groups.setdefault(plan.alpha, []).append(position)

    verdicts: List[Optional[TestVerdict]] = [None] * len(entries)
    for alpha, positions in groups.items():
        longest = max(entries[p][0].m_samples for p in positions)
        outside = {p: 0 for p in positions}
        offset = 0
        for chunk in oracle.iter_bell_sample_indices(alpha, longest):
            for p in positions:
                wanted = entries[p][0].m_samples - offset
                if wanted > 0:
                    outside[p] += int(np.count_nonzero(entries[p][1][chunk[:wanted]]))
            offset += chunk.shape[0]
        for p in positions:
            plan = entries[p][0]
            verdicts[p] = _decide(plan, outside[p], plan.m_samples, oracle.ledger)
    return verdicts
