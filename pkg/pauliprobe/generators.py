"""
Random k-local Hamiltonians and planted close/far instances with exactly
measured distance from k-locality.
"""
import logging
from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import settings as pauliprobe_settings
from .enums import InstanceLabel
from .exceptions import RejectionBudgetExhausted
from .pauli import Hamiltonian, all_weights, check_qubit_count
from .utils import INSTANCE_STREAM, make_rng

logger = logging.getLogger(__name__)

DEFAULT_DENSITY = 0.5


def _check_locality(n: int, k: int):
    check_qubit_count(n)
    if not 1 <= k <= n:
        raise ValueError("Need 1 <= k <= n, got k={k}, n={n}.".format(k=k, n=n))


def _check_density(density: float):
    if not 0 < density <= 1:
        raise ValueError("density must lie in (0, 1], got {!r}.".format(density))


def _draw_coefficients(rng, eligible: np.ndarray, density: float) -> np.ndarray:
    """
    Include each eligible string with probability ``density`` and give it a
    coefficient uniform in [-1, 1]. Both draws span every index so the stream
    consumption does not depend on the outcome.
    """
    size = eligible.shape[0]
    picked = (rng.random(size) < density) & eligible
    values = rng.uniform(-1.0, 1.0, size)
    return np.where(picked, values, 0.0)


def random_k_local(n: int, k: int, density: float, seed: int) -> Hamiltonian:
    """
    A random k-local Hamiltonian with ||H||_inf = 1 (or the zero Hamiltonian if
    the draw came up empty).
    """
    _check_locality(n, k)
    _check_density(density)
    rng = make_rng(seed, INSTANCE_STREAM)
    coefficients = _draw_coefficients(rng, all_weights(n) <= k, density)
    hamiltonian = Hamiltonian.from_coefficients(n, coefficients, declared_locality=k)
    return hamiltonian.normalize()


@dataclass(frozen=True)
class PlantedInstance:
    hamiltonian: Hamiltonian
    exact_tail: float
    label: str
    k: int
    seed: int
    eps1: float
    eps2: float
    attempts: int = 1

    def to_json_dict(self) -> dict:
        data = self.hamiltonian.spectrum.to_json_dict()
        data.update(
            {
                "exact_tail": self.exact_tail,
                "label": self.label,
                "k": self.k,
                "seed": self.seed,
            }
        )
        return data


def _unit(coefficients: np.ndarray) -> np.ndarray:
    norm = np.linalg.norm(coefficients)
    return coefficients / norm if norm else coefficients


def _nonempty_part(rng, eligible: np.ndarray, density: float) -> np.ndarray:
    part = _draw_coefficients(rng, eligible, density)
    if not part.any():
        # Force one term so the mixing weight has something to scale.
        index = rng.choice(np.flatnonzero(eligible))
        part[index] = rng.uniform(-1.0, 1.0) or 1.0
    return _unit(part)


def planted_instance(
    n: int,
    k: int,
    eps1: float,
    eps2: float,
    want: str,
    seed: int,
    density: float = DEFAULT_DENSITY,
    budget: Optional[int] = None,
) -> PlantedInstance:
    """
    Draw a normalized Hamiltonian whose exact distance from k-locality,
    measured after normalization, satisfies the requested side of the
    (eps1, eps2) promise.

    The instance mixes a unit k-local part L and a unit heavy part G as
    (1 - w) L + w G before spectral normalization; w is drawn in [0, eps1]
    for Close and in [eps2, 1] for Far, then the draw is rejected until the
    measured tail lands on the right side.
    """
    _check_locality(n, k)
    _check_density(density)
    if not 0 <= eps1 < eps2 <= 1:
        raise ValueError(
            "Need 0 <= eps1 < eps2 <= 1, got eps1={}, eps2={}.".format(eps1, eps2)
        )
    if want not in (InstanceLabel.close, InstanceLabel.far):
        raise ValueError("want must be 'close' or 'far', got {!r}.".format(want))
    if budget is None:
        budget = pauliprobe_settings.get_rejection_budget()

    weights = all_weights(n)
    local, heavy = weights <= k, weights > k
    if want == InstanceLabel.far and not heavy.any():
        raise RejectionBudgetExhausted(
            0, 0.0, "No Pauli string has weight > {k} on {n} qubits.".format(k=k, n=n)
        )

    rng = make_rng(seed, INSTANCE_STREAM)
    best_tail = 0.0 if want == InstanceLabel.far else float("inf")

    for attempt in range(1, budget + 1):
        local_part = _nonempty_part(rng, local, density)
        if want == InstanceLabel.close and (eps1 == 0 or not heavy.any()):
            hamiltonian = Hamiltonian.from_coefficients(
                n, local_part, declared_locality=k
            ).normalize()
        else:
            heavy_part = _nonempty_part(rng, heavy, density)
            if want == InstanceLabel.close:
                w = rng.uniform(0.0, eps1)
            else:
                w = rng.uniform(eps2, 1.0)
            hamiltonian = Hamiltonian.from_coefficients(
                n, (1 - w) * local_part + w * heavy_part
            ).normalize()

        exact_tail = hamiltonian.distance_to_locality(k)
        if want == InstanceLabel.close and exact_tail <= eps1:
            return PlantedInstance(
                hamiltonian, exact_tail, want, k, seed, eps1, eps2, attempt
            )
        if want == InstanceLabel.far and exact_tail >= eps2:
            return PlantedInstance(
                hamiltonian, exact_tail, want, k, seed, eps1, eps2, attempt
            )

        if want == InstanceLabel.far:
            best_tail = max(best_tail, exact_tail)
        else:
            best_tail = min(best_tail, exact_tail)
        if attempt == budget // 2:
            logger.warning(
                "planted_instance(n=%d, k=%d, eps=(%g, %g), %s) still rejecting "
                "after %d attempts; best tail %.6g",
                n,
                k,
                eps1,
                eps2,
                want,
                attempt,
                best_tail,
            )

    raise RejectionBudgetExhausted(budget, best_tail)
