"""
Exact time evolution U(t) = exp(-iHt) and the short-time Taylor facts it obeys.
"""
import logging
from dataclasses import dataclass
from typing import TYPE_CHECKING, Optional

import numpy as np
from scipy import linalg

from . import settings as pauliprobe_settings
from .enums import InstanceLabel
from .exceptions import NotNormalized, SpectrumError
from .pauli import Hamiltonian, PauliSpectrum, spectrum_from_dense, tail_two_norm

if TYPE_CHECKING:  # pragma: no cover
    from .tester import TesterPlan

logger = logging.getLogger(__name__)

TAYLOR_REGIME_MAX_TIME = 0.5


def _require_normalized(hamiltonian: Hamiltonian):
    if hamiltonian.normalized:
        return
    norm = hamiltonian.inf_norm()
    if norm > 1 + pauliprobe_settings.get_norm_rtol():
        raise NotNormalized(
            "Time evolution needs ||H||_inf <= 1, got {:.12g}.".format(norm)
        )


def evolve_unitary(hamiltonian: Hamiltonian, t: float) -> np.ndarray:
    """Dense U(t) = V exp(-it Lambda) V^dagger from the cached eigendecomposition."""
    _require_normalized(hamiltonian)
    eigenvalues, eigenvectors = hamiltonian.eigh()
    phases = np.exp(-1j * t * eigenvalues)
    return (eigenvectors * phases) @ eigenvectors.conj().T


class UnitarySpectrum:
    """Pauli coefficients u_x of U(t); (|u_x|^2)_x is the Bell-sampling distribution."""

    def __init__(self, spectrum: PauliSpectrum, t: float, source: Hamiltonian):
        total = float(np.sum(np.abs(spectrum.coefficients) ** 2))
        if abs(total - 1) > pauliprobe_settings.get_norm_rtol():
            raise SpectrumError(
                "Unitary spectrum has squared 2-norm {:.15g}, expected 1.".format(total)
            )
        self.spectrum = spectrum
        self.t = t
        self.source = source

    @property
    def n(self) -> int:
        return self.spectrum.n

    @property
    def coefficients(self) -> np.ndarray:
        return self.spectrum.coefficients

    def probabilities(self) -> np.ndarray:
        """(|u_x|^2)_x renormalized to sum to exactly 1."""
        probabilities = np.abs(self.spectrum.coefficients) ** 2
        return probabilities / probabilities.sum()

    def tail_two_norm(self, k: int) -> float:
        return tail_two_norm(self.spectrum, k)

    def to_json_dict(self) -> dict:
        data = self.spectrum.to_json_dict()
        data["t"] = self.t
        return data


def unitary_spectrum(hamiltonian: Hamiltonian, t: float) -> UnitarySpectrum:
    return UnitarySpectrum(
        spectrum_from_dense(evolve_unitary(hamiltonian, t)), t, hamiltonian
    )


@dataclass(frozen=True)
class TaylorRemainder:
    t: float
    remainder_norm: float
    bound: float
    c: float

    @property
    def within_bound(self) -> bool:
        return self.remainder_norm <= self.bound

    @property
    def normalized_remainder(self) -> float:
        """||R_2(t)||_inf for the configured c; at most 1 when the bound holds."""
        return self.remainder_norm / (self.c * self.t ** 2)


def _check_taylor_time(t: float):
    if not 0 < t <= TAYLOR_REGIME_MAX_TIME:
        raise ValueError("t must lie in (0, 1/2], got {!r}.".format(t))


def remainder_check(
    hamiltonian: Hamiltonian, t: float, c: Optional[float] = None
) -> TaylorRemainder:
    """Exact ||U(t) - Id + itH||_inf paired with the bound c t^2."""
    _check_taylor_time(t)
    if c is None:
        c = pauliprobe_settings.get_taylor_constant()
    dense = hamiltonian.dense()
    remainder = evolve_unitary(hamiltonian, t) - np.eye(dense.shape[0]) + 1j * t * dense
    remainder_norm = float(linalg.svdvals(remainder)[0])
    return TaylorRemainder(t=t, remainder_norm=remainder_norm, bound=c * t ** 2, c=c)


@dataclass(frozen=True)
class TaylorDeviation:
    """
    How far the Pauli coefficients of U(alpha) are from first order:
    ``total`` is |(u_0 - 1) + i alpha h_0|^2 + sum_{x != 0} |u_x + i alpha h_x|^2
    (bounded by c^2 alpha^4) and ``max_offdiagonal`` is max_{x != 0}
    |u_x + i alpha h_x| (bounded by c alpha^2).
    """

    alpha: float
    total: float
    max_offdiagonal: float
    c: float

    @property
    def total_bound(self) -> float:
        return self.c ** 2 * self.alpha ** 4

    @property
    def coefficient_bound(self) -> float:
        return self.c * self.alpha ** 2

    @property
    def within_bound(self) -> bool:
        return (
            self.total <= self.total_bound
            and self.max_offdiagonal <= self.coefficient_bound
        )


def taylor_coefficient_deviation(
    hamiltonian: Hamiltonian, alpha: float, c: Optional[float] = None
) -> TaylorDeviation:
    _check_taylor_time(alpha)
    if c is None:
        c = pauliprobe_settings.get_taylor_constant()
    u = unitary_spectrum(hamiltonian, alpha).coefficients
    deviation = u + 1j * alpha * hamiltonian.coefficients
    deviation[0] -= 1
    magnitudes = np.abs(deviation)
    return TaylorDeviation(
        alpha=alpha,
        total=float(np.sum(magnitudes ** 2)),
        max_offdiagonal=float(magnitudes[1:].max()) if magnitudes.size > 1 else 0.0,
        c=c,
    )


@dataclass(frozen=True)
class ClaimCheck:
    """Exact ||U(alpha)_{>k}||_2 against the close/far bounds of a tester plan."""

    exact_tail: float
    unitary_tail: float
    low_bound: float
    high_bound: float

    def holds_for(self, label: str) -> bool:
        if label == InstanceLabel.close:
            return self.unitary_tail <= self.low_bound
        if label == InstanceLabel.far:
            return self.unitary_tail >= self.high_bound
        raise ValueError("Unknown instance label {!r}.".format(label))


def claim_bounds_check(
    hamiltonian: Hamiltonian, k: int, plan: "TesterPlan"
) -> ClaimCheck:
    return ClaimCheck(
        exact_tail=hamiltonian.distance_to_locality(k),
        unitary_tail=unitary_spectrum(hamiltonian, plan.alpha).tail_two_norm(k),
        low_bound=plan.low_bound,
        high_bound=plan.high_bound,
    )
