"""
Simulated query access to U(t): Bell-basis (Choi) sampling and single Pauli
coefficient estimation, both with shot noise and metered in a QueryLedger.
"""
import logging
import math
import threading
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Dict, Iterator, List, Optional, Sequence

import numpy as np

from . import settings as pauliprobe_settings
from .evolution import TAYLOR_REGIME_MAX_TIME, UnitarySpectrum, unitary_spectrum
from .exceptions import VerificationModeRequired
from .pauli import Hamiltonian, PauliString
from .utils import ORACLE_STREAM, make_rng, seed_sequence

logger = logging.getLogger(__name__)


@dataclass
class QueryLedger:
    """Running count of U(t) applications and the total evolution time."""

    query_count: int = 0
    total_evolution_time: float = 0.0

    def record(self, queries: int, t: float):
        self.query_count += int(queries)
        self.total_evolution_time += int(queries) * abs(t)

    def merge(self, other: "QueryLedger"):
        self.query_count += other.query_count
        self.total_evolution_time += other.total_evolution_time

    def snapshot(self) -> "QueryLedger":
        return QueryLedger(self.query_count, self.total_evolution_time)

    def to_json_dict(self) -> dict:
        return {
            "queries": self.query_count,
            "evolution_time": self.total_evolution_time,
        }


class AliasTable:
    """
    Vose's alias method: O(K) setup, O(1) per draw, vectorized over draws.
    """

    def __init__(self, probabilities):
        probabilities = np.asarray(probabilities, dtype=np.float64)
        size = probabilities.shape[0]
        scaled = probabilities * (size / probabilities.sum())
        prob = np.zeros(size, dtype=np.float64)
        alias = np.arange(size, dtype=np.int64)

        small = [i for i in range(size) if scaled[i] < 1.0]
        large = [i for i in range(size) if scaled[i] >= 1.0]
        while small and large:
            lesser = small.pop()
            greater = large.pop()
            prob[lesser] = scaled[lesser]
            alias[lesser] = greater
            scaled[greater] = (scaled[greater] + scaled[lesser]) - 1.0
            if scaled[greater] < 1.0:
                small.append(greater)
            else:
                large.append(greater)
        # Rounding can strand entries; zero-probability ones must never be kept.
        heaviest = int(np.argmax(probabilities))
        for leftover in large + small:
            if probabilities[leftover] > 0:
                prob[leftover] = 1.0
            else:
                alias[leftover] = heaviest

        prob.setflags(write=False)
        alias.setflags(write=False)
        self.prob = prob
        self.alias = alias

    def __len__(self):
        return self.prob.shape[0]

    def draw(self, rng: np.random.Generator, count: int) -> np.ndarray:
        columns = rng.integers(0, len(self), size=count)
        keep = rng.random(count) < self.prob[columns]
        return np.where(keep, columns, self.alias[columns])


def coefficient_sample_count(beta: float, delta: float) -> int:
    """
    Bernoulli samples per part (real, imaginary) of one coefficient estimate:
    m2 = ceil(4 ln(4/delta) / beta^2), i.e. each part to beta / sqrt(2) with
    failure delta / 2 by the two-sided Hoeffding bound.
    """
    if not 0 < beta <= 1:
        raise ValueError("beta must lie in (0, 1], got {!r}.".format(beta))
    if not 0 < delta < 1:
        raise ValueError("delta must lie in (0, 1), got {!r}.".format(delta))
    return int(math.ceil(4 * math.log(4 / delta) / beta ** 2))


def _bernoulli_estimate(rng: np.random.Generator, u: complex, samples: int) -> complex:
    p_re = min(max((1 + u.real) / 2, 0.0), 1.0)
    p_im = min(max((1 + u.imag) / 2, 0.0), 1.0)
    hits_re = rng.binomial(samples, p_re)
    hits_im = rng.binomial(samples, p_im)
    return complex(2 * hits_re / samples - 1, 2 * hits_im / samples - 1)


class EvolutionOracle:
    """
    Query access to U(t) = exp(-iHt) for a hidden Hamiltonian.

    Algorithms only see ``n`` and the query operations; the exact
    distribution is available to verification code inside
    :func:`pauliprobe.context_managers.verification_mode`.
    An oracle owns its random stream and ledger and must not be shared
    between threads while querying.
    """

    def __init__(self, hamiltonian: Hamiltonian, seed=0, verification: bool = False):
        self.__hamiltonian = hamiltonian
        if isinstance(seed, np.random.SeedSequence):
            self._seed_sequence = seed
        else:
            self._seed_sequence = seed_sequence(seed, ORACLE_STREAM)
        self._rng = make_rng(self._seed_sequence)
        self.ledger = QueryLedger()
        self.verification_mode = verification
        self._cache_lock = threading.Lock()
        self._spectra: Dict[float, UnitarySpectrum] = {}
        self._alias_tables: Dict[float, AliasTable] = {}

    @property
    def n(self) -> int:
        return self.__hamiltonian.n

    def _spectrum(self, t: float) -> UnitarySpectrum:
        spectrum = self._spectra.get(t)
        if spectrum is None:
            with self._cache_lock:
                spectrum = self._spectra.get(t)
                if spectrum is None:
                    spectrum = unitary_spectrum(self.__hamiltonian, t)
                    self._spectra[t] = spectrum
        return spectrum

    def _alias_table(self, t: float) -> AliasTable:
        table = self._alias_tables.get(t)
        if table is None:
            table = AliasTable(self._spectrum(t).probabilities())
            with self._cache_lock:
                self._alias_tables.setdefault(t, table)
        return self._alias_tables[t]

    @staticmethod
    def _warn_outside_regime(t: float):
        if abs(t) > TAYLOR_REGIME_MAX_TIME:
            logger.warning(
                "Querying U(t) at |t| = %g > 1/2, outside the Taylor regime", t
            )

    def iter_bell_sample_indices(self, t: float, m: int) -> Iterator[np.ndarray]:
        """
        Yield m Bell-sample outcomes (as Pauli indices) in chunks of at most
        PAULIPROBE_SAMPLE_CHUNK; each chunk is metered as it is drawn.
        """
        if m < 1:
            raise ValueError("Need at least one sample, got m={}.".format(m))
        self._warn_outside_regime(t)
        table = self._alias_table(t)
        chunk = pauliprobe_settings.get_sample_chunk()
        remaining = int(m)
        while remaining:
            count = min(chunk, remaining)
            self.ledger.record(count, t)
            remaining -= count
            yield table.draw(self._rng, count)

    def bell_sample_indices(self, t: float, m: int) -> np.ndarray:
        return np.concatenate(list(self.iter_bell_sample_indices(t, m)))

    def bell_sample(self, t: float, m: int) -> List[PauliString]:
        """m independent draws from (|u_x|^2)_x for U(t)."""
        n = self.n
        return [
            PauliString.from_index(n, int(index))
            for index in self.bell_sample_indices(t, m)
        ]

    def estimate_coefficient(
        self, t: float, x: PauliString, beta: float, delta: float
    ) -> complex:
        """
        Estimate u_x of U(t) to within beta with probability >= 1 - delta,
        using 2 m2 queries.
        """
        samples = coefficient_sample_count(beta, delta)
        self._warn_outside_regime(t)
        u = self._spectrum(t).spectrum[x]
        self.ledger.record(2 * samples, t)
        return _bernoulli_estimate(self._rng, u, samples)

    def estimate_coefficients(
        self,
        t: float,
        strings: Sequence[PauliString],
        beta: float,
        delta: float,
        threads: Optional[int] = None,
    ) -> Dict[PauliString, complex]:
        """
        Run :meth:`estimate_coefficient` for several strings, each on its own
        child random stream, in parallel. The ledger is updated once all
        estimates are in.
        """
        samples = coefficient_sample_count(beta, delta)
        self._warn_outside_regime(t)
        spectrum = self._spectrum(t).spectrum
        children = self._seed_sequence.spawn(len(strings))
        jobs = [(make_rng(child), spectrum[x]) for child, x in zip(children, strings)]
        if threads is None:
            threads = pauliprobe_settings.get_thread_count()

        def run(job):
            rng, u = job
            return _bernoulli_estimate(rng, u, samples)

        if threads > 1 and len(jobs) > 1:
            with ThreadPoolExecutor(max_workers=threads) as pool:
                estimates = list(pool.map(run, jobs))
        else:
            estimates = [run(job) for job in jobs]

        for _ in strings:
            self.ledger.record(2 * samples, t)
        return dict(zip(strings, estimates))

    def exact_distribution(self, t: float) -> np.ndarray:
        """
        The exact (|u_x|^2)_x indexed by Pauli index. Not metered; only
        available in verification mode.
        """
        if not self.verification_mode:
            raise VerificationModeRequired(
                "exact_distribution is a verification back door; "
                "wrap the call in verification_mode(oracle)."
            )
        return self._spectrum(t).probabilities()
