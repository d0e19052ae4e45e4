"""
Utility functions shared across pauli-probe.
"""
from typing import Sequence, Tuple

import numpy as np
from scipy import stats

# Stream identifiers, so that instance generation and oracle sampling for the
# same trial seed never share random numbers.
INSTANCE_STREAM = 0
ORACLE_STREAM = 1


def seed_sequence(seed: int, *stream: int) -> np.random.SeedSequence:
    """Return a reproducible SeedSequence for ``seed`` and a stream path."""
    return np.random.SeedSequence(entropy=int(seed), spawn_key=tuple(stream))


def make_rng(seed, *stream: int) -> np.random.Generator:
    """
    Build a counter-based (Philox) generator.

    ``seed`` may be an int or an existing SeedSequence; ``stream`` selects an
    independent child stream of an int seed.
    """
    if isinstance(seed, np.random.SeedSequence):
        seq = seed
    else:
        seq = seed_sequence(seed, *stream)
    return np.random.Generator(np.random.Philox(seq))


def derive_seed(base_seed: int, index: int) -> int:
    """Per-trial seed: base + i."""
    return int(base_seed) + int(index)


def wilson_interval(
    successes: int, trials: int, confidence=0.95
) -> Tuple[float, float]:
    """
    Wilson score interval for a binomial proportion.

    Returns (0.0, 1.0) when there are no trials.
    """
    if trials <= 0:
        return 0.0, 1.0
    ci = stats.binomtest(int(successes), int(trials)).proportion_ci(
        confidence_level=confidence, method="wilson"
    )
    return float(ci.low), float(ci.high)


def format_float(value) -> str:
    """Stable text form for CSV cells (shortest round-tripping repr)."""
    if value is None:
        return ""
    if isinstance(value, (bool, np.bool_)):
        return "1" if value else "0"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    return repr(float(value))


def total_variation(p: Sequence[float], q: Sequence[float]) -> float:
    """Total-variation distance between two probability vectors."""
    return 0.5 * float(np.abs(np.asarray(p) - np.asarray(q)).sum())
