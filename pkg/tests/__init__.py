"""
Shared fixtures for the pauli-probe test suite: small named Hamiltonians,
fixed seeds, and an oracle factory.
"""
import os
import shutil
import tempfile

import numpy as np

from pauliprobe.oracles import EvolutionOracle
from pauliprobe.pauli import Hamiltonian, PauliSpectrum

os.environ.setdefault("DJANGO_SETTINGS_MODULE", "tests.settings")

SEED = 20240611


def hamiltonian(n, terms, **kwargs):
    """Build a Hamiltonian from {label: coefficient}."""
    return Hamiltonian.from_dict(n, terms, **kwargs)


def random_matrix(n, seed=SEED):
    rng = np.random.default_rng(seed)
    size = 2 ** n
    return rng.normal(size=(size, size)) + 1j * rng.normal(size=(size, size))


def random_spectrum(n, seed=SEED, real=False):
    rng = np.random.default_rng(seed)
    coefficients = rng.normal(size=4 ** n)
    if not real:
        coefficients = coefficients + 1j * rng.normal(size=4 ** n)
    return PauliSpectrum(n, coefficients)


def oracle_for(terms, n=1, seed=SEED, **kwargs):
    return EvolutionOracle(hamiltonian(n, terms, **kwargs), seed=seed)


class TemporaryDirectoryMixin:
    """Give each test a scratch directory in ``self.tmpdir``."""

    def setUp(self):
        super().setUp()
        self.tmpdir = tempfile.mkdtemp(prefix="pauliprobe-test-")

    def tearDown(self):
        shutil.rmtree(self.tmpdir, ignore_errors=True)
        super().tearDown()
