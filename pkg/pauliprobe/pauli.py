"""
Pauli strings, Pauli spectra and the dense <-> spectrum transforms.

A Pauli string on n qubits is stored as two n-bit masks: the X part (set for
X and Y) and the Z part (set for Z and Y). Qubit 0 is the leftmost letter of
the word, the most significant bit of both masks, and the leftmost factor of
the Kronecker product. Spectra are indexed by the base-4 number whose digits
are the letters (I=0, X=1, Y=2, Z=3), qubit 0 most significant.
"""
import json
import logging
import threading
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Dict, Iterable, Iterator, Mapping, Optional, Tuple, Union

import numpy as np
from scipy import linalg

from . import settings as pauliprobe_settings
from .exceptions import (
    EigendecompositionError,
    InvalidPauliString,
    NotNormalized,
    QubitCapExceeded,
    SpectrumError,
)

logger = logging.getLogger(__name__)

LETTERS = "IXYZ"

_SIGMA = np.array(
    [
        [[1, 0], [0, 1]],
        [[0, 1], [1, 0]],
        [[0, -1j], [1j, 0]],
        [[1, 0], [0, -1]],
    ],
    dtype=np.complex128,
)

# Per-qubit change of basis. For one 2x2 block m vectorized as m[2r + c]:
#   a_l = Tr[sigma_l m] / 2 = sum_{r,c} sigma_l[c, r] m[r, c] / 2
_FORWARD = _SIGMA.transpose(0, 2, 1).reshape(4, 4) / 2
#   m[r, c] = sum_l a_l sigma_l[r, c]
_INVERSE = _SIGMA.reshape(4, 4).T.copy()


def check_qubit_count(n: int) -> int:
    """Validate a qubit count against the configured cap."""
    if int(n) != n or n < 1:
        raise SpectrumError(
            "Qubit count must be a positive integer, got {!r}.".format(n)
        )
    cap = pauliprobe_settings.get_qubit_cap()
    if n > cap:
        raise QubitCapExceeded(n, cap)
    return int(n)


def _letter_bits(letter: int) -> Tuple[int, int]:
    return int(letter in (1, 2)), int(letter in (2, 3))


@dataclass(frozen=True)
class PauliString:
    """A length-n word over {I, X, Y, Z}, stored as X and Z bitmasks."""

    n: int
    x_mask: int
    z_mask: int

    def __post_init__(self):
        if self.n < 1:
            raise InvalidPauliString("A Pauli string needs at least one qubit.")
        limit = 1 << self.n
        if not (0 <= self.x_mask < limit and 0 <= self.z_mask < limit):
            raise InvalidPauliString(
                "Masks do not fit in {n} qubits.".format(n=self.n)
            )

    @classmethod
    def from_word(cls, word: Iterable[int]) -> "PauliString":
        """Build from a sequence of letters in {0, 1, 2, 3}."""
        word = tuple(word)
        if not word:
            raise InvalidPauliString("Empty Pauli word.")
        x_mask = z_mask = 0
        for letter in word:
            if letter not in (0, 1, 2, 3):
                raise InvalidPauliString(
                    "Pauli letters must be in {{0,1,2,3}}, got {!r}.".format(letter)
                )
            x_bit, z_bit = _letter_bits(letter)
            x_mask = (x_mask << 1) | x_bit
            z_mask = (z_mask << 1) | z_bit
        return cls(len(word), x_mask, z_mask)

    @classmethod
    def from_label(cls, label: str) -> "PauliString":
        """Build from a label such as ``"IXYZ"``."""
        try:
            return cls.from_word(LETTERS.index(ch) for ch in label.upper())
        except ValueError:
            raise InvalidPauliString("Bad Pauli label: {!r}".format(label))

    @classmethod
    def from_index(cls, n: int, index: int) -> "PauliString":
        """Inverse of :attr:`index`."""
        if not 0 <= index < 4 ** n:
            raise InvalidPauliString(
                "Index {i} out of range for {n} qubits.".format(i=index, n=n)
            )
        word = []
        for _ in range(n):
            index, letter = divmod(index, 4)
            word.append(letter)
        return cls.from_word(reversed(word))

    @classmethod
    def identity(cls, n: int) -> "PauliString":
        return cls(n, 0, 0)

    @property
    def word(self) -> Tuple[int, ...]:
        letters = []
        for q in range(self.n):
            bit = self.n - 1 - q
            x_bit = (self.x_mask >> bit) & 1
            z_bit = (self.z_mask >> bit) & 1
            letters.append((0, 3, 1, 2)[x_bit * 2 + z_bit])
        return tuple(letters)

    @property
    def label(self) -> str:
        return "".join(LETTERS[letter] for letter in self.word)

    @property
    def index(self) -> int:
        index = 0
        for letter in self.word:
            index = index * 4 + letter
        return index

    @property
    def weight(self) -> int:
        return bin(self.x_mask | self.z_mask).count("1")

    def is_identity(self) -> bool:
        return not (self.x_mask or self.z_mask)

    def matrix(self) -> np.ndarray:
        """Dense 2^n x 2^n matrix of sigma_x."""
        out = np.ones((1, 1), dtype=np.complex128)
        for letter in self.word:
            out = np.kron(out, _SIGMA[letter])
        return out

    def __str__(self):
        return self.label


def weight(p: PauliString) -> int:
    """Number of non-identity letters."""
    return p.weight


PauliKey = Union[PauliString, str, int]


@lru_cache(maxsize=None)
def _weights(n: int) -> np.ndarray:
    weights = np.zeros(4 ** n, dtype=np.int8)
    index = np.arange(4 ** n, dtype=np.int64)
    for _ in range(n):
        weights += (index % 4 != 0).astype(np.int8)
        index //= 4
    weights.setflags(write=False)
    return weights


def all_weights(n: int) -> np.ndarray:
    """Read-only weight table over every Pauli index for n qubits."""
    return _weights(check_qubit_count(n))


class PauliSpectrum:
    """
    Complex Pauli coefficients a_x of an n-qubit operator A = sum_x a_x sigma_x.

    Coefficients are held in a read-only dense vector indexed by the Pauli
    index; the mapping view (``items``, ``to_dict``) lists non-zero entries.
    """

    def __init__(self, n: int, coefficients):
        self.n = check_qubit_count(n)
        coefficients = np.array(coefficients, dtype=np.complex128).reshape(-1)
        if coefficients.shape != (4 ** self.n,):
            raise SpectrumError(
                "Expected {size} coefficients for {n} qubits, got {got}.".format(
                    size=4 ** self.n, n=self.n, got=coefficients.shape[0]
                )
            )
        if not np.all(np.isfinite(coefficients)):
            raise SpectrumError("Pauli coefficients must be finite.")
        coefficients.setflags(write=False)
        self.coefficients = coefficients

    @classmethod
    def zeros(cls, n: int) -> "PauliSpectrum":
        return cls(n, np.zeros(4 ** check_qubit_count(n), dtype=np.complex128))

    @classmethod
    def from_dict(cls, n: int, mapping: Mapping[PauliKey, complex]) -> "PauliSpectrum":
        coefficients = np.zeros(4 ** check_qubit_count(n), dtype=np.complex128)
        for key, value in mapping.items():
            coefficients[cls._index_of(n, key)] += value
        return cls(n, coefficients)

    @staticmethod
    def _index_of(n: int, key: PauliKey) -> int:
        if isinstance(key, str):
            key = PauliString.from_label(key)
        if isinstance(key, PauliString):
            if key.n != n:
                raise SpectrumError(
                    "Pauli string {key} has {kn} qubits, spectrum has {n}.".format(
                        key=key, kn=key.n, n=n
                    )
                )
            return key.index
        index = int(key)
        if not 0 <= index < 4 ** n:
            raise SpectrumError("Pauli index {} out of range.".format(index))
        return index

    def __getitem__(self, key: PauliKey) -> complex:
        return complex(self.coefficients[self._index_of(self.n, key)])

    def __len__(self):
        return int(np.count_nonzero(self.coefficients))

    def items(self) -> Iterator[Tuple[PauliString, complex]]:
        """Non-zero (PauliString, coefficient) pairs in index order."""
        for index in np.flatnonzero(self.coefficients):
            yield PauliString.from_index(self.n, int(index)), complex(
                self.coefficients[index]
            )

    def support(self) -> np.ndarray:
        """Indices of the non-zero coefficients."""
        return np.flatnonzero(self.coefficients)

    def to_dict(self) -> Dict[str, complex]:
        return {p.label: value for p, value in self.items()}

    def is_real(self) -> bool:
        return not np.any(self.coefficients.imag)

    def two_norm(self) -> float:
        return float(np.sqrt(np.sum(np.abs(self.coefficients) ** 2)))

    def __add__(self, other: "PauliSpectrum") -> "PauliSpectrum":
        self._check_compatible(other)
        return PauliSpectrum(self.n, self.coefficients + other.coefficients)

    def __sub__(self, other: "PauliSpectrum") -> "PauliSpectrum":
        self._check_compatible(other)
        return PauliSpectrum(self.n, self.coefficients - other.coefficients)

    def __mul__(self, scalar) -> "PauliSpectrum":
        return PauliSpectrum(self.n, self.coefficients * scalar)

    __rmul__ = __mul__

    def _check_compatible(self, other):
        if not isinstance(other, PauliSpectrum) or other.n != self.n:
            raise SpectrumError("Spectra must share the same qubit count.")

    def to_json_dict(self) -> dict:
        return {
            "n": self.n,
            "coeffs": [
                {"word": p.label, "re": value.real, "im": value.imag}
                for p, value in self.items()
            ],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict())

    @classmethod
    def from_json_dict(cls, data: dict) -> "PauliSpectrum":
        n = int(data["n"])
        mapping: Dict[PauliKey, complex] = {}
        for entry in data.get("coeffs", []):
            word = entry["word"]
            if len(word) != n:
                raise InvalidPauliString(
                    "Word {w!r} does not have {n} letters.".format(w=word, n=n)
                )
            mapping[word] = complex(entry.get("re", 0.0), entry.get("im", 0.0))
        return cls.from_dict(n, mapping)

    @classmethod
    def from_json(cls, text: str) -> "PauliSpectrum":
        return cls.from_json_dict(json.loads(text))

    def __repr__(self):
        return "<PauliSpectrum n={n} terms={terms}>".format(n=self.n, terms=len(self))


def _qubits_of_dimension(dimension: int) -> int:
    n = dimension.bit_length() - 1
    if dimension < 2 or (1 << n) != dimension:
        raise SpectrumError(
            "Matrix dimension {} is not a power of two.".format(dimension)
        )
    return n


def _interleave_permutation(n: int):
    return [axis for q in range(n) for axis in (q, n + q)]


def _apply_per_qubit(vector: np.ndarray, transform: np.ndarray, n: int) -> np.ndarray:
    for q in range(n):
        vector = np.einsum(
            "ij,ajb->aib", transform, vector.reshape(4 ** q, 4, 4 ** (n - q - 1))
        ).reshape(-1)
    return vector


def spectrum_from_dense(matrix) -> PauliSpectrum:
    """
    Pauli spectrum a_x = Tr[sigma_x M] / 2^n of a dense 2^n x 2^n matrix.

    The matrix is vectorized with each qubit's (row bit, column bit) pair
    grouped into one base-4 digit, then a 4x4 change of basis is applied
    along each digit in turn, O(4^n n) overall.
    """
    matrix = np.asarray(matrix, dtype=np.complex128)
    if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
        raise SpectrumError(
            "Expected a square matrix, got shape {}.".format(matrix.shape)
        )
    n = check_qubit_count(_qubits_of_dimension(matrix.shape[0]))
    interleaved = np.transpose(
        matrix.reshape([2] * (2 * n)), _interleave_permutation(n)
    ).reshape(-1)
    return PauliSpectrum(n, _apply_per_qubit(interleaved, _FORWARD, n))


def dense_from_spectrum(spectrum: PauliSpectrum) -> np.ndarray:
    """Dense matrix sum_x a_x sigma_x; inverse of :func:`spectrum_from_dense`."""
    n = check_qubit_count(spectrum.n)
    interleaved = _apply_per_qubit(spectrum.coefficients, _INVERSE, n)
    inverse_permutation = np.argsort(_interleave_permutation(n))
    return np.ascontiguousarray(
        np.transpose(interleaved.reshape([2] * (2 * n)), inverse_permutation).reshape(
            2 ** n, 2 ** n
        )
    )


def spectrum_from_dense_naive(matrix) -> PauliSpectrum:
    """Per-string trace formula; O(16^n), for cross-checking the fast transform."""
    matrix = np.asarray(matrix, dtype=np.complex128)
    n = check_qubit_count(_qubits_of_dimension(matrix.shape[0]))
    coefficients = np.empty(4 ** n, dtype=np.complex128)
    for index in range(4 ** n):
        sigma = PauliString.from_index(n, index).matrix()
        coefficients[index] = np.sum(sigma.T * matrix) / 2 ** n
    return PauliSpectrum(n, coefficients)


def _check_locality_argument(spectrum: PauliSpectrum, k: int):
    if not 0 <= k <= spectrum.n:
        raise ValueError(
            "k must lie in [0, {n}], got {k}.".format(n=spectrum.n, k=k)
        )


def tail_two_norm(spectrum: PauliSpectrum, k: int) -> float:
    """||A_{>k}||_2 = sqrt(sum_{weight(x) > k} |a_x|^2)."""
    _check_locality_argument(spectrum, k)
    tail = spectrum.coefficients[all_weights(spectrum.n) > k]
    return float(np.sqrt(np.sum(np.abs(tail) ** 2)))


def truncate(spectrum: PauliSpectrum, k: int) -> PauliSpectrum:
    """A_{<=k}: keep only strings of weight at most k."""
    _check_locality_argument(spectrum, k)
    return PauliSpectrum(
        spectrum.n,
        np.where(all_weights(spectrum.n) <= k, spectrum.coefficients, 0),
    )


def two_norm(spectrum: PauliSpectrum) -> float:
    return spectrum.two_norm()


def frobenius_two_norm(matrix) -> float:
    """Normalized Frobenius norm sqrt(Tr[M^dagger M] / 2^n)."""
    matrix = np.asarray(matrix, dtype=np.complex128)
    return float(np.sqrt(np.real(np.vdot(matrix, matrix)) / matrix.shape[0]))


def inf_norm(spectrum: PauliSpectrum) -> float:
    """Largest singular value of the dense operator."""
    dense = dense_from_spectrum(spectrum)
    if spectrum.is_real():
        eigenvalues = linalg.eigvalsh(dense)
        return float(np.max(np.abs(eigenvalues)))
    return float(linalg.svdvals(dense)[0])


def pauli_sup_distance(a: PauliSpectrum, b: PauliSpectrum) -> float:
    """max_x |a_x - b_x|."""
    return float(np.max(np.abs((a - b).coefficients)))


class Hamiltonian:
    """
    A Hamiltonian H = sum_x h_x sigma_x with real coefficients.

    ``declared_locality`` (if set) is enforced on construction, as is
    ``normalized`` (||H||_inf <= 1 + 1e-9). The Hermitian eigendecomposition
    is computed once, on first use, and shared read-only afterwards.
    """

    def __init__(
        self,
        spectrum: PauliSpectrum,
        declared_locality: Optional[int] = None,
        normalized: bool = False,
    ):
        if not spectrum.is_real():
            raise SpectrumError(
                "Hamiltonian coefficients must be real "
                "(self-adjoint in the Pauli basis)."
            )
        self.spectrum = spectrum
        self.declared_locality = declared_locality
        self.normalized = normalized
        self._eigh_lock = threading.Lock()
        self._eigh: Optional[Tuple[np.ndarray, np.ndarray]] = None

        if declared_locality is not None:
            if not self.is_k_local(declared_locality):
                raise SpectrumError(
                    "Hamiltonian declared {k}-local has heavier terms.".format(
                        k=declared_locality
                    )
                )
        if normalized:
            norm = self.inf_norm()
            if norm > 1 + pauliprobe_settings.get_norm_rtol():
                raise NotNormalized(
                    "||H||_inf = {norm:.12g} exceeds 1 for a normalized "
                    "Hamiltonian.".format(norm=norm)
                )

    @classmethod
    def from_dict(
        cls, n: int, mapping: Mapping[PauliKey, float], **kwargs
    ) -> "Hamiltonian":
        return cls(PauliSpectrum.from_dict(n, mapping), **kwargs)

    @classmethod
    def from_coefficients(cls, n: int, coefficients, **kwargs) -> "Hamiltonian":
        spectrum = PauliSpectrum(n, np.asarray(coefficients, dtype=np.float64))
        return cls(spectrum, **kwargs)

    @classmethod
    def zero(cls, n: int) -> "Hamiltonian":
        return cls(PauliSpectrum.zeros(n), declared_locality=0, normalized=True)

    @property
    def n(self) -> int:
        return self.spectrum.n

    @property
    def coefficients(self) -> np.ndarray:
        """Real coefficient vector h_x indexed by Pauli index."""
        return self.spectrum.coefficients.real

    def is_k_local(self, k: int) -> bool:
        return tail_two_norm(self.spectrum, min(max(k, 0), self.n)) == 0

    def distance_to_locality(self, k: int) -> float:
        """||H_{>k}||_2, the distance to the closest k-local Hamiltonian H_{<=k}."""
        return tail_two_norm(self.spectrum, k)

    def dense(self) -> np.ndarray:
        return dense_from_spectrum(self.spectrum)

    def inf_norm(self) -> float:
        eigenvalues, _ = self.eigh()
        return float(np.max(np.abs(eigenvalues))) if eigenvalues.size else 0.0

    def normalize(self) -> "Hamiltonian":
        """Rescale to spectral norm exactly 1; the zero Hamiltonian stays zero."""
        norm = self.inf_norm()
        spectrum = self.spectrum if norm == 0 else self.spectrum * (1.0 / norm)
        return Hamiltonian(
            PauliSpectrum(self.n, spectrum.coefficients.real),
            declared_locality=self.declared_locality,
            normalized=True,
        )

    def eigh(self) -> Tuple[np.ndarray, np.ndarray]:
        """Cached Hermitian eigendecomposition H = V diag(w) V^dagger."""
        if self._eigh is None:
            with self._eigh_lock:
                if self._eigh is None:
                    try:
                        eigenvalues, eigenvectors = linalg.eigh(self.dense())
                    except (linalg.LinAlgError, ValueError) as e:
                        raise EigendecompositionError(
                            "Hermitian eigendecomposition failed: {}".format(e)
                        ) from e
                    eigenvalues.setflags(write=False)
                    eigenvectors.setflags(write=False)
                    logger.debug("Cached eigendecomposition for %d qubits", self.n)
                    self._eigh = (eigenvalues, eigenvectors)
        return self._eigh

    def to_json_dict(self) -> dict:
        data = self.spectrum.to_json_dict()
        for entry in data["coeffs"]:
            del entry["im"]
        data["declared_locality"] = self.declared_locality
        data["normalized"] = self.normalized
        return data

    def __repr__(self):
        return "<Hamiltonian n={n} terms={terms} k={k}>".format(
            n=self.n, terms=len(self.spectrum), k=self.declared_locality
        )


class PauliProperty:
    """
    A property defined by a set S of Pauli strings.

    ``mask(n)`` is the membership indicator of S over every Pauli index.
    """

    def mask(self, n: int) -> np.ndarray:
        raise NotImplementedError

    def __call__(self, p: PauliString) -> bool:
        return bool(self.mask(p.n)[p.index])


class LocalityProperty(PauliProperty):
    """S = strings that act as the identity on at least n - k sites."""

    def __init__(self, k: int):
        self.k = k

    def mask(self, n: int) -> np.ndarray:
        return all_weights(n) <= self.k

    def __repr__(self):
        return "LocalityProperty(k={})".format(self.k)


class SupportProperty(PauliProperty):
    """S given explicitly as a collection of strings or labels."""

    def __init__(self, strings: Iterable[PauliKey]):
        self.strings = tuple(strings)

    def mask(self, n: int) -> np.ndarray:
        mask = np.zeros(4 ** check_qubit_count(n), dtype=bool)
        for key in self.strings:
            mask[PauliSpectrum._index_of(n, key)] = True
        return mask

    def __repr__(self):
        return "SupportProperty({} strings)".format(len(self.strings))


class PredicateProperty(PauliProperty):
    """S given by a pure predicate on PauliStrings."""

    def __init__(self, predicate: Callable[[PauliString], bool]):
        self.predicate = predicate

    def mask(self, n: int) -> np.ndarray:
        size = 4 ** check_qubit_count(n)
        return np.fromiter(
            (bool(self.predicate(PauliString.from_index(n, i))) for i in range(size)),
            dtype=bool,
            count=size,
        )

    def __call__(self, p: PauliString) -> bool:
        return bool(self.predicate(p))


def as_property(member) -> PauliProperty:
    """Accept a PauliProperty or a plain predicate."""
    if isinstance(member, PauliProperty):
        return member
    if callable(member):
        return PredicateProperty(member)
    raise TypeError("Expected a PauliProperty or a predicate, got {!r}.".format(member))
