"""
pauli-probe Exceptions.
"""


class PauliprobeError(Exception):
    """Base class for every error raised by pauli-probe."""

    pass


class InvalidPauliString(PauliprobeError, ValueError):
    """Raised when a Pauli word has letters outside I/X/Y/Z or the wrong length."""

    pass


class SpectrumError(PauliprobeError, ValueError):
    """
    Raised when a Pauli spectrum or dense matrix violates its invariants
    (dimension not a power of two, complex Hamiltonian coefficients,
    declared locality exceeded, mixed qubit counts, ...).
    """

    pass


class QubitCapExceeded(SpectrumError):
    """Raised when n exceeds PAULIPROBE_QUBIT_CAP."""

    def __init__(self, n, cap):
        self.n = n
        self.cap = cap
        super().__init__(
            "{n} qubits exceeds the configured cap of {cap} "
            "(PAULIPROBE_QUBIT_CAP).".format(n=n, cap=cap)
        )


class NotNormalized(SpectrumError):
    """Raised when a Hamiltonian flagged as normalized has ||H||_inf > 1."""

    pass


class EigendecompositionError(PauliprobeError):
    """
    Raised when the Hermitian eigendecomposition used for time evolution fails,
    which signals a violated Hamiltonian invariant.
    """

    pass


class RejectionBudgetExhausted(PauliprobeError):
    """
    Raised when the planted-instance generator runs out of attempts.

    This usually means (eps1, eps2) is infeasible for the given n and k.
    """

    def __init__(self, attempts, best_tail, message=""):
        self.attempts = attempts
        self.best_tail = best_tail
        super().__init__(
            message
            or "No acceptable instance after {attempts} attempts "
            "(closest exact tail seen: {best:.6g}).".format(
                attempts=attempts, best=best_tail
            )
        )


class VerificationModeRequired(PauliprobeError):
    """Raised when the exact distribution is requested outside verification mode."""

    pass


class InfeasiblePlan(PauliprobeError, ValueError):
    """
    Raised when tester or learner parameters fall outside their preconditions,
    e.g. alpha > 1/2 (outside the Taylor regime) or eps1 >= eps2.
    """

    pass


class InvalidExperimentConfig(PauliprobeError, ValueError):
    """Raised when an experiment configuration fails validation."""

    pass


class BHConstantViolated(PauliprobeError):
    """
    Raised when a Hamiltonian in a certified family has a Bohnenblust-Hille
    sum above C^k, i.e. the configured PAULIPROBE_BH_CONSTANT is too small.
    """

    def __init__(self, k, constant, worst_sum, violations):
        self.k = k
        self.constant = constant
        self.worst_sum = worst_sum
        self.violations = violations
        super().__init__(
            "{violations} Hamiltonian(s) exceed C^k = {bound:.6g} (C={constant}, "
            "k={k}); largest sum seen {worst:.6g}.".format(
                violations=violations,
                bound=constant ** k,
                constant=constant,
                k=k,
                worst=worst_sum,
            )
        )
