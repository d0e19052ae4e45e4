"""
pauli-probe Context Managers
"""
from contextlib import contextmanager


@contextmanager
def verification_mode(oracle):
    """
    Temporarily open the exact-distribution back door of ``oracle``.

    The previous state is restored as soon as the context exits.
    """
    previous = oracle.verification_mode
    try:
        oracle.verification_mode = True
        yield oracle
    finally:
        oracle.verification_mode = previous


@contextmanager
def temporary_qubit_cap(cap):
    """
    Temporarily replace PAULIPROBE_QUBIT_CAP with ``cap``.

    Arrays already built for larger n stay valid; only new validations see
    the new cap.
    """
    from . import settings as pauliprobe_settings

    if int(cap) != cap or cap < 1:
        raise ValueError("Qubit cap must be a positive integer, got {!r}.".format(cap))
    previous = pauliprobe_settings._qubit_cap_override
    try:
        pauliprobe_settings.set_qubit_cap_override(int(cap))
        yield
    finally:
        pauliprobe_settings.set_qubit_cap_override(previous)
