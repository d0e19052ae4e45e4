"""
pauli-probe System Checks
"""
from django.core import checks

MAX_SUPPORTED_QUBIT_CAP = 12
RECOMMENDED_QUBIT_CAP = 10


@checks.register("pauliprobe")
def check_qubit_cap(app_configs=None, **kwargs):
    """Check PAULIPROBE_QUBIT_CAP is a sensible desk-scale value."""
    from . import settings as pauliprobe_settings

    messages = []
    cap = pauliprobe_settings.get_qubit_cap()

    if cap < 1 or cap > MAX_SUPPORTED_QUBIT_CAP:
        msg = "PAULIPROBE_QUBIT_CAP must be between 1 and {max}, got {cap}.".format(
            max=MAX_SUPPORTED_QUBIT_CAP, cap=cap
        )
        hint = "Dense 4^n spectra above 12 qubits do not fit in desk memory."
        messages.append(checks.Critical(msg, hint=hint, id="pauliprobe.C001"))
    elif cap > RECOMMENDED_QUBIT_CAP:
        messages.append(
            checks.Warning(
                "PAULIPROBE_QUBIT_CAP={cap} allows spectra with {size} "
                "coefficients.".format(cap=cap, size=4 ** cap),
                hint="Eigendecompositions at this size take minutes; "
                "the default cap is {default}.".format(default=RECOMMENDED_QUBIT_CAP),
                id="pauliprobe.W001",
            )
        )

    return messages


@checks.register("pauliprobe")
def check_constants(app_configs=None, **kwargs):
    """Check the Taylor constant c and the Bohnenblust-Hille constant C."""
    from . import settings as pauliprobe_settings

    messages = []

    if pauliprobe_settings.get_taylor_constant() <= 0:
        messages.append(
            checks.Critical(
                "PAULIPROBE_TAYLOR_CONSTANT must be positive.",
                hint="c = 1 is valid for every t <= 1/2.",
                id="pauliprobe.C002",
            )
        )

    if pauliprobe_settings.get_bh_constant() <= 1:
        messages.append(
            checks.Critical(
                "PAULIPROBE_BH_CONSTANT must be greater than 1.",
                hint="The default C = 3 is certified empirically by the verify suite.",
                id="pauliprobe.C003",
            )
        )

    return messages


@checks.register("pauliprobe")
def check_runtime_limits(app_configs=None, **kwargs):
    """Check thread count, rejection budget and sample chunk size."""
    from django.core.exceptions import ImproperlyConfigured

    from . import settings as pauliprobe_settings

    messages = []

    try:
        pauliprobe_settings.get_thread_count()
    except ImproperlyConfigured as e:
        messages.append(
            checks.Critical(
                str(e),
                hint="Unset PAULIPROBE_THREADS or give it a positive integer.",
                id="pauliprobe.C004",
            )
        )

    if pauliprobe_settings.get_rejection_budget() < 1:
        messages.append(
            checks.Critical(
                "PAULIPROBE_REJECTION_BUDGET must be at least 1.",
                id="pauliprobe.C005",
            )
        )

    if pauliprobe_settings.get_sample_chunk() < 1:
        messages.append(
            checks.Critical(
                "PAULIPROBE_SAMPLE_CHUNK must be at least 1.",
                id="pauliprobe.C006",
            )
        )

    return messages
