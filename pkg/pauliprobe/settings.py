"""
pauli-probe settings

Every value is read lazily from Django settings (``PAULIPROBE_*``) so that
``override_settings`` works in tests, and falls back to the default when the
numerical modules are used without a configured Django project.
"""
import os
from typing import Optional

from django.conf import ENVIRONMENT_VARIABLE, settings
from django.core.exceptions import ImproperlyConfigured
from django.utils.module_loading import import_string

DEFAULT_QUBIT_CAP = 10
DEFAULT_TAYLOR_CONSTANT = 1.0
DEFAULT_BH_CONSTANT = 3.0
DEFAULT_REJECTION_BUDGET = 1000
DEFAULT_TRANSFORM_ATOL = 1e-10
DEFAULT_NORM_RTOL = 1e-9
DEFAULT_SAMPLE_CHUNK = 1_000_000
DEFAULT_OUTPUT_DIR = "pauliprobe-out"

THREADS_ENV_VAR = "PAULIPROBE_THREADS"

# Set by context_managers.temporary_qubit_cap; wins over the Django setting.
_qubit_cap_override: Optional[int] = None


def get_setting(setting_name, default=None):
    """
    Return a Django setting, or ``default`` if it is unset or if there is no
    Django configuration at all (neither configure() nor a settings module).
    """
    if not settings.configured and not os.environ.get(ENVIRONMENT_VARIABLE):
        return default
    return getattr(settings, setting_name, default)


def get_callback_function(setting_name, default=None):
    """
    Resolve a callback function based on a setting name.

    If the setting value isn't set, default is returned.  If the setting value
    is already a callable function, that value is used - If the setting value
    is a string, an attempt is made to import it.  Anything else will result in
    a failed import causing ImportError to be raised.

    :param setting_name: The name of the setting to resolve a callback from.
    :type setting_name: string (``str``/``unicode``)
    :param default: The default to return if setting isn't populated.
    :returns: The resolved callback function (if any).
    :type: ``callable``
    """
    func = get_setting(setting_name)
    if not func:
        return default

    if callable(func):
        return func

    if isinstance(func, str):
        func = import_string(func)

    if not callable(func):
        raise ImproperlyConfigured("{name} must be callable.".format(name=setting_name))

    return func


def get_qubit_cap() -> int:
    """Maximum qubit count accepted by the dense transforms."""
    if _qubit_cap_override is not None:
        return _qubit_cap_override
    return int(get_setting("PAULIPROBE_QUBIT_CAP", DEFAULT_QUBIT_CAP))


def set_qubit_cap_override(cap: Optional[int]) -> None:
    global _qubit_cap_override
    _qubit_cap_override = cap


def get_taylor_constant() -> float:
    """The constant c in U(t) = Id - itH + c t^2 R_2(t)."""
    return float(get_setting("PAULIPROBE_TAYLOR_CONSTANT", DEFAULT_TAYLOR_CONSTANT))


def get_bh_constant() -> float:
    """The Bohnenblust-Hille constant C."""
    return float(get_setting("PAULIPROBE_BH_CONSTANT", DEFAULT_BH_CONSTANT))


def get_rejection_budget() -> int:
    return int(get_setting("PAULIPROBE_REJECTION_BUDGET", DEFAULT_REJECTION_BUDGET))


def get_transform_atol() -> float:
    return float(get_setting("PAULIPROBE_TRANSFORM_ATOL", DEFAULT_TRANSFORM_ATOL))


def get_norm_rtol() -> float:
    return float(get_setting("PAULIPROBE_NORM_RTOL", DEFAULT_NORM_RTOL))


def get_sample_chunk() -> int:
    """Number of Bell samples drawn per vectorized chunk."""
    return int(get_setting("PAULIPROBE_SAMPLE_CHUNK", DEFAULT_SAMPLE_CHUNK))


def get_thread_count() -> int:
    """
    Size of the trial worker pool.

    The PAULIPROBE_THREADS environment variable wins over the Django setting,
    which wins over the number of available cores.
    """
    env_value = os.environ.get(THREADS_ENV_VAR)
    if env_value:
        try:
            return max(1, int(env_value))
        except ValueError:
            raise ImproperlyConfigured(
                "{var} must be an integer, got {value!r}.".format(
                    var=THREADS_ENV_VAR, value=env_value
                )
            )
    configured = get_setting("PAULIPROBE_THREADS")
    if configured:
        return max(1, int(configured))
    return os.cpu_count() or 1


def get_output_dir() -> str:
    return get_setting("PAULIPROBE_OUTPUT_DIR", DEFAULT_OUTPUT_DIR)


def get_persist_records() -> bool:
    return bool(get_setting("PAULIPROBE_PERSIST_RECORDS", False))


USE_NATIVE_JSONFIELD = get_setting("PAULIPROBE_USE_NATIVE_JSONFIELD", True)
