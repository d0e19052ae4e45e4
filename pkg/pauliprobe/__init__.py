"""
pauli-probe - locality testing and local Hamiltonian learning from
time-evolution queries
"""
from importlib import metadata

from django.apps import AppConfig

try:
    __version__ = metadata.version("pauli-probe")
except metadata.PackageNotFoundError:  # pragma: no cover
    __version__ = "0+unknown"

default_app_config = "pauliprobe.PauliprobeAppConfig"


class PauliprobeAppConfig(AppConfig):
    """
    An AppConfig for pauli-probe which loads system checks once Django is ready.
    """

    name = "pauliprobe"
    verbose_name = "pauli-probe"
    default_auto_field = "django.db.models.BigAutoField"

    def ready(self):
        from . import checks  # noqa: Register the checks
