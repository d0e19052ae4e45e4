"""
``pauliprobe <test|learn|verify|plan> [options]``

Runs the pauliprobe_* management commands. Without DJANGO_SETTINGS_MODULE a
minimal settings module is configured, with an sqlite database for ``--save``
in the ``--out`` directory (default: the configured output directory).
"""
import os
import sys

try:
    import django
    from django.conf import settings
    from django.core.management import call_command, execute_from_command_line
except ImportError as exc:
    raise ImportError(
        "Couldn't import Django. "
        "Run `poetry shell` to activate a virtual environment first."
    ) from exc

SUBCOMMANDS = {
    "test": "pauliprobe_test",
    "learn": "pauliprobe_learn",
    "verify": "pauliprobe_verify",
    "plan": "pauliprobe_plan",
}


def option_value(argv, name):
    """The value of ``--name value`` or ``--name=value`` in argv, else None."""
    for position, arg in enumerate(argv):
        if arg == name and position + 1 < len(argv):
            return argv[position + 1]
        if arg.startswith(name + "="):
            return arg[len(name) + 1 :]
    return None


def configure(output_dir=None):
    if settings.configured or os.environ.get("DJANGO_SETTINGS_MODULE"):
        return
    from .settings import get_output_dir

    if output_dir is None:
        output_dir = os.environ.get("PAULIPROBE_OUTPUT_DIR", get_output_dir())
    settings.configure(
        INSTALLED_APPS=["django.contrib.contenttypes", "pauliprobe"],
        DATABASES={
            "default": {
                "ENGINE": "django.db.backends.sqlite3",
                "NAME": os.path.join(output_dir, "pauliprobe.sqlite3"),
            }
        },
        DEFAULT_AUTO_FIELD="django.db.models.BigAutoField",
        USE_TZ=True,
        PAULIPROBE_OUTPUT_DIR=output_dir,
    )


def usage():
    return "usage: pauliprobe {%s} [options]\n" % ",".join(SUBCOMMANDS)


def main(argv=None):
    argv = list(sys.argv if argv is None else argv)
    if len(argv) < 2 or argv[1] not in SUBCOMMANDS:
        sys.stderr.write(usage())
        return 2

    configure(option_value(argv[2:], "--out"))
    django.setup()
    if "--save" in argv[2:]:
        from .settings import get_output_dir

        os.makedirs(get_output_dir(), exist_ok=True)
        call_command("migrate", "pauliprobe", verbosity=0)
    execute_from_command_line(["pauliprobe", SUBCOMMANDS[argv[1]]] + argv[2:])
    return 0


if __name__ == "__main__":
    sys.exit(main())
