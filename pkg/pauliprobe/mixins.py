"""
pauli-probe mixins
"""
import traceback

from django.core.management.base import CommandError

from .enums import ExperimentKind, PlanMode
from .exceptions import (
    InfeasiblePlan,
    InvalidExperimentConfig,
    RejectionBudgetExhausted,
)
from .experiments import CSV_COLUMNS, ExperimentConfig, run_experiment
from .utils import format_float

EXIT_VERIFY_FAILED = 1
EXIT_BAD_CONFIG = 2
EXIT_INFEASIBLE_PLAN = 3


class VerbosityAwareOutputMixin:
    """
    A mixin class to provide verbosity aware output functions for management commands.
    """

    def set_verbosity(self, options):
        """Set the verbosity based off the passed in options."""
        self.verbosity = options["verbosity"]

    def output(self, arg):
        """Write if output is not silenced."""
        if self.verbosity > 0:
            self.stdout.write(str(arg))

    def verbose_output(self, arg):
        """Write only if output is verbose."""
        if self.verbosity > 1:
            self.stdout.write(str(arg))

    def verbose_traceback(self):
        """Write out the current traceback if the output is verbose."""
        if self.verbosity > 1:
            self.stderr.write(traceback.format_exc())


class ExperimentCommandMixin(VerbosityAwareOutputMixin):
    """
    Shared flags and error translation for the experiment subcommands.

    Subclasses set ``kind`` and may extend ``add_arguments``.
    """

    kind = None

    def get_help_columns(self):
        return "CSV columns: " + ",".join(CSV_COLUMNS[self.kind])

    def add_arguments(self, parser):
        parser.add_argument("--config", help="JSON file with configuration keys")
        parser.add_argument("--n", type=int, help="number of qubits")
        parser.add_argument("--k", type=int, help="locality")
        parser.add_argument("--delta", type=float, help="failure probability")
        parser.add_argument("--density", type=float, help="term density of instances")
        parser.add_argument("--trials", type=int, help="number of trials")
        parser.add_argument("--seed", type=int, help="base seed; trial i uses seed + i")
        parser.add_argument(
            "--mode",
            choices=PlanMode.values(),
            help="theory plans or practical overrides",
        )
        parser.add_argument("--c", type=float, help="Taylor remainder constant")
        parser.add_argument("--out", help="output directory for JSON and CSV")
        parser.add_argument("--threads", type=int, help="worker pool size")
        parser.add_argument(
            "--save",
            action="store_true",
            default=None,
            help="also store the record in the database",
        )
        parser.add_argument(
            "--gnuplot-stub",
            action="store_true",
            default=None,
            dest="gnuplot_stub",
            help="also write a whitespace-separated <kind>.dat file",
        )

    def build_config(self, options) -> ExperimentConfig:
        keys = set(ExperimentConfig.field_names()) - {"kind"}
        overrides = {key: options[key] for key in keys if options.get(key) is not None}
        overrides["kind"] = self.kind
        if options.get("config"):
            return ExperimentConfig.from_json(options["config"], **overrides)
        return ExperimentConfig.from_dict(overrides)

    def run_experiment(self, options):
        self.set_verbosity(options)
        try:
            config = self.build_config(options)
            record = run_experiment(config)
        except InvalidExperimentConfig as e:
            self.verbose_traceback()
            raise CommandError(str(e), returncode=EXIT_BAD_CONFIG)
        except (InfeasiblePlan, RejectionBudgetExhausted) as e:
            self.verbose_traceback()
            raise CommandError(str(e), returncode=EXIT_INFEASIBLE_PLAN)
        self.print_record(record)
        return record

    def print_record(self, record):
        if record.plan is not None:
            self.verbose_output("Plan:")
            for key, value in sorted(record.plan.items()):
                self.verbose_output("  {key} = {value}".format(key=key, value=value))
        if self.kind != ExperimentKind.verify:
            for row in record.rows:
                self.verbose_output(
                    "  ".join(
                        "{}={}".format(column, _cell(row[column]))
                        for column in record.columns
                    )
                )
        self.output("")
        for key, value in record.aggregates.items():
            self.output("{key:<20} {value}".format(key=key, value=_cell(value)))
        self.output("duration_seconds     {:.1f}".format(record.duration_seconds))


def _cell(value):
    if isinstance(value, str):
        return value
    return format_float(value)
