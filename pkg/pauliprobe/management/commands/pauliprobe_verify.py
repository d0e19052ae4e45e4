from django.core.management.base import BaseCommand, CommandError

from ...enums import ExperimentKind, VerifyLevel
from ...experiments import ExperimentConfig, run_experiment
from ...mixins import EXIT_VERIFY_FAILED, VerbosityAwareOutputMixin
from ...verification import CheckResult


class Command(VerbosityAwareOutputMixin, BaseCommand):
    """Run the exact-math and sampler verification suite."""

    help = (
        "Run every verification check and print measured values against "
        "thresholds. CSV columns: check,measured,threshold,passed"
    )

    def add_arguments(self, parser):
        parser.add_argument(
            "--level", choices=VerifyLevel.values(), default=VerifyLevel.quick
        )
        parser.add_argument("--seed", type=int, default=0)
        parser.add_argument("--out", help="output directory for JSON and CSV")

    def handle(self, *args, **options):
        self.set_verbosity(options)
        config = ExperimentConfig(
            kind=ExperimentKind.verify,
            level=options["level"],
            seed=options["seed"],
            trials=1,
            out=options["out"],
        )
        record = run_experiment(config)
        for row in record.rows:
            self.output(CheckResult(row["check"], row["measured"], row["threshold"]))
        failed = [row["check"] for row in record.rows if not row["passed"]]
        if failed:
            raise CommandError(
                "Verification failed: {}".format(", ".join(failed)),
                returncode=EXIT_VERIFY_FAILED,
            )
        self.output("All {} checks passed.".format(len(record.rows)))
