import json

from django.core.management.base import BaseCommand, CommandError

from ...exceptions import InfeasiblePlan
from ...learner import theory_parameters, undetected_coefficient_bound
from ...mixins import EXIT_INFEASIBLE_PLAN, VerbosityAwareOutputMixin
from ...tester import compute_plan


class Command(VerbosityAwareOutputMixin, BaseCommand):
    """Print theory-mode plans without running anything."""

    help = (
        "Print the theory-mode tester and learner parameters with their "
        "query counts and total evolution times."
    )

    def add_arguments(self, parser):
        parser.add_argument(
            "--kind", choices=("tester", "learner", "both"), default="both"
        )
        parser.add_argument("--k", type=int, default=1)
        parser.add_argument("--delta", type=float, default=0.1)
        parser.add_argument("--eps1", type=float, default=0.0)
        parser.add_argument("--eps2", type=float, default=0.3)
        parser.add_argument("--eps", type=float, default=0.5)
        parser.add_argument("--c", type=float, help="Taylor remainder constant")
        parser.add_argument("--C", type=float, help="Bohnenblust-Hille constant")
        parser.add_argument(
            "--json", action="store_true", help="print the plans as one JSON object"
        )

    def handle(self, *args, **options):
        self.set_verbosity(options)
        plans = {}
        try:
            if options["kind"] in ("tester", "both"):
                plan = compute_plan(
                    options["eps1"],
                    options["eps2"],
                    options["delta"],
                    options["k"],
                    c=options["c"],
                )
                plans["tester"] = dict(
                    plan.to_json_dict(),
                    theory_evolution_time=plan.theory_evolution_time,
                )
            if options["kind"] in ("learner", "both"):
                plan = theory_parameters(
                    options["k"],
                    options["eps"],
                    options["delta"],
                    C=options["C"],
                    c=options["c"],
                )
                plans["learner"] = dict(
                    plan.to_json_dict(),
                    undetected_coefficient_bound=undetected_coefficient_bound(plan),
                    **plan.error_budget()
                )
        except InfeasiblePlan as e:
            self.verbose_traceback()
            raise CommandError(str(e), returncode=EXIT_INFEASIBLE_PLAN)

        if options["json"]:
            self.output(json.dumps(plans, indent=2, sort_keys=True))
            return
        for kind, values in plans.items():
            self.output("{} plan:".format(kind))
            for key, value in values.items():
                if isinstance(value, float):
                    value = "{:.10g}".format(value)
                self.output("  {key:<28} {value}".format(key=key, value=value))
