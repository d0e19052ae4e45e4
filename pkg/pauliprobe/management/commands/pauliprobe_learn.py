from django.core.management.base import BaseCommand

from ...enums import ExperimentKind
from ...mixins import ExperimentCommandMixin


class Command(ExperimentCommandMixin, BaseCommand):
    """Run a seeded local Hamiltonian learning experiment."""

    kind = ExperimentKind.learner

    @property
    def help(self):
        return (
            "Learn random k-local Hamiltonians and compare against the truth. "
            + self.get_help_columns()
        )

    def add_arguments(self, parser):
        super().add_arguments(parser)
        parser.add_argument("--eps", type=float, help="target accuracy")
        parser.add_argument("--C", type=float, help="Bohnenblust-Hille constant")
        parser.add_argument("--alpha", type=float, help="evolution time override")
        parser.add_argument("--gamma", type=float, help="detection threshold override")
        parser.add_argument("--beta", type=float, help="estimation accuracy override")
        parser.add_argument("--m1", type=int, help="stage-one sample count override")
        parser.add_argument(
            "--tolerance",
            type=float,
            help="success threshold on ||H - H''||_2 (defaults to eps)",
        )

    def handle(self, *args, **options):
        self.run_experiment(options)
