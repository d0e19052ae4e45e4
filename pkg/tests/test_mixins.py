"""
pauli-probe Mixin Tests.
"""
from io import StringIO

from django.core.management.base import BaseCommand
from django.test.testcases import TestCase

from pauliprobe.enums import ExperimentKind
from pauliprobe.mixins import ExperimentCommandMixin, VerbosityAwareOutputMixin


class VerboseCommand(VerbosityAwareOutputMixin, BaseCommand):
    pass


class LocalityCommand(ExperimentCommandMixin, BaseCommand):
    kind = ExperimentKind.tester


class TestVerbosityAwareOutputMixin(TestCase):
    def make_command(self, verbosity):
        command = VerboseCommand(stdout=StringIO(), stderr=StringIO())
        command.set_verbosity({"verbosity": verbosity})
        return command

    def test_silent(self):
        command = self.make_command(0)
        command.output("hello")
        command.verbose_output("details")
        self.assertEqual(command.stdout._out.getvalue(), "")

    def test_normal(self):
        command = self.make_command(1)
        command.output("hello")
        command.verbose_output("details")
        self.assertEqual(command.stdout._out.getvalue(), "hello\n")

    def test_verbose(self):
        command = self.make_command(2)
        command.output("hello")
        command.verbose_output("details")
        self.assertEqual(command.stdout._out.getvalue(), "hello\ndetails\n")

    def test_verbose_traceback(self):
        command = self.make_command(2)
        try:
            raise ValueError("boom")
        except ValueError:
            command.verbose_traceback()
        self.assertIn("ValueError: boom", command.stderr._out.getvalue())


class TestExperimentCommandMixin(TestCase):
    def test_help_columns(self):
        self.assertTrue(
            LocalityCommand().get_help_columns().startswith("CSV columns: trial,seed")
        )

    def test_build_config_ignores_unset_options(self):
        command = LocalityCommand()
        config = command.build_config(
            {"n": 3, "trials": None, "verbosity": 1, "config": None}
        )
        self.assertEqual(config.kind, ExperimentKind.tester)
        self.assertEqual(config.n, 3)
        self.assertEqual(config.trials, 10)
