"""
Stored experiment records.

Rows are only written when PAULIPROBE_PERSIST_RECORDS is set or a command is
run with ``--save``; the numerical modules never touch the database.
"""
from django.db import models

from .enums import ExperimentKind
from .fields import JSONField
from .managers import ExperimentRunManager


def _get_version():
    from . import __version__

    return __version__


class ExperimentRun(models.Model):
    """One run of ``run_experiment``: the config echo, aggregates and full record."""

    id = models.BigAutoField(primary_key=True)
    kind = models.CharField(max_length=16, choices=ExperimentKind.choices)
    seed = models.BigIntegerField(help_text="Base seed; trial i uses seed + i")
    trials = models.PositiveIntegerField()
    config = JSONField(help_text="The validated ExperimentConfig")
    aggregates = JSONField(
        help_text="Success rate, Wilson interval, mean queries and evolution time"
    )
    record = JSONField(help_text="The full JSON record as written to disk")
    csv_columns = JSONField(default=list)
    duration_seconds = models.FloatField(default=0.0)
    pauliprobe_version = models.CharField(
        max_length=32,
        default=_get_version,  # Needs to be a callable, otherwise it's a db default.
        help_text="The version of pauli-probe that produced the record",
    )
    created = models.DateTimeField(auto_now_add=True)

    objects = ExperimentRunManager()

    class Meta:
        ordering = ["-created", "-id"]
        get_latest_by = "created"

    def __str__(self):
        return "{kind} run (seed={seed}, trials={trials})".format(
            kind=self.get_kind_display(), seed=self.seed, trials=self.trials
        )

    @property
    def success_rate(self):
        return self.aggregates.get("success_rate")


class TrialOutcome(models.Model):
    """A single CSV row of an ExperimentRun."""

    id = models.BigAutoField(primary_key=True)
    run = models.ForeignKey(
        ExperimentRun, on_delete=models.CASCADE, related_name="outcomes"
    )
    index = models.PositiveIntegerField()
    seed = models.BigIntegerField()
    success = models.BooleanField(default=False)
    row = JSONField()

    class Meta:
        ordering = ["run", "index"]
        unique_together = ("run", "index")

    def __str__(self):
        return "trial {index} of {run}".format(index=self.index, run=self.run)
