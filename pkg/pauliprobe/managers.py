"""
pauli-probe model managers
"""
from django.db import models


class ExperimentRunManager(models.Manager):
    """Manager used in models.ExperimentRun."""

    def testers(self):
        """Return tester runs."""
        return self.filter(kind="tester")

    def learners(self):
        """Return learner runs."""
        return self.filter(kind="learner")

    def success_summary(self):
        """
        Return one dict per experiment kind with the number of runs, trials,
        successful trials and the pooled success rate.
        """
        rows = (
            self.values("kind")
            .order_by("kind")
            .annotate(
                runs=models.Count("id", distinct=True),
                outcome_count=models.Count("outcomes"),
                successes=models.Count(
                    "outcomes", filter=models.Q(outcomes__success=True)
                ),
            )
        )
        summary = []
        for row in rows:
            trials = row.pop("outcome_count")
            row["trials"] = trials
            row["success_rate"] = row["successes"] / trials if trials else None
            summary.append(row)
        return summary
