# Generated by Django 3.1.2 on 2026-10-18 09:12

import django.db.models.deletion
from django.db import migrations, models

import pauliprobe.fields
import pauliprobe.models


class Migration(migrations.Migration):

    initial = True

    dependencies = []

    operations = [
        migrations.CreateModel(
            name="ExperimentRun",
            fields=[
                ("id", models.BigAutoField(primary_key=True, serialize=False)),
                (
                    "kind",
                    models.CharField(
                        choices=[
                            ("learner", "Learner"),
                            ("tester", "Tester"),
                            ("verify", "Verify"),
                        ],
                        max_length=16,
                    ),
                ),
                (
                    "seed",
                    models.BigIntegerField(help_text="Base seed; trial i uses seed + i"),
                ),
                ("trials", models.PositiveIntegerField()),
                (
                    "config",
                    pauliprobe.fields.JSONField(
                        default=dict, help_text="The validated ExperimentConfig"
                    ),
                ),
                (
                    "aggregates",
                    pauliprobe.fields.JSONField(
                        default=dict,
                        help_text="Success rate, Wilson interval, mean queries and "
                        "evolution time",
                    ),
                ),
                (
                    "record",
                    pauliprobe.fields.JSONField(
                        default=dict, help_text="The full JSON record as written to disk"
                    ),
                ),
                ("csv_columns", pauliprobe.fields.JSONField(default=list)),
                ("duration_seconds", models.FloatField(default=0.0)),
                (
                    "pauliprobe_version",
                    models.CharField(
                        default=pauliprobe.models._get_version,
                        help_text="The version of pauli-probe that produced the record",
                        max_length=32,
                    ),
                ),
                ("created", models.DateTimeField(auto_now_add=True)),
            ],
            options={
                "ordering": ["-created", "-id"],
                "get_latest_by": "created",
            },
        ),
        migrations.CreateModel(
            name="TrialOutcome",
            fields=[
                ("id", models.BigAutoField(primary_key=True, serialize=False)),
                ("index", models.PositiveIntegerField()),
                ("seed", models.BigIntegerField()),
                ("success", models.BooleanField(default=False)),
                ("row", pauliprobe.fields.JSONField(default=dict)),
                (
                    "run",
                    models.ForeignKey(
                        on_delete=django.db.models.deletion.CASCADE,
                        related_name="outcomes",
                        to="pauliprobe.experimentrun",
                    ),
                ),
            ],
            options={
                "ordering": ["run", "index"],
                "unique_together": {("run", "index")},
            },
        ),
    ]
