"""
Django Administration interface definitions
"""
from django.contrib import admin

from . import models


class ReadOnlyMixin:
    def has_add_permission(self, request, obj=None):
        return False

    def has_change_permission(self, request, obj=None):
        return False


class TrialOutcomeInline(ReadOnlyMixin, admin.TabularInline):
    model = models.TrialOutcome
    fields = ("index", "seed", "success", "row")
    readonly_fields = fields
    extra = 0
    show_change_link = False


@admin.register(models.ExperimentRun)
class ExperimentRunAdmin(ReadOnlyMixin, admin.ModelAdmin):
    list_display = (
        "id",
        "kind",
        "seed",
        "trials",
        "success_rate",
        "duration_seconds",
        "pauliprobe_version",
        "created",
    )
    list_filter = ("kind", "pauliprobe_version")
    readonly_fields = (
        "kind",
        "seed",
        "trials",
        "config",
        "aggregates",
        "csv_columns",
        "duration_seconds",
        "pauliprobe_version",
        "created",
    )
    exclude = ("record",)
    inlines = (TrialOutcomeInline,)


@admin.register(models.TrialOutcome)
class TrialOutcomeAdmin(ReadOnlyMixin, admin.ModelAdmin):
    list_display = ("run", "index", "seed", "success")
    list_filter = ("run__kind", "success")
    list_select_related = ("run",)
    readonly_fields = ("run", "index", "seed", "success", "row")
