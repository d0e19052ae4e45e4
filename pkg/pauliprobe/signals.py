"""
Signals sent while experiments run.

Receivers run synchronously in the thread that assembles the record.
"""
from django.dispatch import Signal

# Sent with ``row`` (the CSV row as a dict), ``kind`` and ``index`` once a
# trial has finished.
trial_finished = Signal()

# Sent with ``record`` (an ExperimentRecord) after it has been written.
experiment_finished = Signal()
