#!/usr/bin/env python
"""
Development entry point, e.g. ``./manage.py makemigrations pauliprobe``.

Experiments are normally run with the ``pauliprobe`` console script.
"""
import os
import sys

from django.core.management import execute_from_command_line

if __name__ == "__main__":
    os.environ.setdefault("DJANGO_SETTINGS_MODULE", "tests.settings")
    execute_from_command_line(sys.argv)
