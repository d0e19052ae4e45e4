"""
pauli-probe Custom Field Definitions
"""
from .settings import USE_NATIVE_JSONFIELD

if USE_NATIVE_JSONFIELD:
    from django.db.models import JSONField as BaseJSONField
else:
    from jsonfield import JSONField as BaseJSONField


class JSONField(BaseJSONField):
    """A JSONField that defaults to an empty dict."""

    def __init__(self, *args, **kwargs):
        kwargs.setdefault("default", dict)
        super().__init__(*args, **kwargs)
