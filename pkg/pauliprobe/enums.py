import operator
from collections import OrderedDict

from django.utils.translation import gettext_lazy as _


class EnumMetaClass(type):
    @classmethod
    def __prepare__(self, name, bases):
        return OrderedDict()

    def __new__(self, name, bases, classdict):
        members = []
        keys = {}
        choices = OrderedDict()
        for key, value in classdict.items():
            if key.startswith("__") or isinstance(
                value, (classmethod, staticmethod, property)
            ):
                continue
            members.append(key)
            if isinstance(value, tuple):
                value, alias = value
                keys[alias] = key
            else:
                alias = None
            keys[alias or key] = key
            choices[alias or key] = value

        for k, v in keys.items():
            classdict[v] = k

        classdict["__choices__"] = choices
        classdict["__members__"] = members

        # Sorted so migrations stay stable. Labels stay lazy until rendered.
        classdict["choices"] = tuple(
            (str(k), v)
            for k, v in sorted(choices.items(), key=operator.itemgetter(0))
        )

        return type.__new__(self, name, bases, classdict)


class Enum(metaclass=EnumMetaClass):
    @classmethod
    def values(cls):
        """Return the member keys in declaration order."""
        return [getattr(cls, member) for member in cls.__members__]


class InstanceLabel(Enum):
    """
    Promise side of a planted instance: eps1-close to k-local or eps2-far.
    """

    close = _("Close to k-local")
    far = _("Far from k-local")


class Decision(Enum):
    """Tester verdicts."""

    close_to_local = _("Close to local")
    far_from_local = _("Far from local")


class PlanMode(Enum):
    """
    Theory plans use the closed-form parameters; practical plans carry
    user overrides that void the worst-case guarantee.
    """

    theory = _("Theory")
    practical = _("Practical")


class ExperimentKind(Enum):
    tester = _("Tester")
    learner = _("Learner")
    verify = _("Verify")


class VerifyLevel(Enum):
    quick = _("Quick")
    full = _("Full")
