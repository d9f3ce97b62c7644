"""Diagnostic exceptions for numerical failures.

Validation problems (bad parameters, misused methods) raise plain ValueError;
NumericalError signals that a computation degraded beyond its tolerance.
"""


class NumericalError(RuntimeError):
    """A numerical routine violated its accuracy contract."""
