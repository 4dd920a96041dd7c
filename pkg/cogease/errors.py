"""
Exception types raised by cogease.
"""


class CogEaseError(ValueError):
    """
    Base class for cogease errors.
    """


class ConfigurationError(CogEaseError):
    """
    A weight profile, parameter name, or setting
    is inconsistent with the scoring calculus.
    """


class EvaluationError(CogEaseError):
    """
    A unit cannot be given an overall score, e.g.
    because no level is active.
    """


class IngestError(CogEaseError):
    """
    An input file or stream could not be read or
    is garbled beyond per-record recovery.
    """


class UndefinedCorrelationError(CogEaseError):
    """
    A correlation coefficient is undefined because
    one of its arguments has zero variance.
    """
