"""
Miscellaneous small utilities.
"""

from collections.abc import MutableSequence


def ensure_listlike(x: any) -> MutableSequence:
    """
    Ensure that an object either behaves like a
    :class:`MutableSequence` and if not return a
    one-item :class:`list` containing the object.

    Useful for handling list-of-strings inputs
    alongside single strings, e.g. frozen
    parameter paths.

    Parameters
    ----------
    x
        The item to ensure is :class:`list`-like.

    Returns
    -------
    MutableSequence
        ``x`` if ``x`` is a :class:`MutableSequence`
        otherwise ``[x]`` (i.e. a one-item list containing
        ``x``).
    """
    return x if isinstance(x, MutableSequence) else [x]


def clamp_unit(x: float) -> float:
    """
    Clamp a value to the unit interval.

    Parameters
    ----------
    x
        Value to clamp.

    Returns
    -------
    float
        ``min(1, max(0, x))``.
    """
    return min(1.0, max(0.0, x))


def fold_case(text: str) -> str:
    """
    Simple case folding used for all string comparisons.

    Maps upper case to lower case with :meth:`str.lower`;
    no locale-specific folding is applied.

    Parameters
    ----------
    text
        String to fold.

    Returns
    -------
    str
        The folded string.
    """
    return text.lower()
