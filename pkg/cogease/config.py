"""
Lookup of run settings: resource paths and scoring limits.

A setting is searched for in a table of a parsed TOML
configuration file first, then in a ``COGEASE_``-prefixed
environment variable. Command-line flags are resolved
before either and never reach this module.
"""

import os
from collections.abc import Callable

import toml

from cogease.errors import IngestError

env_variable_prefix = "COGEASE_"


def env_variable_for(key: str) -> str:
    """
    Environment variable consulted for a setting,
    e.g. ``"COGEASE_MAX_CHUNK_LEN"`` for ``"max_chunk_len"``.

    Parameters
    ----------
    key
        Setting name.

    Returns
    -------
    str
        The variable name.
    """
    return env_variable_prefix + key.upper()


def lookup_in_table(key: str, table: dict, value_name: str) -> tuple[any, str]:
    """
    Look up a setting in one table of a configuration file.

    Parameters
    ----------
    key
        Key of the setting within ``table``.

    table
        A configuration table, e.g. the ``[paths]`` table.

    value_name
        Readable name of the setting for the failure message.

    Returns
    -------
    tuple[any, str]
        The value and ``None``, or ``None`` and a message
        saying where the setting was looked for.
    """
    value = table.get(key)
    if value is not None:
        return value, None
    return None, (
        f"No configuration value for '{value_name}' "
        f"under the key '{key}' in the configuration table."
    )


def lookup_in_environment(variable: str, value_name: str) -> tuple[str, str]:
    """
    Look up a setting in the environment.

    Parameters
    ----------
    variable
        Environment variable name.

    value_name
        Readable name of the setting for the failure message.

    Returns
    -------
    tuple[str, str]
        The value and ``None``, or ``None`` and a message
        naming the variable that was missing.
    """
    value = os.environ.get(variable)
    if value is not None:
        return value, None
    return None, (
        f"No configuration value for '{value_name}' in the environment: "
        f"there is no environment variable named '{variable}'."
    )


def get_config_val(
    key: str,
    config_dict: dict = None,
    try_env: bool = True,
    env_variable_name: str = None,
    value_name: str = None,
) -> any:
    """
    Get a setting from a configuration table,
    falling back on the environment.

    Parameters
    ----------
    key
        Setting name, e.g. ``"lexicon"`` or ``"max_chunk_len"``.

    config_dict
        Configuration table to search first. If ``None``,
        search only the environment.

    try_env
        Fall back on the environment? Default ``True``.

    env_variable_name
        Variable to consult. If ``None``, use
        :func:`env_variable_for` of ``key``.

    value_name
        Readable name for error messages. If ``None``,
        use ``key``.

    Returns
    -------
    any
        The setting. Values from the environment are strings.

    Raises
    ------
    ValueError
        If the setting is found nowhere, or if there is
        neither a table nor permission to read the environment.
    """
    if config_dict is None and not try_env:
        raise ValueError(
            "Must either provide a configuration table via `config_dict` "
            "or set `try_env` to `True`; with neither there is "
            f"nowhere to look for '{key}'."
        )
    value_name = value_name or key
    variable = env_variable_name or env_variable_for(key)

    misses = []
    if config_dict is not None:
        value, message = lookup_in_table(key, config_dict, value_name)
        if value is not None:
            return value
        misses.append(message)
    if try_env:
        value, message = lookup_in_environment(variable, value_name)
        if value is not None:
            return value
        misses.append(message)
    raise ValueError(" Also searched the environment. ".join(misses))


def get_config_val_or_default(
    key: str,
    default: any,
    config_dict: dict = None,
    cast: Callable[[any], any] = None,
    **kwargs,
) -> any:
    """
    Like :func:`get_config_val`, but fall back on
    a default instead of raising when no value is found.

    Parameters
    ----------
    key
        Setting name.

    default
        Returned as is when the setting is found nowhere.

    config_dict
        Configuration table, or ``None``.

    cast
        Conversion applied to a found value, e.g. :class:`int`
        for limits that may arrive as environment strings.
        Default ``None``.

    **kwargs
        Passed to :func:`get_config_val`.

    Returns
    -------
    any
        The setting, or ``default``.

    Raises
    ------
    ValueError
        If a value is found but ``cast`` rejects it.
    """
    try:
        value = get_config_val(key, config_dict=config_dict, **kwargs)
    except ValueError:
        return default
    if cast is None:
        return value
    try:
        return cast(value)
    except (TypeError, ValueError) as e:
        raise ValueError(
            f"Configuration value for '{key}' could not be "
            f"converted with {cast.__name__}. Got {value!r}."
        ) from e


def load_config_file(path: str) -> dict:
    """
    Read a TOML configuration file with ``[paths]``
    and ``[scoring]`` tables.

    Parameters
    ----------
    path
        Path to the file.

    Returns
    -------
    dict
        The parsed tables.

    Raises
    ------
    IngestError
        If the file cannot be read or is not valid TOML.
    """
    try:
        with open(path, encoding="utf-8") as f:
            return toml.load(f)
    except (OSError, toml.TomlDecodeError) as e:
        raise IngestError(f"Could not read configuration file '{path}': {e}") from e
