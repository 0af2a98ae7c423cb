from __future__ import annotations

import json
from pathlib import Path

try:
    import tomllib
except ModuleNotFoundError:
    import tomli as tomllib


def read_config(raw_config: str | dict | Path) -> dict:
    """Read the given configuration file or dict. Only TOML and JSON formats are accepted.

    Parameters
    ----------
    raw_config : `str` or `Path` or `dict`
        The path of the configuration file, or the dict object containing the configuration.

    Returns
    -------
    dict:
        The configuration, as nested dictionaries.

    Raises
    ------
    FileNotFoundError
        Raised if raw_config does not point to an existing file,
        or if the file is neither in TOML nor in JSON format.
    TypeError
        Raised if raw_config is anything else than a string, a Path or a dict.

    """
    match raw_config:
        case dict():
            return raw_config
        case str() | Path():
            config_path = Path(raw_config)
        case _:
            message = "The raw_config must be either of type str, dict or Path."
            raise TypeError(message)

    if not config_path.is_file():
        message = f"The configuration file {config_path} does not exist."
        raise FileNotFoundError(message)

    with config_path.open("rb") as input_config:
        match config_path.suffix:
            case ".toml":
                return tomllib.load(input_config)
            case ".json":
                return json.load(input_config)
            case _:
                message = (
                    f"The provided configuration file extension ({config_path.suffix}) "
                    "is not a valid extension. Please use .toml or .json files."
                )
                raise FileNotFoundError(message)
