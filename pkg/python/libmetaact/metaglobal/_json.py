import json
import pathlib
from typing import Any, Union


def pretty_json(data: Any) -> str:
    """Format data as JSON, with two-space indentation and a trailing newline

    Floating point values are written with :func:`repr`, so they round-trip
    exactly through :func:`json.loads`.
    """
    return json.dumps(data, indent=2) + "\n"


def write_json(path: Union[str, pathlib.Path], data: Any) -> pathlib.Path:
    """Write data to a JSON file, creating parent directories as needed"""
    path = pathlib.Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w") as f:
        f.write(pretty_json(data))
    return path


def read_json(path: Union[str, pathlib.Path]) -> Any:
    """Read a JSON file"""
    with open(pathlib.Path(path), "r") as f:
        return json.load(f)
