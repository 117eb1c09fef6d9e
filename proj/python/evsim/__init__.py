"""Bicycle-model EV energy simulator with similitude scaling."""

from pathlib import Path

from ._core import *  # noqa: F401,F403
from ._core import ValidationError, NumericError, load_config  # noqa: F401


def data_dir() -> Path:
    """Bundled configs and cycles: installed copy first, then the source tree."""
    here = Path(__file__).resolve().parent
    for candidate in (here / "data", here.parents[1] / "data", here.parents[2] / "data"):
        if (candidate / "configs").is_dir():
            return candidate
    raise FileNotFoundError("bundled data directory not found")


def bundled_config(name: str):
    return load_config(data_dir() / "configs" / f"{name}.cfg")
