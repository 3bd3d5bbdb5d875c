"""Exact algebraic entropy of banded operators on locally linearly compact spaces."""

from ._core import *  # noqa: F401,F403
from ._core import LlcentError, __version__


def load_spec(path):
    """Parse a spec file from disk."""
    with open(path, encoding="utf-8") as f:
        return parse_spec(f.read())  # noqa: F405
