"""Locally repairable codes from automorphism orbits of a function-field
tower, plus the full family of asymptotic rate bounds for comparing them."""

from . import bounds, codes, galois, tower  # noqa: F401
from .errors import LrcError  # noqa: F401

__version__ = "0.1.0"
