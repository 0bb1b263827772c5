"""Homology of finite permutation groups via equivariant cell complexes."""

__version__ = "0.1.0"

from .errors import CapExceeded, InvariantViolation

__all__ = ["CapExceeded", "InvariantViolation", "__version__"]
