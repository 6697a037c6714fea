"""Verlinde algebras of finite (pre)modular categories and their genus-g analogues."""

from .builtins import make
from .category import CategoryData, ValidationReport, load_json, validate

__version__ = "0.1.0"

__all__ = ["CategoryData", "ValidationReport", "load_json", "make", "validate", "__version__"]
