"""Rational approximation of complex functions (AAA, Thiele, prescribed poles)."""

from ._core import (
    Approximation,
    Curve,
    DomainError,
    Error,
    Expression,
    InvalidInput,
    NoAllowedIterate,
    Path,
    Region,
    approximate,
    approximate_prescribed,
    exterior,
    interior,
    kernel_counts,
    load_json,
    parse_expression,
    reset_kernel_counts,
)

__all__ = [
    "Approximation",
    "Curve",
    "DomainError",
    "Error",
    "Expression",
    "InvalidInput",
    "NoAllowedIterate",
    "Path",
    "Region",
    "approximate",
    "approximate_prescribed",
    "exterior",
    "interior",
    "kernel_counts",
    "load_json",
    "parse_expression",
    "reset_kernel_counts",
]
