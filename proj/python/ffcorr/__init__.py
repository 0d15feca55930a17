"""Exact correlation sums of multiplicative functions over F_q[x]."""

from ._ffcorr import (
    BudgetError,
    IrreducibleTable,
    ValidationError,
    brun_titchmarsh_violations,
    correlate,
    crt_count,
    factorize,
    format_poly,
    main_term,
    necklace_count,
    run,
    tk_ratio,
)

__all__ = [
    "BudgetError",
    "IrreducibleTable",
    "ValidationError",
    "brun_titchmarsh_violations",
    "correlate",
    "crt_count",
    "factorize",
    "format_poly",
    "main_term",
    "necklace_count",
    "run",
    "tk_ratio",
]
