"""Trend-figure rendering for secrecy-rate sweep summaries."""

from .render import KINDS, MissingAxisError, SchemaError, read_summary, render

__version__ = "0.1.0"

__all__ = ["KINDS", "MissingAxisError", "SchemaError", "read_summary", "render"]
