"""Command-line interface."""

from .encoding import InputError, format_rational, parse_rational
from .commands import build_parser, main

__all__ = ["InputError", "build_parser", "format_rational", "main", "parse_rational"]
