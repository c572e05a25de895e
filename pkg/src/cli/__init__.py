"""Command-line surface of mmdlab."""

from .app import build_parser, main, parse_and_dispatch
from .reports import write_experiment_outputs, write_report

__all__ = ["build_parser", "parse_and_dispatch", "main", "write_report", "write_experiment_outputs"]
