from cli.commands import build_parser, load_table, main
from cli.report import Report, render, to_plain

__all__ = ["build_parser", "load_table", "main", "Report", "render", "to_plain"]
