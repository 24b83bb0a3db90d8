from .main import COMMANDS, build_parser, main, parse_cli

__all__ = ["COMMANDS", "build_parser", "main", "parse_cli"]
