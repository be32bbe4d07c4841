from textkernel.runner.commands import CommandRunner

__all__ = ["CommandRunner"]
