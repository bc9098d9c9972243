"""Allow `python -m sigmadic` to invoke the command-line interface."""

from .cli import entry

entry()
