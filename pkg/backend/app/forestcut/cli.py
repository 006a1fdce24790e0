"""
Programmatic entry point for the ``forestcut`` management command.

``run`` returns the exit code instead of exiting, so tests and scripts can
drive the command line without a subprocess.
"""

import logging
import sys
from typing import Optional, Sequence, TextIO

from django.core.management.base import CommandError

from app.forestcut.management.commands.forestcut import USAGE_ERROR, Command

logger = logging.getLogger(__name__)


def run(argv: Sequence[str], stdout: Optional[TextIO] = None, stderr: Optional[TextIO] = None) -> int:
    """0 = no counterexamples, 1 = counterexamples found, 2 = usage or input error."""
    command = Command(stdout=stdout or sys.stdout, stderr=stderr or sys.stderr)
    parser = command.create_parser("manage.py", "forestcut")
    try:
        options = vars(parser.parse_args(list(argv)))
    except CommandError as exc:
        command.stderr.write(str(exc))
        return USAGE_ERROR
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else USAGE_ERROR
    args = options.pop("args", ())
    try:
        command.execute(*args, **options)
    except CommandError as exc:
        command.stderr.write(f"error: {exc}")
        logger.debug("cli_failed", extra={"argv": list(argv), "returncode": exc.returncode})
        return exc.returncode
    return command.exit_code
