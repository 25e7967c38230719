"""Shared exception base for caller-fault errors.

Every engine error carries a machine-readable ``code`` (the class name) so the
HTTP service and the CLI can emit structured diagnostics without matching on
message strings.
"""

from __future__ import annotations


class EngineError(Exception):
    """Base class for errors caused by bad input or bad requests."""

    @property
    def code(self) -> str:
        return type(self).__name__
