"""Exception types shared across the engine."""

from __future__ import annotations


class Ctm2Error(Exception):
    """Base class for every error raised by this package."""


class CatalogParseError(Ctm2Error):
    """Catalog bytes are not a well-formed catalog document.

    ``line``/``column`` are set when the underlying JSON is syntactically
    broken; structural problems (unknown key, type mismatch) carry a
    ``location`` path instead.
    """

    def __init__(self, message: str, *, line: int | None = None,
                 column: int | None = None, location: str | None = None):
        self.line = line
        self.column = column
        self.location = location
        prefix = ""
        if line is not None:
            prefix = f"line {line}, column {column}: "
        elif location:
            prefix = f"{location}: "
        super().__init__(prefix + message)


class AssessmentParseError(Ctm2Error):
    """Assessment bytes are not a well-formed assessment document."""


class ReportParseError(Ctm2Error):
    """Report JSON does not match the expected report shape."""


class UnknownIdError(Ctm2Error):
    """A domain, criterion or assessment id does not exist."""


class BindingError(Ctm2Error):
    """An assessment's model_id/model_version does not match the catalog."""


class TargetRangeError(Ctm2Error):
    """A requested target MIL lies outside 0..max_level."""


class WorkspaceError(Ctm2Error):
    """Workspace layout, id or format_version problem."""


class ExportError(Ctm2Error):
    """Requested export format is not applicable to the report kind."""
