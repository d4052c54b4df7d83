"""Exception types shared across the pipeline."""


class ViralensError(Exception):
    """Base class for all errors raised by this package."""


class SchemaError(ViralensError):
    """A structured input file is missing a required column or field."""


class ValidationError(ViralensError):
    """Input data violates a documented invariant (bad value, bad range)."""


class AssemblyError(ViralensError):
    """Per-document feature bags cannot be combined into one matrix."""


class DecodeError(ViralensError):
    """An image byte stream could not be decoded."""


class ArchiveFormatError(ViralensError):
    """A model archive file is unreadable or has an unknown version."""


class ScoringError(ViralensError):
    """Scoring a design failed; carries the pipeline stage that failed."""

    def __init__(self, stage: str, message: str, variant: str | None = None):
        self.stage = stage
        self.detail = message
        self.variant = variant
        prefix = f"[{stage}]" if variant is None else f"[{stage}:{variant}]"
        super().__init__(f"{prefix} {message}")
