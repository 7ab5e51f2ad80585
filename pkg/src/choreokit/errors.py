"""Exception types shared across the toolkit."""

from __future__ import annotations

from dataclasses import dataclass, field


class ChoreokitError(Exception):
    """Base class for all toolkit errors."""


@dataclass(frozen=True)
class IntegrityFinding:
    """One structural problem located in a library manifest."""

    source: str
    key: str
    message: str

    def __str__(self) -> str:
        return f"{self.source}: {self.key}: {self.message}"


class LibraryValidationError(ChoreokitError):
    """Raised when a library directory fails structural validation."""

    def __init__(self, findings: list[IntegrityFinding]):
        self.findings = findings
        summary = "; ".join(str(f) for f in findings[:5])
        if len(findings) > 5:
            summary += f" (+{len(findings) - 5} more)"
        super().__init__(f"{len(findings)} library integrity error(s): {summary}")


class UnknownIdError(ChoreokitError, LookupError):
    """A referenced id does not exist in the library."""


class ScriptValidationError(ChoreokitError):
    """A candidate script violates the annotated-script contract."""


class GenerationError(ChoreokitError):
    """Script generation produced no usable variant."""


class SegmentationError(ChoreokitError):
    """Script text cannot be segmented."""


class SynthesisError(ChoreokitError):
    """Speech synthesis failed; carries the segments completed so far."""

    def __init__(self, message: str, completed=None):
        super().__init__(message)
        self.completed = list(completed or [])


class CompositionError(ChoreokitError):
    """A composer proposed assets that are not linked to the segment."""


class AlignmentError(ChoreokitError):
    """Channel alignment cannot produce a valid timeline."""


class TimelineFormatError(ChoreokitError):
    """An emitted timeline document cannot be parsed back."""


class SimulationError(ChoreokitError):
    """The simulator refused its input."""


class TraceMismatchError(ChoreokitError):
    """A trace does not correspond to the timeline it is checked against."""


class PlacementError(ChoreokitError):
    """No feasible projection point exists; carries per-filter rejections."""

    def __init__(self, message: str, rejections: dict[str, int] | None = None,
                 samples: int = 0):
        super().__init__(message)
        self.rejections = dict(rejections or {})
        self.samples = samples


class ConfigError(ChoreokitError):
    """Configuration file or value is invalid."""


@dataclass
class Diagnostic:
    """Non-fatal note produced while running a pipeline stage."""

    stage: str
    message: str
    details: dict = field(default_factory=dict)

    def __str__(self) -> str:
        return f"[{self.stage}] {self.message}"
