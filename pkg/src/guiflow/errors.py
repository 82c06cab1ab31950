"""Exception types shared across the package."""

from __future__ import annotations


class GuiflowError(Exception):
    """Base class for all errors raised by this package."""


class MissingManifest(GuiflowError):
    """Bundle root has no manifest.json."""


class ParseError(GuiflowError):
    """A bundle file violates the line grammar."""

    def __init__(self, file: str, line: int, message: str):
        self.file = file
        self.line = line
        self.message = message
        super().__init__(f"{file}:{line}: {message}")


class DanglingReference(GuiflowError):
    """A bundle file names an activity or component that is not declared."""

    def __init__(self, file: str, line: int, target: str):
        self.file = file
        self.line = line
        self.target = target
        super().__init__(f"{file}:{line}: unresolved reference to {target}")


class Terminated(GuiflowError):
    """Operation requires a running simulator state."""


class IllegalTarget(GuiflowError):
    """Tap target is hidden, disabled, or absent from the current screen."""


class HighlightNotVisible(GuiflowError):
    """Requested highlight component is not a visible widget."""


class BundleInvalid(GuiflowError):
    """Bundle failed validation before exploration."""


class ReplayDiverged(GuiflowError):
    """A recorded action path no longer applies cleanly from launch."""

    def __init__(self, step_index: int, reason: str = ""):
        self.step_index = step_index
        self.reason = reason
        super().__init__(f"replay diverged at step {step_index}" + (f": {reason}" if reason else ""))


class RefIntegrityError(GuiflowError):
    """A screenshot or record reference does not resolve."""


class SchemaError(GuiflowError):
    """A database file is malformed."""

    def __init__(self, file: str, detail: str):
        self.file = file
        self.detail = detail
        super().__init__(f"{file}: {detail}")


class UnknownComponent(GuiflowError):
    """Component is not in the static universe."""


class EmptyModel(GuiflowError):
    """Model database contains no states."""


class NotSuggested(GuiflowError):
    """Confirmed step is not among the current suggestions."""


class UnknownVariant(GuiflowError):
    """Chosen source state is not a variant of the suggestion."""


class EmptySession(GuiflowError):
    """Session has no steps to undo."""


class NoSteps(GuiflowError):
    """Report cannot be finalized without steps."""


class EmptyTitle(GuiflowError):
    """Report title must be non-empty."""


class SessionClosed(GuiflowError):
    """Session was already finalized."""


class AppMismatch(GuiflowError):
    """Report app_id/version does not match the bundle."""
