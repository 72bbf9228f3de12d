"""Exception hierarchy for bunsetsukit."""


class BunsetsukitError(Exception):
    """Base class for every error raised by the toolkit."""


class ArgumentError(BunsetsukitError, ValueError):
    """An argument is outside what an operation accepts."""


class UnknownLearnerError(ArgumentError):
    """A learner kind that is not in the registry."""

    def __init__(self, kind: str, suggestions: list[str]) -> None:
        """Initialize with the unknown kind and close registered names."""
        self.kind = kind
        self.suggestions = suggestions
        msg = f"unknown learner kind: {kind!r}"
        if suggestions:
            msg += f" (did you mean {', '.join(suggestions)}?)"
        super().__init__(msg)


class CorpusFormatError(BunsetsukitError, ValueError):
    """A corpus file does not follow the tab-separated morpheme format."""

    def __init__(self, line_number: int, reason: str) -> None:
        """Initialize with the 1-based line number and what is wrong there."""
        self.line_number = line_number
        self.reason = reason
        super().__init__(f"line {line_number}: {reason}")


class ModelFormatError(BunsetsukitError, ValueError):
    """A model file cannot be loaded."""
