"""Exception hierarchy shared by every stage of the ranking pipeline."""

from __future__ import annotations


class AltrankError(Exception):
    """Base class for all errors raised by altrank."""


class MalformedLineError(AltrankError):
    """One or more input lines could not be parsed.

    Attributes:
        problems: ``(line_number, message)`` pairs, one per bad line.
    """

    def __init__(self, problems, source=None):
        self.problems = list(problems)
        self.source = source
        where = f"{source}: " if source else ""
        shown = "; ".join(f"line {n}: {msg}" for n, msg in self.problems[:5])
        more = len(self.problems) - 5
        if more > 0:
            shown += f"; ... ({more} more)"
        super().__init__(f"{where}{len(self.problems)} malformed line(s): {shown}")


class InconsistentJournalError(AltrankError):
    """The same paper was attributed to two different journals."""

    def __init__(self, paper_id, first, second, line):
        self.paper_id = paper_id
        self.first = first
        self.second = second
        self.line = line
        super().__init__(
            f"line {line}: paper {paper_id!r} listed under journal {second!r} "
            f"but earlier under {first!r}"
        )


class NonNumericScoreError(AltrankError):
    def __init__(self, value, row):
        self.value = value
        self.row = row
        super().__init__(f"row {row}: score {value!r} is not a finite number")


class DuplicateJournalError(AltrankError):
    def __init__(self, journal_id, row):
        self.journal_id = journal_id
        self.row = row
        super().__init__(f"row {row}: journal {journal_id!r} appears more than once")


class MissingWeightError(AltrankError):
    def __init__(self, source):
        self.source = source
        super().__init__(f"no weight configured for source {source!r} and no 'other' default")


class NotConvergedError(AltrankError):
    def __init__(self, method, max_iter, residual):
        self.method = method
        self.max_iter = max_iter
        self.residual = residual
        super().__init__(
            f"{method} did not converge in {max_iter} iterations (residual {residual:.3e})"
        )


class DegenerateNetworkError(AltrankError):
    """The network carries no weight at all, so there is nothing to rank."""


class InsufficientOverlapError(AltrankError):
    def __init__(self, first, second, overlap):
        self.pair = (first, second)
        self.overlap = overlap
        super().__init__(
            f"schemes {first!r} and {second!r} share only {overlap} journal(s); need at least 3"
        )


class EmptyCorpusError(AltrankError):
    """The mention input contained no usable records."""


class ConfigError(AltrankError):
    """Invalid or inconsistent configuration."""


class ZeroVarianceWarning(UserWarning):
    """A scheme has constant scores, so its correlations are undefined."""
