"""Exception types shared across the package."""


class TriageError(Exception):
    """Base class for all errors raised by this package."""


class DataError(TriageError):
    """Malformed or inconsistent input data (files, records, arguments).

    CLI maps this to exit code 1.
    """


class IllegalTransition(TriageError):
    """A workflow event that is not legal in the case's current state."""

    def __init__(self, state: str, action: str):
        super().__init__(f"action {action!r} is not legal in state {state!r}")
        self.state = state
        self.action = action


class VersionConflict(TriageError):
    """Optimistic-concurrency failure: the case changed under the caller."""

    def __init__(self, case_id: str, expected: int, actual: int):
        super().__init__(
            f"case {case_id!r}: expected version {expected}, store has {actual}"
        )
        self.case_id = case_id
        self.expected = expected
        self.actual = actual
