"""Error types shared across the package.

Validation failures (bad arguments, violated preconditions) raise
PreconditionError; the CLI maps those to exit code 2.  Resource-limit
failures occurring at run time (enumeration budgets, refused sieve spans)
raise BudgetExceededError and map to exit code 1, like the builtin
OverflowError used for 64-bit range violations.
"""


class PreconditionError(ValueError):
    """An argument violates a documented precondition."""


class EmptyRangeError(PreconditionError):
    """A range that was required to contain primes is empty."""


class LevelTooLargeError(PreconditionError):
    """Sieve level R is too large for the requested interval (R^2 >= x)."""


class BudgetExceededError(RuntimeError):
    """A configured enumeration or memory budget would be exceeded."""


class RangeTooLargeError(BudgetExceededError):
    """A single sieve call asked for more than the configured span.

    Callers that need a larger range should iterate segments instead.
    """


def require(condition: bool, message: str) -> None:
    if not condition:
        raise PreconditionError(message)
