"""Exception types shared across the library."""


class MomentDoesNotExist(ValueError):
    """The requested moment is infinite for the given tail index."""


class NoClosedForm(Exception):
    """No exact expression exists for this cell; use Monte Carlo or a bound."""


class MethodUnavailable(Exception):
    """The requested evaluation method does not apply to this cell."""


class EvaluationOverflow(OverflowError):
    """Exact evaluation aborted: the instance exceeds the validated size guard."""

    def __init__(self, op: str, **params):
        self.op = op
        self.params = params
        detail = ", ".join(f"{k}={v}" for k, v in params.items())
        super().__init__(f"{op} beyond validated range ({detail})")


class QuadratureFailure(RuntimeError):
    """Numerical integration could not reach the requested accuracy."""
