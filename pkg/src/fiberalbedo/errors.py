"""Exception types shared across the solver modules."""


class ConfigurationError(ValueError):
    """Raised for invalid grid/run configuration (bad subinterval count, etc.)."""


class SolverDiagnosticError(RuntimeError):
    """Raised when a runtime assumption of the eigenbasis solver fails.

    The message carries enough context (omega, grid size, offending
    quantity) to reproduce the failure.
    """
