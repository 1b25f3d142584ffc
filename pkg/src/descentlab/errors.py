"""Exception types shared across the package."""


class ConvergenceError(RuntimeError):
    """An iterative kernel hit its sweep cap before converging.

    ``sweeps`` carries the number of sweeps performed when the failure was
    raised (the cap for the compiled Jacobi kernels; ``None`` when the
    LAPACK fallback does not expose an iteration count).
    """

    def __init__(self, message, sweeps=None):
        super().__init__(message)
        self.sweeps = sweeps
