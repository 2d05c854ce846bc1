"""Exception hierarchy. Every error is a ``ValueError`` so callers can catch broadly."""


class JumpcastError(ValueError):
    pass


class ParameterError(JumpcastError):
    """A model parameter violates its constraint; ``field`` names it."""

    def __init__(self, field: str, message: str):
        super().__init__(f"{field}: {message}")
        self.field = field


class DomainError(JumpcastError):
    pass


class UndefinedGammaError(JumpcastError):
    def __init__(self, message: str = ""):
        super().__init__(
            message
            or "relative volatility is undefined for beta = 0; "
            "all forecasts coincide with p_T"
        )


class EmptyBatchError(JumpcastError):
    pass


class InsufficientSampleError(JumpcastError):
    pass
