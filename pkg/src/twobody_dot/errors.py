"""Exception hierarchy shared by the computational modules."""


class DomainError(ValueError):
    """An input lies outside the mathematical domain of an operation."""


class OutOfFamilyError(DomainError):
    """Requested equilibrium does not exist in the asked-for family.

    ``reason`` is ``"deficit"`` when 1 + u^2 - v^2 <= 0 (no asymmetric
    family at all) and ``"momentum"`` when |p_phi| >= p_max.
    """

    def __init__(self, message: str, reason: str):
        super().__init__(message)
        self.reason = reason


class UnstableStateError(DomainError):
    """Harmonic quantization was requested for a saddle or a zero mode."""


class ConfigError(ValueError):
    """Malformed material/trap configuration file."""

    def __init__(self, message: str, line: int | None = None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line
