"""Exception types raised by the package."""


class PhysicsError(RuntimeError):
    """A computation could not deliver a result meeting its accuracy contract."""


class DegenerateQubitError(PhysicsError, ValueError):
    """omega = 0: the qubit does not move, so oscillation-based quantities are undefined."""


class StepSizeUnderflow(PhysicsError):
    def __init__(self, message, time=None):
        super().__init__(message)
        self.time = time


class TruncationError(PhysicsError):
    """Probability leaked past the top of the number ladder."""

    def __init__(self, message, lost_mass, required_n_max):
        super().__init__(message)
        self.lost_mass = lost_mass
        self.required_n_max = required_n_max


class AliasingError(PhysicsError):
    """Transform too small for the counting distribution it has to resolve."""


class BracketMissError(PhysicsError):
    """The minimum of the error curve sits on the edge of the search bracket."""

    def __init__(self, message, curve):
        super().__init__(message)
        self.curve = curve


class ConfigError(ValueError):
    pass
