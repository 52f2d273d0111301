"""Exception hierarchy shared across the simulator.

Every error carries a distinct CLI exit code so batch scripts can tell
failure modes apart without parsing messages.
"""


class SimulationError(Exception):
    """Base class for all simulator failures."""

    exit_code = 1


class ParseError(SimulationError):
    """Configuration text is not valid JSON."""

    exit_code = 2

    def __init__(self, message, line=None, column=None):
        if line is not None:
            message = f"{message} (line {line}, column {column})"
        super().__init__(message)
        self.line = line
        self.column = column


class SchemaError(SimulationError):
    """Configuration JSON violates the scene schema."""

    exit_code = 3


class ZeroState(SimulationError):
    """A state or projected state has vanishing norm."""

    exit_code = 4


class NotNormalized(SimulationError):
    """An operation requiring a unit-norm state received one that is not."""

    exit_code = 5


class DomainError(SimulationError):
    """A numeric argument lies outside its valid range."""

    exit_code = 6


class EmptySequence(SimulationError):
    """An element sequence that must be nonempty is empty."""

    exit_code = 7


class NotMaximallyNonseparable(SimulationError):
    """The ball representation applies only to concurrence-1 modes."""

    exit_code = 8


class StepTooCoarse(SimulationError):
    """Path sampling too coarse for the continuity witness."""

    exit_code = 9


class NotClosed(SimulationError):
    """A transformation sequence does not compose to plus or minus identity."""

    exit_code = 10


class FitDiverged(SimulationError):
    """Fringe fit residual too large; wrong tilt or degenerate scan."""

    exit_code = 11


class DegeneratePattern(SimulationError):
    """A scan line carries no intensity to sample from."""

    exit_code = 12
