"""Exception types raised across the toolkit."""


class QramForgeError(Exception):
    """Base class for all toolkit errors."""


class UnknownWire(QramForgeError):
    """A gate references a wire that is not registered in the circuit."""


class ArityMismatch(QramForgeError):
    """Control/target counts do not match the gate kind."""


class OverlappingControlTarget(QramForgeError):
    """A gate uses the same wire more than once."""


class InvalidPolarity(QramForgeError):
    """Negative control polarity on a kind that does not support it."""


class InvalidCondition(QramForgeError):
    """Measurement condition missing, unexpected, or referencing no record."""


class InvalidRegions(QramForgeError):
    """Region blocks are not contiguous, ordered, or covering."""


class NonUnitaryGate(QramForgeError):
    """Measurement or classically conditioned gate where a unitary is required."""


class SchemaViolation(QramForgeError):
    """Circuit document fails validation; message carries the field path."""

    def __init__(self, path: str, message: str):
        super().__init__(f"{path}: {message}")
        self.path = path


class InvalidSharedWire(QramForgeError):
    """Shared wire not among the decomposition's wires."""


class NotSharedControl(QramForgeError):
    """Toffoli pair does not share exactly one control wire."""


class NotSharedTarget(QramForgeError):
    """Toffoli pair does not share exactly the target wire."""


class NonLinearFragment(QramForgeError):
    """Phase polynomial extraction hit a non CNOT+diagonal gate."""


class MissingRegionTags(QramForgeError):
    """Operation requires FANOUT/QUERY/FANIN region tags."""


class PatternMismatch(QramForgeError):
    """Rewrite site does not match a known template."""


class TooManyWires(QramForgeError):
    """Simulation size exceeds the configured wire cap."""


class LayoutMismatch(QramForgeError):
    """Circuit wires do not match the QRAM wire layout."""


class UnknownWireClass(QramForgeError):
    """Wire name does not belong to a known layout class."""
