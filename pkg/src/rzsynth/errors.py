"""Exception types shared across the package."""


class CapacityError(ValueError):
    """The requested accuracy needs an ancilla count beyond the supported integer width."""


class SimulationCapError(RuntimeError):
    """The circuit exceeds the configured statevector qubit cap."""


class ConstructionError(RuntimeError):
    """An internal self-check failed; indicates a bug in circuit construction."""


class RunawayError(RuntimeError):
    """The repeat-until-success loop exceeded its iteration cap."""
