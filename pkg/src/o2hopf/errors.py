"""Exception types shared across the package."""


class O2HopfError(Exception):
    """Base class for all package errors."""


class NonPositiveParameter(O2HopfError):
    """A model constant that must be strictly positive is not."""

    def __init__(self, name, value):
        self.name = name
        self.value = value
        super().__init__(f"parameter '{name}' must be strictly positive, got {value!r}")


class InadmissibleRegime(O2HopfError):
    """Parameters outside the regime where the O(2)-Hopf analysis applies."""


class DomainMismatch(O2HopfError):
    """Two spatial objects defined over different periodic domains."""


class SingularSystem(O2HopfError):
    """A 2x2 resolvent system is singular (degenerate parameter set)."""


class NumericalBlowup(O2HopfError):
    """Simulated field norm exceeded the configured bound."""


class WindowTooShort(O2HopfError):
    """Time series too short to estimate an oscillation frequency."""


class NoSaturation(O2HopfError):
    """Amplitude did not settle within the simulation horizon."""


class StepSizeUnderflow(O2HopfError):
    """Integrator step size shrank below the representable minimum."""
