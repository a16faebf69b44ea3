"""
Exception Hierarchy

Errors raised by the model, solver and sweep layers. The CLI maps
configuration problems to exit code 1 and numerical failures to exit code 2.
"""


class DickeModelError(Exception):
    """Base class for every error raised by this package"""


class ConfigurationError(DickeModelError, ValueError):
    """Invalid configuration document or command-line usage"""


class RegimeError(ConfigurationError):
    """
    A model inequality is violated

    The message names the violated inequality, e.g.
    ``regime violation: δ_C must be negative``.
    """


class OutputError(DickeModelError, OSError):
    """Output file could not be written"""


class NumericalError(DickeModelError, RuntimeError):
    """Base class for failures inside a numerical computation"""


class ConsistencyError(NumericalError):
    """A computed quantity violates an invariant it must satisfy by construction"""


class SingularInputError(NumericalError):
    """Input sits on a singular point of a closed-form expression (β0² = 1)"""


class InstabilityError(NumericalError):
    """Normal-mode frequencies are complex or imaginary"""


class DegenerateModeError(NumericalError):
    """Normal modes are degenerate (critical point or ω₊ ≈ ω₋)"""


class IntegrationError(NumericalError):
    """
    Covariance integrator failed

    Attributes:
        message: Solver status message
        t_reached: Last time the solver reached
    """

    def __init__(self, message: str, t_reached: float = float("nan")):
        super().__init__(f"{message} (integration stopped at t={t_reached:.6g})")
        self.message = message
        self.t_reached = t_reached


class EigensolverError(NumericalError):
    """Iterative eigensolver did not converge"""


class ResourceLimitError(NumericalError):
    """Oracle problem exceeds the configured dimension cap"""
