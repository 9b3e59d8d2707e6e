"""Exception hierarchy shared by the symbolic and numeric layers."""


class WeylflowError(Exception):
    """Base class for all package errors."""


class DivisionByZero(WeylflowError, ZeroDivisionError):
    """Exact division by a polynomial or rational number equal to zero."""


class ContextMismatch(WeylflowError, ValueError):
    """Operands live in different variable contexts, or a symbol is unknown."""


class ParseError(WeylflowError, ValueError):
    """Malformed expression or word text."""


class SingularEvaluation(WeylflowError, ZeroDivisionError):
    """Vector field evaluated on its fixed singularity (T = 0)."""


class PoleHit(WeylflowError, ZeroDivisionError):
    """A map image denominator vanishes at the requested point.

    ``divisor`` holds the canonical string of the vanishing denominator and
    ``map_name`` the generator that was being applied.
    """

    def __init__(self, map_name, variable, divisor):
        self.map_name = map_name
        self.variable = variable
        self.divisor = divisor
        super().__init__(
            f"{map_name}: image of {variable} has a pole on divisor {divisor} = 0")


class DegenerateComposition(WeylflowError, ZeroDivisionError):
    """Composition produced an identically vanishing denominator."""


class ExhaustedResampling(WeylflowError, RuntimeError):
    """Could not draw enough pole-free sample points."""


class DomainError(WeylflowError, ValueError):
    """Integration interval crosses the fixed singularity of the system."""


class StepLimit(WeylflowError, RuntimeError):
    """Integrator exceeded its step budget."""


class AllSamplesPoles(WeylflowError, ValueError):
    """Every trajectory sample lies on a pole of the map."""
