"""Exception hierarchy shared by all modules."""


class HGError(Exception):
    """Base class for every error raised by hgperiods."""


class PoleError(HGError, ValueError):
    """An argument hit a pole (gamma at a non-positive integer, a series denominator, ...)."""


class DomainError(HGError, ValueError):
    """Evaluation was requested outside the domain where the evaluator is valid."""


class NonConvergenceError(HGError, ArithmeticError):
    """A series or iteration did not reach the requested tolerance."""


class HypothesisError(HGError, ValueError):
    """Parameters violate the hypotheses under which the formulas hold.

    ``violations`` lists one human-readable line per failed hypothesis.
    """

    def __init__(self, violations):
        self.violations = list(violations)
        super().__init__("; ".join(self.violations))


class DegenerateParameterError(HGError, ValueError):
    """A divisor that the construction needs to be non-zero vanished."""


class P1Error(HGError, ValueError):
    """The polynomial p1 is not divisible by t(1 - t)."""


class CoefficientBlowupError(HGError, OverflowError):
    """Exact arithmetic produced an integer larger than the sanity bound."""


class IntegrationError(HGError, ArithmeticError):
    """The ODE integrator or the quadrature rule failed to reach tolerance."""


class FitError(HGError, ArithmeticError):
    """A least-squares fit was too ill-conditioned to be trusted."""
