"""Exception hierarchy shared by all solver modules."""


class DkpError(Exception):
    """Base class for every error raised by this package."""


class DomainError(DkpError, ValueError):
    """Input lies outside the supported parameter domain."""


# special functions
class PoleParameter(DomainError):
    """Denominator parameter of the Kummer series is a non-positive integer."""


class DomainTooLarge(DomainError):
    """|z| exceeds the supported evaluation radius."""


class BranchAmbiguity(DomainError):
    """Argument sits on the branch cut of a fractional power (negative real axis)."""


class LogarithmicCase(DomainError):
    """2*mu is an integer; W needs the logarithmic solution pair."""


class MuDegenerate(DomainError):
    """mu is too close to zero; the two Whittaker M solutions coincide."""


class NoConvergence(DkpError, ArithmeticError):
    """Series did not reach its tolerance within the term budget."""


class InaccurateEvaluation(DkpError, ArithmeticError):
    """An evaluation's error estimate exceeds the downstream acceptance tolerance."""


# physics model
class KleinBorder(DomainError):
    """Energy too close to E^2 = 1 for the scattering parameterisation."""


class WrongKind(DomainError):
    """Operation called on a barrier where a well is required, or vice versa."""


# scattering
class SingularMatching(DkpError, ArithmeticError):
    """The x=0 matching system is numerically singular."""


class UnitarityViolation(DkpError, ArithmeticError):
    """R + T deviates from 1 beyond tolerance."""


class EmptyGrid(DomainError):
    """A sweep grid has too few points or an empty range."""


class NoPeaks(DkpError):
    """A resonance scan found no qualifying transmission peaks."""


# oracle
class StepUnderflow(DkpError, ArithmeticError):
    """The adaptive integrator could not make progress."""
