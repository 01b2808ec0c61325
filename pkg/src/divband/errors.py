"""Semantic exception hierarchy shared by all divband modules."""


class DivbandError(Exception):
    """Base class for all package errors."""


# --- parameter validation ---

class MissingKey(DivbandError):
    """A required model parameter key is absent."""


class NonPositiveRate(DivbandError):
    """c, lambda, alpha or delta is not strictly positive."""


class NegativeBeta(DivbandError):
    """Investor arrival intensity beta is negative."""


class PhiBelowOne(DivbandError):
    """Proportional funding cost phi is below one."""


# --- evaluation domains ---

class NegativeX(DivbandError):
    """Surplus level must be non-negative."""


class OutOfDomain(DivbandError):
    """Evaluation point lies outside the piece's domain."""


# --- regime / solver ---

class DegenerateRegime(DivbandError):
    """Closed-form barrier quantities requested although (delta+lambda)^2 >= c*alpha*lambda."""


class RegimeMismatch(DivbandError):
    """Operation called outside the regime it is defined for."""


class SingularSystem(DivbandError):
    """Coefficient system is numerically singular (condition number above the guard)."""


class NegativeGap(DivbandError):
    """Lower level exceeds the dividend barrier (a > b)."""


class BracketFailure(DivbandError):
    """Root bracket has unexpected signs; indicates a roots or threshold bug."""


class NoSignChange(DivbandError):
    """Scan for a smooth-fit root exhausted its range without a sign change."""


class PostconditionFailure(DivbandError):
    """A constructed solution violates its smooth-fit postconditions."""


class NonConcave(DivbandError):
    """Input value function fails the concavity pre-check."""


# --- simulation ---

class InvalidStrategy(DivbandError):
    """Band strategy with funding level above the dividend barrier."""


class NonPositiveHorizon(DivbandError):
    """Simulation horizon must be strictly positive."""


# --- grid scheme ---

class NonPositiveStep(DivbandError):
    """Grid step must be strictly positive."""


class UnstableIntegration(DivbandError):
    """Forward integration produced non-finite values; step too large."""


class EmptyRange(DivbandError):
    """Barrier sweep received no candidate levels."""


# --- CLI ---

class ParseError(DivbandError):
    """Malformed configuration input."""
