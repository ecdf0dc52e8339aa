"""Exception types shared across the toolkit."""


class TwistorCheckError(Exception):
    """Base class for all toolkit errors."""


class DegreeError(TwistorCheckError):
    """Polynomial degree data is inconsistent with the declared bundle degrees."""


class NonInvolutiveError(TwistorCheckError):
    """A set of coordinate rules does not define an antiholomorphic involution."""


class RealityError(TwistorCheckError):
    """A section fails its declared reality type."""


class WeightError(TwistorCheckError):
    """A cone equation is not weighted-homogeneous for the given weights."""


class DimensionError(TwistorCheckError):
    """A parameter vector has the wrong length."""


class FiberError(TwistorCheckError):
    """A target point does not lie on the fiber it was claimed to lie on."""


class OriginError(TwistorCheckError):
    """The origin section carries no component label."""


class ModelError(TwistorCheckError):
    """Inconsistent model data or violated operation precondition."""


class GroupAxiomError(TwistorCheckError):
    """Input elements do not form a group; carries a witness."""

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class ScenarioError(TwistorCheckError):
    """Malformed scenario or report input."""
