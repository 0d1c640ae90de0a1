"""Exception types raised across the package."""


class RadialPoseError(Exception):
    """Base class for all errors raised by radialpose."""


class DegeneratePoint(RadialPoseError):
    """The division model maps a point to infinity (third coordinate ~ 0)."""


class NoRealPreimage(RadialPoseError):
    """Positive lambda with no real distorted radius for the undistorted point."""


class ConvergenceFailure(RadialPoseError):
    pass


class RankDeficient(RadialPoseError):
    pass


class AllZeroCoefficients(RadialPoseError):
    pass


class DegenerateSample(RadialPoseError):
    """The correspondences do not determine the model (rank-deficient design)."""


class InsufficientCorrespondences(RadialPoseError):
    pass


class NoModelFound(RadialPoseError):
    pass


class DecompositionAmbiguous(RadialPoseError):
    pass


class ZeroVector(RadialPoseError):
    pass


class EmptyInput(RadialPoseError):
    pass


class GenerationFailure(RadialPoseError):
    pass


class ConfigError(RadialPoseError):
    pass


class ParseError(RadialPoseError):
    pass
