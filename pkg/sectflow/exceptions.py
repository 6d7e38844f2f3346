class SectflowError(Exception):
    """
    Base class for every error raised by sectflow.
    """


class InvalidArgumentError(SectflowError, ValueError):
    pass


class EmptyShapeError(SectflowError, ValueError):
    pass


class ShapeExceedsBallError(SectflowError, ValueError):
    """
    Raised when a foreground pixel corner (or complex vertex) is not strictly inside B(0, R).
    """

    def __init__(self, location: tuple, norm: float, radius: float, kind: str = 'pixel') -> None:
        self.location = location
        self.norm = norm
        self.radius = radius
        super().__init__(
            f'Foreground {kind} {location} reaches distance {norm!r} from the origin, '
            f'which is not strictly inside the ball of radius {radius!r}!')


class IncompatibleGridsError(SectflowError, ValueError):
    pass


class DegenerateGroupError(SectflowError, ValueError):
    pass


class ConfigurationError(SectflowError, ValueError):
    pass


class ParseError(SectflowError, ValueError):
    pass
