"""Exception types shared across the package."""


class HypVerifyError(Exception):
    """Base class for all library errors."""


class FormatError(HypVerifyError):
    """Malformed text input (graph format, list assignments, configs)."""


class BrokenInvolution(HypVerifyError):
    """An edge end has no matching end at the other endpoint."""


class NonSimple(HypVerifyError):
    """The input contains a loop or a parallel edge."""


class UnsupportedSurface(HypVerifyError):
    """The rotation data does not describe a sphere, disk, or cylinder."""


class InvalidSlice(HypVerifyError):
    """A slice trace is not the facial walk of any normal graph."""


class ColorOutsideList(HypVerifyError):
    """A precolored vertex was assigned a color missing from its list."""


class EmptyBoundary(HypVerifyError):
    """The operation needs at least one boundary vertex."""


class DegenerateInput(HypVerifyError):
    """The input graph is empty."""


class ThresholdTooSmall(HypVerifyError):
    """The iteration threshold fails its defining inequality."""


class NotFat(HypVerifyError):
    """The cylinder is not fat enough for the requested check."""


class EmptyBoundarySide(HypVerifyError):
    """A cylinder operation needs both boundary sides to be nonempty."""


class FOutOfDomain(HypVerifyError):
    """The cylinder bound function is undefined at the queried argument."""
