"""Exception types shared across the workbench.

Configuration problems (bad spec files, unknown generators) are kept
separate from check failures so the CLI can map them to distinct exit
codes.
"""


class RelhypError(Exception):
    """Base class for all workbench errors."""


class ConfigParseError(RelhypError):
    """A group-spec file or inline word could not be parsed."""


class UnknownGenerator(RelhypError):
    """A word uses a generator name the spec does not declare."""


class UnknownPeripheral(RelhypError):
    """A peripheral index is not declared by the spec."""


class UnsupportedFamily(RelhypError):
    """The requested operation is not decidable by the built-in method
    for this group family."""


class UnsupportedPeripheral(RelhypError):
    """No covering construction is available for this peripheral kind."""


class BoundExceeded(RelhypError):
    """A length could not be certified within the caller-supplied cap."""


class WindowTooLarge(RelhypError):
    """Window construction would exceed the vertex-count cap."""


class CapExceeded(RelhypError):
    """An enumeration exceeded its cap before completing."""


class MixedSpecs(RelhypError):
    """Two objects from different group specs were combined."""


class NotTrivialInG(RelhypError):
    """A word handed to the relative-area search does not represent the
    identity (as far as the spec's word problem can tell)."""


class MetricMismatch(RelhypError):
    """Coverings over different metrics cannot be combined."""


class NotSeparated(RelhypError):
    """A separated-union precondition failed.

    Carries a witness pair of points from two pieces that are closer
    than the required separation scale.
    """

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


# The Lemma 3.2 recursion surfaces the same condition under the name the
# covering pipeline uses.
SeparationFailed = NotSeparated


class EmptyCovering(RelhypError):
    """measure_cover was handed a covering with no cells."""


class IncompatibleScales(RelhypError):
    """Covering assembly received coverings at unusable scales."""


class NotOnSides(RelhypError):
    """A point handed to a triangle query does not lie on the stated side."""


class OutOfRange(RelhypError):
    """Relator index outside the materialized family."""


class SchemaMismatch(RelhypError):
    """A report document does not match its declared schema."""
