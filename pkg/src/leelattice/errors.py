"""Exception hierarchy shared by all leelattice modules."""


class LeeLatticeError(Exception):
    """Base class for every error raised by this package."""


class InvalidModulusError(LeeLatticeError, ValueError):
    """Modulus below 2."""


class UnsupportedModulusError(LeeLatticeError, ValueError):
    """Operation needs a prime modulus (field arithmetic)."""


class RankDeficientError(LeeLatticeError, ValueError):
    """Generator columns are linearly dependent over Z_q."""


class ShapeError(LeeLatticeError, ValueError):
    """Operand dimensions do not agree."""


class CapacityError(LeeLatticeError, ValueError):
    """Exhaustive procedure would exceed its size guard."""


class ParseError(LeeLatticeError, ValueError):
    """Malformed matrix, vector or lattice file."""
