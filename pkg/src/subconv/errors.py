"""Exception types shared across the toolkit."""


class SubconvError(Exception):
    """Base class for all toolkit errors."""


class TableCapError(SubconvError):
    """Requested coefficient table exceeds the configured cap."""


class UnsupportedWeightError(SubconvError, ValueError):
    """Weight outside the supported level-one cusp form weights."""


class CoefficientRangeError(SubconvError, IndexError):
    """Coefficient index outside the built table."""


class InvalidModulusError(SubconvError, ValueError):
    """Modulus is not an odd prime."""


class NonPrimitiveCharacterError(SubconvError, ValueError):
    """Operation requires a primitive character."""


class BesselDomainError(SubconvError, ValueError):
    """Bessel argument or order outside the supported domain."""


class QuadratureError(SubconvError, RuntimeError):
    """Adaptive quadrature failed to reach the requested tolerance."""


class EmptyFamilyError(SubconvError, ValueError):
    """No admissible moduli in the requested range."""


class InsufficientPrimesError(SubconvError, ValueError):
    """A dyadic window of the product family contains no usable primes."""


class TableTooShortError(SubconvError, ValueError):
    """Coefficient table too short for the requested sum."""


class NonInvertibleError(SubconvError, ValueError):
    """Residue is not invertible for the given modulus."""
