"""Exception hierarchy. Every error is also a ``ValueError``."""


class SicLabError(ValueError):
    pass


class DimensionMismatch(SicLabError):
    pass


class NotHermitian(SicLabError):
    pass


class NonPositive(SicLabError):
    """Operator (or Bloch vector image) has an eigenvalue below -tol_psd."""


class BadTrace(SicLabError):
    pass


class Incomplete(SicLabError):
    """POVM elements do not sum to the identity."""


class WrongCount(SicLabError):
    pass


class NotSymmetric(SicLabError):
    """Gram matrix of the POVM is not of the two-valued SIC form."""


class OutOfRange(SicLabError):
    pass


class SingularFamily(SicLabError):
    """a*d**3 - 1 vanishes, so the family has no dual basis."""


class UnsupportedDimension(SicLabError):
    pass


class UnsupportedOrder(SicLabError):
    pass
