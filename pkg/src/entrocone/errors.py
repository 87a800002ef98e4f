"""Exception types shared across the package."""


class EntroconeError(Exception):
    """Base class for all package errors."""


class SizeLimit(EntroconeError):
    """An input exceeds a guard against exponential blowup."""


class NotAPoset(EntroconeError):
    def __init__(self, axiom, i, j):
        self.axiom, self.i, self.j = axiom, i, j
        super().__init__(f"{axiom} fails for objects ({i!r}, {j!r})")


class NoMinimalCommonAncestor(EntroconeError):
    def __init__(self, i, j):
        self.i, self.j = i, j
        super().__init__(f"objects {i!r} and {j!r} have no minimal common ancestor")


class NoInitialObject(EntroconeError):
    pass


class NotADistribution(EntroconeError):
    pass


class UnknownLabel(EntroconeError):
    pass


class NotMeasurePreserving(EntroconeError):
    def __init__(self, atom, expected, got):
        self.atom, self.expected, self.got = atom, expected, got
        super().__init__(f"atom {atom!r}: expected weight {expected}, got {got}")


class NotCommutative(EntroconeError):
    pass


class ShapeMismatch(EntroconeError):
    pass


class ZeroWeightAtom(EntroconeError):
    pass


class NotAnIsomorphism(EntroconeError):
    pass


class MarginalMismatch(EntroconeError):
    pass


class NotInCone(EntroconeError):
    pass


class NumericalRankFailure(EntroconeError):
    """Reserved; exact arithmetic makes this unreachable."""


class ParseError(EntroconeError):
    pass


class InvariantViolation(EntroconeError):
    """An identity that must hold by construction failed: an implementation bug."""
