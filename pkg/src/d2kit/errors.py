"""Exception hierarchy shared by the whole toolkit."""


class D2KitError(Exception):
    """Base class for every error raised by d2kit."""


class ParseError(D2KitError, ValueError):
    """Malformed text encoding of an element, matrix, word or presentation."""


class ModulusMismatch(D2KitError, ValueError):
    pass


class NotDivisible(D2KitError, ArithmeticError):
    pass


class NotAUnit(D2KitError, ArithmeticError):
    pass


class DimensionMismatch(D2KitError, ValueError):
    pass


class DetNotOne(D2KitError, ArithmeticError):
    pass


class NotInvertible(D2KitError, ArithmeticError):
    pass


class DetMismatch(D2KitError, ArithmeticError):
    pass


class SnfObstruction(D2KitError, ArithmeticError):
    """The mod-p Smith form is not Diag(alpha_p, 1, ..., 1) up to units."""

    def __init__(self, p, diag):
        self.p = p
        self.diag = list(diag)
        shown = ", ".join(str(d) for d in self.diag)
        super().__init__(f"mod {p} Smith form is Diag({shown}); need k-1 unit invariant factors")


class RelatorNotTrivial(D2KitError, ValueError):
    def __init__(self, relator, value):
        self.relator = relator
        self.value = value
        super().__init__(f"relator {relator!r} evaluates to {value}, not the identity")


class UnknownGenerator(D2KitError, KeyError):
    pass


class NotInAugmentationIdeal(D2KitError, ValueError):
    pass


class NotACocycle(D2KitError, ValueError):
    pass


class NotCoprime(D2KitError, ValueError):
    pass


class CertificateError(D2KitError, ValueError):
    """A certificate envelope could not be parsed (unknown kind, missing field)."""
