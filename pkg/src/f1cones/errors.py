"""Exception types shared across the package."""


class F1Error(Exception):
    """Base class for all library errors."""


class InvariantError(F1Error, ValueError):
    """A value violates a structural invariant."""


# f1algebra
class EmptyPresentation(F1Error):
    pass


class ZeroRelation(F1Error):
    pass


class UndecidedWithinBound(F1Error):
    pass


class NotFinitelyGeneratedSaturation(F1Error):
    pass


class ZeroElement(F1Error):
    pass


class SNotInIdeal(F1Error):
    pass


class ZeroIdeal(F1Error):
    pass


class EmptyCompletion(F1Error):
    """Completing would puncture the whole cone (the empty formal scheme)."""


class KrullWarning(UserWarning):
    """Some ideal generator has identically zero log on the cone."""


# cone
class NotPointed(F1Error):
    pass


class CharacterMismatch(F1Error):
    pass


class DimensionBound(F1Error):
    pass


# complex
class SelfGluedFaces(InvariantError):
    pass


class IncoherentTransition(InvariantError):
    pass


class NonIsomorphicGluing(InvariantError):
    pass


class NonConstantSystem(F1Error):
    pass


class NotASubcomplex(F1Error):
    pass


class NotLocallyFinite(F1Error):
    pass


# functors
class NonConstantCharacters(F1Error):
    def __init__(self, message, loop=None, matrix=None):
        super().__init__(message)
        self.loop = loop
        self.matrix = matrix


class ZeroCenter(F1Error):
    pass


# cli
class SchemaError(F1Error):
    def __init__(self, message, field=None, line=None):
        where = ""
        if line is not None:
            where += f"line {line}: "
        if field:
            where += f"{field}: "
        super().__init__(where + message)
        self.field = field
        self.line = line


class UnknownCommand(F1Error):
    pass
