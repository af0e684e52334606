"""Exception hierarchy shared by every module.

Validation problems derive from :class:`ValidationError` (CLI exit code 2),
resource limits from :class:`CapExceeded` (CLI exit code 3).
"""


class GhError(Exception):
    pass


class ValidationError(GhError, ValueError):
    pass


class NotSquareError(ValidationError):
    pass


class NonFiniteDistanceError(ValidationError):
    def __init__(self, i, j):
        super().__init__(f"distance ({i}, {j}) is not finite")
        self.i, self.j = i, j


class AsymmetryError(ValidationError):
    def __init__(self, i, j, dij, dji):
        super().__init__(f"asymmetric distances: d({i},{j})={dij!r} but d({j},{i})={dji!r}")
        self.i, self.j = i, j


class NegativeDistanceError(ValidationError):
    def __init__(self, i, j, value):
        super().__init__(f"negative distance d({i},{j})={value!r}")
        self.i, self.j = i, j


class NonzeroDiagonalError(ValidationError):
    def __init__(self, i, value):
        super().__init__(f"nonzero self-distance d({i},{i})={value!r}")
        self.i = i


class TriangleViolation(ValidationError):
    def __init__(self, i, j, k, defect):
        super().__init__(
            f"triangle inequality fails: d({i},{j}) exceeds d({i},{k}) + d({k},{j}) by {defect!r}"
        )
        self.i, self.j, self.k = i, j, k
        self.defect = defect


class LabelError(ValidationError):
    pass


class NonpositiveScale(ValidationError):
    pass


class InvalidExponent(ValidationError):
    pass


class OddCycleSize(ValidationError):
    pass


class GeneratorError(ValidationError):
    pass


class SizeMismatch(ValidationError):
    pass


class NotACorrespondence(ValidationError):
    pass


class NotAProduct(ValidationError):
    pass


class LengthMismatch(ValidationError):
    pass


class DiameterNotOne(ValidationError):
    def __init__(self, k, diam):
        super().__init__(f"factor {k} has diameter {diam!r}, expected 1")
        self.k = k
        self.diam = diam


class SchemaError(ValidationError):
    def __init__(self, path, message):
        super().__init__(f"{path}: {message}")
        self.path = path


class CapExceeded(GhError):
    def __init__(self, what, required, cap):
        super().__init__(f"{what}: requires {required}, cap is {cap}")
        self.what = what
        self.required = required
        self.cap = cap


class SearchCapExceeded(CapExceeded):
    """Clique search hit its node cap; ``best`` is the largest clique seen."""

    def __init__(self, required, cap, best):
        super().__init__("clique search nodes", required, cap)
        self.best = list(best)


class InsufficientCopies(UserWarning):
    pass


class ParseError(ValidationError):
    def __init__(self, path, line, message):
        super().__init__(f"{path}:{line}: {message}")
        self.path = path
        self.line = line


class InputNotFound(ValidationError):
    pass
