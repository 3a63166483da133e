"""Exception hierarchy.

Every error carries a stable machine-readable ``code`` that the CLI copies
into its JSON error reports.
"""

from __future__ import annotations


class WSpinError(Exception):
    code = "ERROR"
    exit_code = 1

    def to_dict(self) -> dict:
        return {"code": self.code, "message": str(self)}


class PolySyntaxError(WSpinError, ValueError):
    code = "SYNTAX_ERROR"

    def __init__(self, message: str, text: str, position: int):
        self.text = text
        self.position = position
        super().__init__(f"{message} at position {position}: {text!r}")

    def to_dict(self) -> dict:
        d = super().to_dict()
        d["position"] = self.position
        return d


class ZeroPolynomial(WSpinError, ValueError):
    code = "ZERO_POLYNOMIAL"


class NegativeExponent(PolySyntaxError):
    code = "NEGATIVE_EXPONENT"


class NoSolution(WSpinError, ValueError):
    code = "NOT_QUASI_HOMOGENEOUS"


class WeightsNotUnique(WSpinError, ValueError):
    code = "WEIGHTS_NOT_UNIQUE"


class NonPositiveWeight(WSpinError, ValueError):
    code = "NON_POSITIVE_WEIGHT"


class InfiniteGroup(WSpinError, ValueError):
    code = "INFINITE_GROUP"


class OrderCapExceeded(WSpinError):
    code = "ORDER_CAP_EXCEEDED"

    def __init__(self, order: int, generators, cap: int):
        self.order = order
        self.generators = generators
        self.cap = cap
        super().__init__(f"group of order {order} exceeds the element cap {cap}")


class NotInGroup(WSpinError, ValueError):
    code = "NOT_IN_GROUP"


class InvalidOrder(WSpinError, ValueError):
    code = "INVALID_ORDER"


class PointIndexError(WSpinError, IndexError):
    code = "POINT_INDEX"


class NonIntegralDegree(WSpinError, ValueError):
    """The decorations do not come from a W-spin structure.

    ``failures`` is a list of ``(j, degree)`` with ``degree`` the offending
    rational.
    """

    code = "NON_INTEGRAL_DEGREE"

    def __init__(self, failures):
        self.failures = list(failures)
        desc = ", ".join(f"L_{j}: {deg}" for j, deg in self.failures)
        super().__init__(f"non-integral line bundle degree ({desc})")

    def to_dict(self) -> dict:
        d = super().to_dict()
        d["failures"] = [{"j": j, "degree": str(deg)} for j, deg in self.failures]
        return d


class UnsupportedPair(WSpinError, ValueError):
    code = "UNSUPPORTED_PAIR"


class MismatchedBoundary(WSpinError, ValueError):
    code = "MISMATCHED_BOUNDARY"


class OnWall(WSpinError, ValueError):
    """A weight sits on the spectrum of the asymptotic operator."""

    code = "ON_WALL"


class ShapeMismatch(WSpinError, ValueError):
    code = "SHAPE_MISMATCH"


class IllConditioned(WSpinError):
    code = "ILL_CONDITIONED"
    exit_code = 3

    def __init__(self, message: str, diagnostics: dict | None = None):
        self.diagnostics = diagnostics or {}
        super().__init__(message)

    def to_dict(self) -> dict:
        d = super().to_dict()
        d["diagnostics"] = self.diagnostics
        return d


class InternalInconsistency(WSpinError, AssertionError):
    code = "INTERNAL_INCONSISTENCY"
    exit_code = 2


class InputValidationError(WSpinError, ValueError):
    code = "INVALID_INPUT"
