"""Exception hierarchy shared by every medianlab module."""

from __future__ import annotations


class MedianlabError(Exception):
    """Base class for domain errors (CLI exit code 1)."""

    code = "MedianlabError"

    def __init__(self, message: str = "", **details):
        super().__init__(message or self.code)
        self.details = details

    def to_json(self) -> dict:
        return {"error": self.code, "message": str(self), **self.details}


class CyclicCovers(MedianlabError):
    code = "CyclicCovers"


class DuplicateElement(MedianlabError):
    code = "DuplicateElement"


class UnknownElement(MedianlabError):
    code = "UnknownElement"


class RedundantCover(MedianlabError):
    code = "RedundantCover"


class NotALattice(MedianlabError):
    code = "NotALattice"


class NotACongruence(MedianlabError):
    code = "NotACongruence"


class SizeLimitExceeded(MedianlabError):
    code = "SizeLimitExceeded"


class TermSyntaxError(MedianlabError):
    code = "SyntaxError"

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} at position {position}", position=position)
        self.position = position


class UnboundVariable(MedianlabError):
    code = "UnboundVariable"


class ArityTooLarge(MedianlabError):
    code = "ArityTooLarge"


class NotSymmetric(MedianlabError):
    code = "NotSymmetric"


class TooManyMedians(MedianlabError):
    code = "TooManyMedians"


class CloneCapExceeded(MedianlabError):
    code = "CloneCapExceeded"


class OrderNotAntisymmetric(MedianlabError):
    code = "OrderNotAntisymmetric"


class EquivalenceViolated(MedianlabError):
    code = "EquivalenceViolated"


class UnknownName(MedianlabError):
    code = "UnknownName"


class SizeUnsupported(MedianlabError):
    code = "SizeUnsupported"


class MismatchReport(MedianlabError):
    code = "MismatchReport"


class ExtensionNotMedian(MedianlabError):
    code = "ExtensionNotMedian"
