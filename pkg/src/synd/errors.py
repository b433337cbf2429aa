"""Exception hierarchy shared by all modules.

Every domain error carries a stable machine-readable ``code`` so the
command line layer can map it to structured output and a uniform exit
status.
"""


class SyndError(Exception):
    """Base class for all domain errors."""

    code = "error"


class ParseError(SyndError):
    """Malformed input file; carries a 1-based line number when known."""

    code = "parse"

    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class EmptyLanguage(SyndError):
    code = "empty-language"


class FiniteLanguage(SyndError):
    code = "finite-language"


class AlphabetMismatch(SyndError):
    code = "alphabet-mismatch"


class NotComplete(SyndError):
    code = "not-complete"


class NotTrim(SyndError):
    code = "not-trim"


class NotInLanguage(SyndError):
    code = "not-in-language"


class SymbolClash(SyndError):
    code = "symbol-clash"


class InvalidMap(SyndError):
    code = "invalid-map"


class NotProlongable(SyndError):
    code = "not-prolongable"


class NotGrowing(SyndError):
    code = "not-growing"


class Stalled(SyndError):
    code = "stalled"


class SeedMortal(SyndError):
    code = "seed-mortal"


class Erasing(SyndError):
    code = "erasing"


class BlockNotInFixedPoint(SyndError):
    code = "block-not-in-fixed-point"


class CaseMismatch(SyndError):
    code = "case-mismatch"


class RateUnresolved(SyndError):
    code = "rate-unresolved"


class UnresolvedComparison(RateUnresolved):
    code = "unresolved-comparison"


class StreamsDiffer(SyndError):
    code = "streams-differ"

    def __init__(self, index, first, second):
        self.index = index
        self.first = first
        self.second = second
        super().__init__(
            f"streams differ at position {index}: {first!r} != {second!r}"
        )
