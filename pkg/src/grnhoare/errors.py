"""Exception hierarchy.

Every error carries a short ``code`` used by the command line front end to
print ``error[CODE]: message`` diagnostics.
"""


class GrnError(Exception):
    code = "error"


class ParseError(GrnError):
    code = "syntax"

    def __init__(self, message, line=None, column=None):
        self.line = line
        self.column = column
        if line is not None:
            message = f"{line}:{column}: {message}"
        super().__init__(message)


class NetworkError(GrnError):
    code = "network"


class DuplicateName(NetworkError):
    code = "duplicate-name"


class UnknownName(NetworkError):
    code = "unknown-name"


class UnknownVariable(UnknownName):
    code = "unknown-variable"


class UnknownSymbol(UnknownName):
    code = "unknown-symbol"


class MultiplexCycle(NetworkError):
    code = "multiplex-cycle"


class ThresholdOutOfRange(NetworkError):
    code = "threshold-range"


class ParamOutOfBounds(NetworkError):
    code = "param-range"


class ParamIndexNotSubsetOfPredecessors(NetworkError):
    code = "param-index"


# the wp builders raise this name; same condition as above
NotAPredecessorSubset = ParamIndexNotSubsetOfPredecessors


class IncompleteValuation(NetworkError):
    code = "incomplete-valuation"


class AssignOutOfRange(GrnError):
    code = "assign-range"


class SizeLimitExceeded(GrnError):
    code = "size-limit"


class ResultTooLarge(GrnError):
    code = "result-too-large"


class WhileNotSupportedForCrossCheck(GrnError):
    code = "while-cross-check"
