class JetplexError(Exception):
    pass


class ConfigError(JetplexError):
    pass


# engine errors

class RecursiveSubstitution(JetplexError):
    pass


class UnboundParameter(JetplexError):
    pass


class OrderMismatch(JetplexError):
    pass


class DegreeError(JetplexError):
    pass


class UnsupportedOrder(JetplexError):
    pass


class UnsupportedShape(JetplexError):
    pass


class NotNull(JetplexError):
    pass


class ReconstructionFailure(JetplexError):
    pass


class EliminationFailure(JetplexError):
    pass


class IdentityViolation(JetplexError):
    pass


class NotExact(JetplexError):
    def __init__(self, message: str, *, candidate=None, obstruction=None) -> None:
        super().__init__(message)
        self.candidate = candidate
        self.obstruction = obstruction


class GoldenMismatch(JetplexError):
    pass


# parse errors

class DSLError(JetplexError):
    pass


class DSLSyntaxError(DSLError):
    def __init__(self, message: str, line: int = 1, column: int = 1) -> None:
        super().__init__(f"{message} (line {line}, column {column})")
        self.line = line
        self.column = column


class UnknownSymbol(DSLError):
    pass


class DepthExceeded(DSLError):
    pass
