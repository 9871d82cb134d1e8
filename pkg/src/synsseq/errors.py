"""Exception hierarchy for synsseq."""


class SynSSError(Exception):
    pass


class ChartError(SynSSError):
    pass


class InhomogeneousError(ChartError):
    pass


class ZeroElementError(ChartError):
    pass


class ChartParseError(SynSSError):
    def __init__(self, message, line=0, col=0):
        self.line = line
        self.col = col
        self.message = message
        super().__init__(f"line {line}, col {col}: {message}")


class LambdaRuleError(ChartParseError):
    pass


class GradingError(SynSSError):
    pass


class ExponentBoundError(SynSSError):
    pass


class CompositionError(SynSSError):
    pass


class StaleDifferentialError(SynSSError):
    pass


class ConsistencyError(SynSSError):
    pass


class EngineInvariantError(SynSSError):
    pass


class WindowError(SynSSError):
    pass


class PartitionError(SynSSError):
    pass


class DegreeError(SynSSError):
    pass


class UnknownClassError(SynSSError):
    pass


class UnsupportedBracketError(SynSSError):
    pass
