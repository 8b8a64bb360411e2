class AssocBrainError(Exception):
    """Base class for simulator errors."""


class SchemaError(AssocBrainError):
    pass


class WriteOnceViolation(AssocBrainError):
    """A committed long-term word was modified or overwritten."""


class NoRecall(AssocBrainError):
    """An associative lookup found nothing."""


class MultipleMatch(AssocBrainError):
    """An associative lookup that must be unique matched several words."""


class AssemblyError(AssocBrainError):
    def __init__(self, message, line=None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


class VerificationError(AssocBrainError):
    def __init__(self, violations):
        self.violations = list(violations)
        super().__init__("; ".join(self.violations))


class ScenarioError(AssocBrainError):
    def __init__(self, message, line=None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)
