"""Exception hierarchy shared across the package.

The CLI maps these onto exit codes: configuration/validation problems exit
2, file and format problems exit 3, anything else is an internal bug (4).
"""


class SkillpaceError(Exception):
    """Base class for all package errors."""


class ValidationError(SkillpaceError):
    """Input data violates a documented precondition."""


class ConfigError(SkillpaceError):
    """Configuration value out of range or inconsistent."""


class IntegrityError(ValidationError):
    """Data self-consistency violated (duplicate ids, mismatched sets)."""


class FormatError(SkillpaceError):
    """A file does not conform to its declared on-disk format."""


class ManifestError(FormatError):
    """Malformed manifest line; carries the 1-based line number."""

    def __init__(self, message: str, line_number: int):
        super().__init__(f"line {line_number}: {message}")
        self.line_number = line_number


class BudgetExceededError(SkillpaceError):
    """A charge would push total annotation spend past the budget."""


class PoolExhaustedError(SkillpaceError):
    """No unannotated samples remain to select from."""


class SingularModelError(ValidationError):
    """Covariance factorization failed even after regularization."""

    def __init__(self, benchmark: str, message: str = ""):
        detail = f": {message}" if message else ""
        super().__init__(f"benchmark {benchmark!r} has a singular covariance{detail}")
        self.benchmark = benchmark
