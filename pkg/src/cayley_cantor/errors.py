"""Exception types shared across the package."""


class CayleyCantorError(Exception):
    """Base class for every error raised by this package."""


class InvalidGeneratorError(CayleyCantorError, ValueError):
    pass


class RankMismatchError(CayleyCantorError, ValueError):
    pass


class ResourceLimitError(CayleyCantorError):
    """Raised when a request would exceed a configured size cap."""


class SlotError(CayleyCantorError, ValueError):
    pass


class TruncationError(CayleyCantorError, KeyError):
    """A word lies outside the radius of a truncated graph."""

    def __str__(self) -> str:
        return str(self.args[0]) if self.args else ""


class TreeError(CayleyCantorError, ValueError):
    pass


class InfeasibleParametersError(CayleyCantorError, ValueError):
    """Scaffold parameters violate one of the fitting inequalities."""

    def __init__(self, inequality: str, detail: str = ""):
        self.inequality = inequality
        self.detail = detail
        super().__init__(f"infeasible parameters: {inequality}" + (f" ({detail})" if detail else ""))


class LinkingPrecisionError(CayleyCantorError):
    """Curves are too close for the requested sample count."""

    def __init__(self, message: str, suggested_samples: int):
        self.suggested_samples = suggested_samples
        super().__init__(message)


class SchemaError(CayleyCantorError, ValueError):
    """A serialized document failed validation; ``path`` is a JSON path."""

    def __init__(self, path: str, message: str):
        self.path = path
        self.message = message
        super().__init__(f"{path}: {message}")


class UnsupportedVersionError(SchemaError):
    pass


class ExportError(CayleyCantorError, OSError):
    """Writing an output file failed; ``path`` names the file."""

    def __init__(self, path: str, reason: str):
        self.path = path
        super().__init__(f"cannot write {path}: {reason}")
