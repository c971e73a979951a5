"""Exception hierarchy shared across the toolchain."""


class CpslintError(Exception):
    """Base class for every error raised by this package."""


class DataError(CpslintError):
    """Malformed or inconsistent table data (bad CSV, unknown column, ...)."""


class RunError(CpslintError):
    """A pipeline run failed part-way through.

    ``step_index`` identifies the interpreter step that blew up, when known;
    intermediates written before the failure stay on disk for diagnosis.
    """

    def __init__(self, message: str, step_index: int | None = None):
        super().__init__(message)
        self.step_index = step_index


class ConfigError(CpslintError):
    """Invalid or incomplete run configuration."""
