"""Exception hierarchy shared by every module of the package."""


class HuopmError(Exception):
    """Base class for all errors raised by huopm."""


class FormatError(HuopmError, ValueError):
    """Malformed input text (profit table, transactions, pattern files)."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class ConfigError(HuopmError, ValueError):
    """A parameter is outside its allowed domain."""


class ItemAbsentError(HuopmError, LookupError):
    """An item or itemset was looked up in a transaction that lacks it."""


class ContractError(HuopmError, RuntimeError):
    """A caller broke a precondition of an internal routine."""
