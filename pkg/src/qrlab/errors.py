"""Exception hierarchy shared by all qrlab modules."""


class QrlabError(Exception):
    """Base class for domain errors (mapped to exit code 1 by the CLI)."""


class DecodeFailure(QrlabError):
    """Uncorrectable corruption in a Reed-Solomon block or format word."""


class FormatUnreadable(DecodeFailure):
    pass


class RsFailure(DecodeFailure):
    pass


class PayloadMalformed(DecodeFailure):
    pass


class CapacityExceeded(QrlabError, ValueError):
    pass


class InvalidText(QrlabError, ValueError):
    pass


class InvalidSymbol(QrlabError, ValueError):
    """Matrix has an unsupported size or does not match its region map."""


class CountExceedsRegion(QrlabError, ValueError):
    pass


class MultiBlockUnsupported(QrlabError, ValueError):
    pass


class BothEmpty(QrlabError, ValueError):
    pass


class LengthMismatch(QrlabError, ValueError):
    pass


class MissingWordlist(QrlabError, ValueError):
    pass


class EmptyCorpus(QrlabError, ValueError):
    pass


class ConfigError(QrlabError, ValueError):
    """Invalid combination of simulation or export options."""
