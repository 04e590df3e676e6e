"""Exception types shared across the package.

DomainError covers violated preconditions and out-of-range arguments
(CLI exit code 3); ResourceLimitError covers requests beyond configured
caps (CLI exit code 4).
"""


class SievekitError(Exception):
    pass


class DomainError(SievekitError, ValueError):
    pass


class ResourceLimitError(SievekitError, RuntimeError):
    pass
