"""sievekit: computational sieve theory at desk scale.

Prime enumeration, arithmetic tables, equidistribution error scans,
linear-sieve functions, combinatorial sifting, and a command-line front
end. Heavy kernels run through a compiled extension when available and
a numpy fallback otherwise; results are identical either way.
"""

from ._kernels import BACKEND
from .errors import DomainError, ResourceLimitError, SievekitError

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "DomainError",
    "ResourceLimitError",
    "SievekitError",
    "__version__",
]
