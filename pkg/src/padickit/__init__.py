"""padickit: exact p-adic kernels at tracked finite precision.

Subpackages cover scalar Z_p/Q_p arithmetic, cyclotomic tower rings
with their Galois action, finite-group character arithmetic, the
Iwasawa algebra O[[T]], p-adic L-value kernels, and Selmer-order
bookkeeping.  The `padickit` console script is the user-facing surface.
"""

from .errors import DomainError, PrecisionError
from .padic import PadicParams, PadicScalar, kappa_power, plog, teichmueller

__all__ = [
    "DomainError",
    "PrecisionError",
    "PadicParams",
    "PadicScalar",
    "teichmueller",
    "plog",
    "kappa_power",
]
