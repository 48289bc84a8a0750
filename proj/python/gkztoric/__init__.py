"""GKZ hypergeometric systems on toric curves."""

from ._core import (
    GkzError,
    System,
    integer_kernel,
    normalized_volume,
    run,
    schema_version,
    smith_normal_form,
)

__all__ = [
    "GkzError",
    "System",
    "integer_kernel",
    "normalized_volume",
    "run",
    "schema_version",
    "smith_normal_form",
]
