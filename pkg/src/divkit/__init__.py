"""divkit: diversity analytics for multi-reference caption datasets."""

__version__ = "0.1.0"

from .kernels import BACKEND as KERNEL_BACKEND  # noqa: F401
