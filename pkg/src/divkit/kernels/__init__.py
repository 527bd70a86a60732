"""Kernel selection: native extension when built, pure Python otherwise.

DIVKIT_PURE_PYTHON=1 forces the pure implementation (used by the benchmark
and by tests that pin backend-independence).
"""

import os

if os.environ.get("DIVKIT_PURE_PYTHON") == "1":
    from . import _pure as impl
else:
    try:
        from . import _native as impl  # type: ignore[attr-defined]
    except ImportError:
        from . import _pure as impl

BACKEND: str = impl.BACKEND
lcs_length = impl.lcs_length
bleu_matrix_block = impl.bleu_matrix_block
bleu_loo_stats = impl.bleu_loo_stats

__all__ = ["BACKEND", "lcs_length", "bleu_matrix_block", "bleu_loo_stats"]
