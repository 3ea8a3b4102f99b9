"""Kernel backend selection.

Prefers the compiled extension, falling back to the numpy implementation.
Set MDSARRAY_BACKEND=python to force the fallback (used by the benchmark
and the backend-parity tests).
"""

import os

if os.environ.get("MDSARRAY_BACKEND", "").lower() == "python":
    from . import _kernels_py as _impl
else:
    try:
        from . import _kernels as _impl  # type: ignore[attr-defined]
    except ImportError:
        from . import _kernels_py as _impl

matmul = _impl.matmul
row_reduce = _impl.row_reduce


def backend_name() -> str:
    return _impl.NAME
