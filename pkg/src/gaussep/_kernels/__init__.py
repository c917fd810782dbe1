"""Kernel backend selection.

The compiled cyclic-Jacobi extension is preferred; the pure-Python twin is
used when the extension is missing or when the environment variable
``GAUSSEP_PURE_PYTHON`` is set to a non-empty, non-zero value.
"""

import os

if os.environ.get("GAUSSEP_PURE_PYTHON", "0") not in ("", "0"):
    from .jacobi_py import jacobi_eigh

    BACKEND = "python"
else:
    try:
        from ._jacobi import jacobi_eigh  # type: ignore[no-redef]

        BACKEND = "cython"
    except ImportError:
        from .jacobi_py import jacobi_eigh  # type: ignore[no-redef]

        BACKEND = "python"

__all__ = ["jacobi_eigh", "BACKEND"]
