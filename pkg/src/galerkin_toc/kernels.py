"""Kernel backend selection.

The compiled extension is used when it was built; otherwise the pure-Python
versions are loaded. Set ``GALERKIN_TOC_BACKEND=python`` to force the
fallback.
"""

import os

from . import _kernels_py

python_backend = _kernels_py
compiled_backend = None

try:
    from . import _kernels as compiled_backend  # type: ignore[no-redef]
except ImportError:  # extension not built
    compiled_backend = None

if compiled_backend is not None and os.environ.get("GALERKIN_TOC_BACKEND", "").lower() != "python":
    _active = compiled_backend
    BACKEND = "compiled"
else:
    _active = python_backend
    BACKEND = "python"

rk4_pmp = _active.rk4_pmp
assemble = _active.assemble
