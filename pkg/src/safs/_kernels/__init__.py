"""Kernel backend selection.

Imports the compiled extension when present; falls back to the numpy
implementation otherwise. SAFS_PURE_PYTHON=1 forces the fallback.
"""

import os

if os.environ.get("SAFS_PURE_PYTHON"):
    from . import _core_py as _impl
else:
    try:
        from . import _core_cy as _impl  # type: ignore[attr-defined]
    except ImportError:
        from . import _core_py as _impl

BACKEND = _impl.BACKEND
best_split = _impl.best_split
cd_sweep = _impl.cd_sweep
