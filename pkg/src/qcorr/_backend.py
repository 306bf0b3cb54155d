"""Pick the compiled kernels when available, else the numpy fallback.

``QCORR_BACKEND=python`` forces the fallback; ``QCORR_BACKEND=compiled``
makes a missing extension an import error.
"""

from __future__ import annotations

import os

from . import _fallback

_choice = os.environ.get("QCORR_BACKEND", "auto").lower()

if _choice == "python":
    _impl = _fallback
    NAME = "python"
else:
    try:
        from . import _kernels as _impl  # type: ignore[attr-defined]

        NAME = "compiled"
    except ImportError:
        if _choice == "compiled":
            raise
        _impl = _fallback
        NAME = "python"

jacobi_hermitian = _impl.jacobi_hermitian
sample_categories = _impl.sample_categories

IMPLEMENTATIONS = {"python": _fallback}
try:
    from . import _kernels as _compiled  # type: ignore[attr-defined]

    IMPLEMENTATIONS["compiled"] = _compiled
except ImportError:
    pass
