"""Kernel backend selection.

The compiled extension is preferred when importable; the numpy fallback
is always available.  DKRATIO_BACKEND=cython|numpy forces a choice
(forcing cython raises if the extension is missing).
"""

from __future__ import annotations

import os

from . import _kernel_np

_CHOICE = os.environ.get("DKRATIO_BACKEND", "auto").strip().lower()

if _CHOICE in ("auto", "cy", "cython"):
    try:
        from . import _kernel_cy  # type: ignore[attr-defined]

        eval_segment = _kernel_cy.eval_segment
        BACKEND_NAME = "cython"
    except ImportError:
        if _CHOICE != "auto":
            raise
        eval_segment = _kernel_np.eval_segment
        BACKEND_NAME = "numpy"
elif _CHOICE in ("np", "numpy", "python"):
    eval_segment = _kernel_np.eval_segment
    BACKEND_NAME = "numpy"
else:
    raise ValueError(f"unknown DKRATIO_BACKEND value: {_CHOICE!r}")

# The float fallback has no compiled twin; exactness is already lost
# there so kernel speed is not the bottleneck.
eval_segment_float = _kernel_np.eval_segment_float


def available_kernels():
    """Name -> eval_segment mapping for every importable backend."""
    kernels = {"numpy": _kernel_np.eval_segment}
    try:
        from . import _kernel_cy  # type: ignore[attr-defined]

        kernels["cython"] = _kernel_cy.eval_segment
    except ImportError:
        pass
    return kernels
