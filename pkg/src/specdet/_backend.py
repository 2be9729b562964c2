"""Numerical backend selection.

The hot kernels exist twice: a Cython extension (``specdet._kernels_cy``)
and a pure-Python twin (``specdet._kernels_py``) with identical semantics.
The compiled module is preferred when importable; set ``SPECDET_BACKEND`` to
``compiled`` or ``pure`` to force one (forcing ``compiled`` raises if the
extension is missing rather than silently falling back).
"""

from __future__ import annotations

import os

_requested = os.environ.get("SPECDET_BACKEND", "").strip().lower()
if _requested not in ("", "compiled", "pure"):
    raise ImportError(
        f"SPECDET_BACKEND={_requested!r} not recognized; "
        "use 'compiled' or 'pure'")

if _requested == "pure":
    from . import _kernels_py as kernels
    BACKEND = "pure"
else:
    try:
        from . import _kernels_cy as kernels  # type: ignore[no-redef]
        BACKEND = "compiled"
    except ImportError:
        if _requested == "compiled":
            raise ImportError(
                "SPECDET_BACKEND=compiled but the extension is not built; "
                "reinstall with a C toolchain or unset the variable")
        from . import _kernels_py as kernels  # type: ignore[no-redef]
        BACKEND = "pure"

RHS_PSI = kernels.RHS_PSI
RHS_VLIN = kernels.RHS_VLIN
RHS_VPOW = kernels.RHS_VPOW
RHS_VCONST = kernels.RHS_VCONST
OK = kernels.OK
BLOWUP = kernels.BLOWUP
UNDERFLOW = kernels.UNDERFLOW

dopri5 = kernels.dopri5
sl_sweep = kernels.sl_sweep
