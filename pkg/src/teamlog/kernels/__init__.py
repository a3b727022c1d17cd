"""Solver kernels: the compiled extension when available, else pure Python.

Set ``TEAMLOG_PURE_PYTHON=1`` to force the fallback.
"""

import os

from . import _pykernels as python

compiled = None
if not os.environ.get("TEAMLOG_PURE_PYTHON"):
    try:
        from . import _ckernels as compiled
    except ImportError:
        compiled = None

_active = compiled or python
BACKEND = "cython" if compiled is not None else "python"

dual_horn = _active.dual_horn
two_sat = _active.two_sat
dpll = _active.dpll


def backends() -> dict:
    """Every importable kernel module keyed by name."""
    out = {"python": python}
    if compiled is not None:
        out["cython"] = compiled
    return out
