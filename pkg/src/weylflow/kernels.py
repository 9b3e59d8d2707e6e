"""Numeric kernel selection.

The compiled ``_ckernels`` extension is used when it imports; otherwise the
pure-Python ``_pykernels`` module with the same interface. Setting
``WEYLFLOW_PURE_PYTHON=1`` forces the fallback.
"""

import os

from . import _pykernels

if os.environ.get("WEYLFLOW_PURE_PYTHON", "") not in ("", "0"):
    _impl = _pykernels
else:
    try:
        from . import _ckernels as _impl
    except ImportError:
        _impl = _pykernels

BACKEND = "compiled" if _impl is not _pykernels else "python"

AUTONOMOUS = _pykernels.AUTONOMOUS
PIII = _pykernels.PIII
EXPONENTIAL = _pykernels.EXPONENTIAL
COMPLETED = _pykernels.COMPLETED
BLOWUP = _pykernels.BLOWUP
STEP_LIMIT = _pykernels.STEP_LIMIT

field_autonomous = _impl.field_autonomous
field_piii = _impl.field_piii
field_exponential = _impl.field_exponential
dopri54 = _impl.dopri54
fixed_rk5 = _impl.fixed_rk5


def backends():
    """Available kernel modules keyed by name (for benchmarks and tests)."""
    out = {"python": _pykernels}
    try:
        from . import _ckernels
    except ImportError:
        pass
    else:
        out["compiled"] = _ckernels
    return out
