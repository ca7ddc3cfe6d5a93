"""Select the strategy-enumeration backend at import time.

The compiled extension is preferred; set ``CLONEBELL_PURE_PYTHON=1`` to force
the numpy fallback.
"""
import os

from . import _lhv_fallback

if os.environ.get("CLONEBELL_PURE_PYTHON"):
    _compiled = None
else:
    try:
        from . import _lhv_kernel as _compiled
    except ImportError:
        _compiled = None

backend = _compiled if _compiled is not None else _lhv_fallback
BACKEND_NAME = "cython" if _compiled is not None else "numpy"

lhv_max_range = backend.lhv_max_range
lhv_value_mask = backend.lhv_value_mask
fallback = _lhv_fallback
compiled = _compiled
