"""Kernel backend selection: compiled extension when importable, numpy otherwise.

Set V2VSEC_FORCE_FALLBACK=1 to pin the numpy path (used by the benchmark
and by tests that compare the two backends).
"""

import os

from . import fallback

if os.environ.get("V2VSEC_FORCE_FALLBACK") == "1":
    _impl = fallback
    BACKEND = "numpy"
else:
    try:
        from . import _ergodic as _impl

        BACKEND = "compiled"
    except ImportError:
        _impl = fallback
        BACKEND = "numpy"

gamma_allocation = _impl.gamma_allocation
secrecy_rate = _impl.secrecy_rate

__all__ = ["BACKEND", "gamma_allocation", "secrecy_rate", "fallback"]
