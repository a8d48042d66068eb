"""Numeric kernel backend selection.

Imports the compiled Cython kernels when the extension is available and
falls back to the NumPy implementations otherwise. Setting the environment
variable ``RELAYNET_PURE_PYTHON=1`` forces the fallback (used by the
backend-parity tests and the benchmark).
"""

import os

from . import _pykern

if os.environ.get("RELAYNET_PURE_PYTHON") == "1":
    _impl = _pykern
else:
    try:
        from . import _ckern as _impl
    except ImportError:
        _impl = _pykern

BACKEND = _impl.BACKEND
mst_edges = _impl.mst_edges
longest_incident = _impl.longest_incident
clearance_matrix = _impl.clearance_matrix

__all__ = ["BACKEND", "mst_edges", "longest_incident", "clearance_matrix"]
