"""Backend selection for the root-finding kernels.

The compiled extension is used when it imports; otherwise the pure-Python
module takes over. Set ``QPBANDS_BACKEND=python`` to force the fallback.
"""
import os

from qpbands import _pykernels

if os.environ.get("QPBANDS_BACKEND", "").lower() == "python":
    _impl = _pykernels
else:
    try:
        from qpbands import _ckernels as _impl
    except ImportError:  # extension not built
        _impl = _pykernels

BACKEND = "cython" if _impl is not _pykernels else "python"

OK = _pykernels.OK
ABSENT = _pykernels.ABSENT
MAXITER = _pykernels.MAXITER

residual = _impl.residual
band1_root = _impl.band1_root
band2_root = _impl.band2_root
solve_grid = _impl.solve_grid


def available_backends():
    """Map backend name to module for every backend that imports."""
    out = {"python": _pykernels}
    try:
        from qpbands import _ckernels
    except ImportError:
        pass
    else:
        out["cython"] = _ckernels
    return out
