"""Backend selection for the hot kernels.

The compiled extension is used when it imports; otherwise the numpy
implementation takes over. Set ``SOMFRECHET_PURE_PYTHON=1`` to force the
fallback.
"""
import os

from . import _pykernels

KIND_T, KIND_S, KIND_ST = _pykernels.KIND_T, _pykernels.KIND_S, _pykernels.KIND_ST

try:
    if os.environ.get("SOMFRECHET_PURE_PYTHON", "").strip() not in ("", "0"):
        raise ImportError("pure-Python backend requested")
    from . import _ckernels as _impl
    BACKEND = "cython"
except ImportError:
    _impl = _pykernels
    BACKEND = "python"

bmu_assign = _impl.bmu_assign
batch_update = _impl.batch_update
smd_matrix = _impl.smd_matrix
floyd_warshall = _impl.floyd_warshall


def available_backends():
    """Mapping of backend name to kernel module for every importable backend."""
    out = {"python": _pykernels}
    try:
        from . import _ckernels
    except ImportError:
        pass
    else:
        out["cython"] = _ckernels
    return out
