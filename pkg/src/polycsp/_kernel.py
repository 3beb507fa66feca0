"""Kernel selection: compiled extension when available, pure Python otherwise.

Set POLYCSP_PURE_PYTHON=1 to force the fallback (used by the benchmark).
"""

import os

from . import _ac_py

if os.environ.get("POLYCSP_PURE_PYTHON"):
    _fast = None
else:
    try:
        from . import _ac as _fast
    except ImportError:
        _fast = None

KERNEL_NAME = _fast.KERNEL_NAME if _fast is not None else _ac_py.KERNEL_NAME


def make_instance(n, esrc, edst, out_adj, in_adj):
    """Build a solver instance; the compiled kernel only handles targets
    with at most 64 vertices."""
    if _fast is not None and len(out_adj) <= 64:
        return _fast.Instance(n, esrc, edst, out_adj, in_adj)
    return _ac_py.Instance(n, esrc, edst, out_adj, in_adj)
