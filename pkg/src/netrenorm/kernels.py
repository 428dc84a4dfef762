"""Kernel backend selection.

The compiled ``_ckernels`` extension is used when it imports; otherwise the
pure-Python ``_pykernels`` module is used. Setting ``NETRENORM_PURE_PYTHON=1``
forces the fallback.
"""
import os

from . import _pykernels

if os.environ.get("NETRENORM_PURE_PYTHON", "") not in ("", "0"):
    _impl = _pykernels
else:
    try:
        from . import _ckernels as _impl
    except ImportError:  # extension not built
        _impl = _pykernels

BACKEND = "cython" if _impl is not _pykernels else "python"

RULE_ALL = _pykernels.RULE_ALL
RULE_MAX = _pykernels.RULE_MAX
RULE_MIN = _pykernels.RULE_MIN

bfs_hops = _impl.bfs_hops
eccentricities = _impl.eccentricities
greedy_box_colors = _impl.greedy_box_colors
greedy_box_colors_dm = _impl.greedy_box_colors_dm
all_pairs_hops = _impl.all_pairs_hops
grow_batch = _impl.grow_batch


def available_backends():
    """Map of backend name -> kernel module, for parity tests and benchmarks."""
    out = {"python": _pykernels}
    try:
        from . import _ckernels
    except ImportError:
        pass
    else:
        out["cython"] = _ckernels
    return out
