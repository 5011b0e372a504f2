"""Backend selection for the hypergeometric sum kernel.

The compiled extension is used when it imported and the call fits in
64-bit words; otherwise the pure-Python kernel runs.  Setting
``SUPERCONG_PURE=1`` in the environment forces the Python path.
"""
from __future__ import annotations

import os

from . import _kernel_py

try:
    if os.environ.get("SUPERCONG_PURE", "") not in ("", "0"):
        raise ImportError("pure backend requested")
    from . import _kernel as _kernel_c  # type: ignore[attr-defined]
except ImportError:
    _kernel_c = None

BACKEND = "cython" if _kernel_c is not None else "python"

_LIMIT = 1 << 62


def _fits(p, e, lo, hi, lins, c_num, c_den) -> bool:
    if p**e >= _LIMIT or abs(c_num) >= _LIMIT or abs(c_den) >= _LIMIT:
        return False
    kmax = max(abs(lo), abs(hi))
    return all(abs(a) * kmax + abs(b) < _LIMIT for a, b in lins)


def hyper_sum_mod(p, e, lo, hi, v0, u0, num_lin, den_lin, c_num, c_den, guard=0, backend=None):
    """Dispatch to the compiled or pure kernel; see ``_kernel_py`` for the contract."""
    use = backend or BACKEND
    if use == "cython" and _kernel_c is not None and _fits(
        p, e, lo, hi, list(num_lin) + list(den_lin), c_num, c_den
    ):
        return _kernel_c.hyper_sum_mod(
            p, e, lo, hi, v0, u0, list(num_lin), list(den_lin), c_num, c_den, guard
        )
    return _kernel_py.hyper_sum_mod(p, e, lo, hi, v0, u0, num_lin, den_lin, c_num, c_den, guard)
