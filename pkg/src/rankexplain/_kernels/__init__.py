"""Kernel dispatch: compiled Cython lane when available, pure lane otherwise.

Set RANKEXPLAIN_PURE=1 to force the pure lane (used by the parity tests and
the kernel benchmark).
"""

from __future__ import annotations

import os

from . import _pykern

if os.environ.get("RANKEXPLAIN_PURE") == "1":
    _impl = _pykern
else:
    try:
        from . import _ckern as _impl  # type: ignore[attr-defined]
    except ImportError:
        _impl = _pykern

BACKEND = _impl.BACKEND_NAME

lis_lengths = _impl.lis_lengths
lis_indices = _impl.lis_indices
budgeted_lcs = _impl.budgeted_lcs
simplex_pivot_loop = _impl.simplex_pivot_loop


def backend() -> str:
    """Name of the active kernel lane: 'compiled' or 'pure'."""
    return BACKEND
