"""Backend selection: compiled core when built, NumPy reference otherwise."""

from __future__ import annotations

try:
    from . import _core as _impl
except ImportError:
    from . import _ref as _impl

BACKEND = _impl.BACKEND
maximal_scan_1d = _impl.maximal_scan_1d
