"""Backend selection for the hot evaluation kernels.

The compiled extension is preferred when present; setting the environment
variable TRILOBATTO_PURE=1 (before import) forces the pure-numpy fallback.
Both backends implement the same sequence of floating-point operations per
entry, so results agree to the last bit on typical platforms; each backend
is deterministic on its own either way.
"""

import os

if os.environ.get("TRILOBATTO_PURE", "").strip() not in ("", "0"):
    from . import _kernels_py as _impl
else:
    try:
        from . import _kernels as _impl  # type: ignore[attr-defined]
    except ImportError:
        from . import _kernels_py as _impl

power_table = _impl.power_table
power_table_grads = _impl.power_table_grads
BACKEND = _impl.BACKEND


def backend_name() -> str:
    """Name of the active kernel backend: 'cython' or 'python'."""
    return BACKEND
