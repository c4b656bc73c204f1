"""Backend selection for the integer kernels.

The compiled extension is used when it imports; set ``CFTPOLY_PURE=1`` to force
the pure-Python fallback. ``BACKEND`` names the active one.
"""

import os

from . import _pykernels as pure

if os.environ.get("CFTPOLY_PURE", "") not in ("", "0"):
    _impl = pure
    BACKEND = "python"
else:
    try:
        from . import _ckernels as _impl
        BACKEND = "cython"
    except ImportError:
        _impl = pure
        BACKEND = "python"

int_convolve = _impl.int_convolve
eta_numerators = _impl.eta_numerators
int_values = _impl.int_values
scaled_values = _impl.scaled_values
sign_at = _impl.sign_at
sign_variations = _impl.sign_variations

__all__ = ["BACKEND", "pure", "int_convolve", "eta_numerators", "int_values", "scaled_values", "sign_at", "sign_variations"]
