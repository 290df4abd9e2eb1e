"""Backend selection for the hot numerical kernels.

The compiled extension is used when it was built; otherwise, or when the
environment variable ``MDIRICHLET_PURE=1`` is set, the numpy fallback is used.
"""

import os

from . import _fallback

BACKEND_NAME = "python"
backend = _fallback

if os.environ.get("MDIRICHLET_PURE", "") != "1":
    try:
        from . import _ckernels as backend  # noqa: F811
        BACKEND_NAME = "cython"
    except ImportError:
        pass

__all__ = ["backend", "BACKEND_NAME", "_fallback"]
