"""Select the compiled kernels when available, else the pure-Python ones.

Set VERLINDE_KIT_PURE_PYTHON=1 to force the fallback.
"""

import os

BACKEND = "python"
if os.environ.get("VERLINDE_KIT_PURE_PYTHON", "") in ("", "0"):
    try:
        from ._ckernels import klimyk_accumulate, reduce_weight  # noqa: F401

        BACKEND = "cython"
    except ImportError:  # extension not built
        pass
if BACKEND == "python":
    from ._pykernels import klimyk_accumulate, reduce_weight  # noqa: F401
