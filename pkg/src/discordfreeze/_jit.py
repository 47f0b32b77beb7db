"""Backend switch for the hot kernels.

Set ``DISCORDFREEZE_DISABLE_JIT=1`` before import to force the pure-numpy
kernels. Without numba installed the numpy kernels are used regardless.
"""
import os
import warnings

DISABLE_ENV = "DISCORDFREEZE_DISABLE_JIT"


def jit_requested() -> bool:
    return os.environ.get(DISABLE_ENV, "").strip().lower() not in {"1", "true", "yes", "on"}


try:
    import numba  # noqa: F401

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - numba is a declared dependency
    HAVE_NUMBA = False
    if jit_requested():
        warnings.warn("numba is not installed - falling back to numpy kernels")

USE_NUMBA = HAVE_NUMBA and jit_requested()
