"""Kernel dispatch: numba when available and enabled, numpy otherwise."""
from ._jit import USE_NUMBA

if USE_NUMBA:
    from ._numba_kernels import conditional_entropy, conditional_entropy_grid, jacobi_eigvalsh
else:
    from ._numpy_kernels import conditional_entropy, conditional_entropy_grid, jacobi_eigvalsh

BACKEND = "numba" if USE_NUMBA else "numpy"

__all__ = ["BACKEND", "conditional_entropy", "conditional_entropy_grid", "jacobi_eigvalsh"]
