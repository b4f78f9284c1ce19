"""Backend selection for the AWGN sum-rate kernel.

The compiled extension is used when it imports; otherwise the numpy
implementation is used. ``BACKEND`` names the active one.
"""
from . import _awgn_py as python_backend

try:
    from . import _awgn_kernel as compiled_backend
except ImportError:  # extension not built
    compiled_backend = None

if compiled_backend is not None:
    BACKEND = "cython"
    sum_rate = compiled_backend.sum_rate
    sum_rate_batch = compiled_backend.sum_rate_batch
    bounds = compiled_backend.bounds
else:
    BACKEND = "python"
    sum_rate = python_backend.sum_rate
    sum_rate_batch = python_backend.sum_rate_batch
    bounds = python_backend.bounds

__all__ = ["BACKEND", "sum_rate", "sum_rate_batch", "bounds",
           "python_backend", "compiled_backend"]
