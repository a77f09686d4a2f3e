"""Runtime switches: kernel backend and worker count.

``STRENGTHLAB_BACKEND`` picks ``numba`` (default when importable) or
``numpy``.  ``STRENGTHLAB_THREADS`` sets the worker count.
"""
import os

try:
    import numba
except ImportError:  # pragma: no cover
    numba = None

if numba is not None and "NUMBA_THREADING_LAYER" not in os.environ:
    # the TBB build shipped here is too old and numba warns on every import
    numba.config.THREADING_LAYER = "workqueue"

_backend = os.environ.get("STRENGTHLAB_BACKEND", "numba").strip().lower()
if _backend not in ("numba", "numpy"):
    raise ValueError(f"STRENGTHLAB_BACKEND must be 'numba' or 'numpy', got {_backend!r}")
if numba is None:
    _backend = "numpy"

_threads = int(os.environ.get("STRENGTHLAB_THREADS", "1") or 1)


def backend():
    return _backend


def set_backend(name):
    global _backend
    if name not in ("numba", "numpy"):
        raise ValueError(f"unknown backend {name!r}")
    if name == "numba" and numba is None:
        raise RuntimeError("numba is not installed")
    _backend = name


def threads():
    return _threads


def set_threads(n):
    global _threads
    if n < 1:
        raise ValueError("thread count must be >= 1")
    _threads = n
    if numba is not None:
        numba.set_num_threads(min(n, numba.config.NUMBA_NUM_THREADS))
