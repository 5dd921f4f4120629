"""Numba switch.

Every hot kernel in this package is written in numba-compatible Python and
compiled with :func:`njit` when numba is importable.  Setting the environment
variable ``MATROIDFLAT_DISABLE_NUMBA=1`` (before import) routes every kernel to
its numpy / interpreted fallback instead.
"""

import os

DISABLE_ENV = "MATROIDFLAT_DISABLE_NUMBA"

numba_default = {
    "nogil": True,
    "cache": True,
    "boundscheck": False,
}


def _env_disabled():
    return os.environ.get(DISABLE_ENV, "").strip().lower() in ("1", "true", "yes", "on")


try:
    import numba as _numba
    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - numba is a declared dependency
    _numba = None
    HAVE_NUMBA = False

USE_NUMBA = HAVE_NUMBA and not _env_disabled()


def default_backend():
    return "numba" if USE_NUMBA else "numpy"


def njit(fn):
    """Compile ``fn`` with numba unless disabled, else return it unchanged.

    The plain function stays reachable as ``compiled.py_func`` either way so
    callers can pick the interpreted path explicitly.
    """
    if not USE_NUMBA:
        fn.py_func = fn
        return fn
    return _numba.njit(**numba_default)(fn)


def resolve_backend(backend):
    if backend is None:
        return default_backend()
    if backend not in ("numba", "numpy"):
        raise ValueError(f"unknown backend {backend!r}; expected 'numba' or 'numpy'")
    if backend == "numba" and not USE_NUMBA:
        raise RuntimeError("numba backend requested but numba is unavailable or disabled")
    return backend
