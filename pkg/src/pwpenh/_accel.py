"""Backend selection for the hot kernels.

Kernels come in two flavours: numba-compiled loops and vectorised numpy.
The numba path is used when numba imports cleanly and the environment
variable ``PWPENH_NO_NUMBA`` is unset (or ``0``). Both paths must agree to
floating-point round-off; the test-suite checks that.
"""

import os

try:
    from numba import njit as _numba_njit

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - exercised only without numba
    _numba_njit = None
    HAVE_NUMBA = False

ENV_FLAG = "PWPENH_NO_NUMBA"


def _env_disabled():
    return os.environ.get(ENV_FLAG, "0").strip().lower() not in ("", "0", "false", "no")


_backend = "numba" if (HAVE_NUMBA and not _env_disabled()) else "numpy"


def njit(*args, **kwargs):
    """``numba.njit`` when numba is importable, identity decorator otherwise."""
    if HAVE_NUMBA:
        return _numba_njit(*args, **kwargs)
    if len(args) == 1 and callable(args[0]) and not kwargs:
        return args[0]

    def decorator(func):
        return func

    return decorator


def backend():
    return _backend


def set_backend(name):
    """Switch the active backend at runtime ("numba" or "numpy").

    Returns the previous backend so callers can restore it.
    """
    global _backend
    if name not in ("numba", "numpy"):
        raise ValueError(f"unknown backend {name!r}")
    if name == "numba" and not HAVE_NUMBA:
        raise RuntimeError("numba is not installed")
    previous, _backend = _backend, name
    return previous


def use_numba():
    return _backend == "numba"
