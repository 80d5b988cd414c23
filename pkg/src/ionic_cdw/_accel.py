"""Numba switch.

Hot kernels are written once as plain loops and compiled with ``njit`` when
numba is importable.  Set ``IONIC_CDW_NUMBA=0`` to force the pure-numpy path;
the flag is read once, at import time.
"""
import os

try:
    import numba
    _HAVE_NUMBA = True
except ImportError:  # pragma: no cover
    numba = None
    _HAVE_NUMBA = False

USE_NUMBA = _HAVE_NUMBA and os.environ.get("IONIC_CDW_NUMBA", "1").lower() not in ("0", "false", "no", "off")


def njit(*args, **kwargs):
    """``numba.njit`` or an identity decorator if numba is off."""
    kwargs.setdefault("cache", True)

    if not _HAVE_NUMBA:
        if len(args) == 1 and callable(args[0]):
            return args[0]
        return lambda f: f
    return numba.njit(*args, **kwargs)


def py_func(f):
    """Underlying python function of a jitted kernel (identity otherwise)."""
    return getattr(f, "py_func", f)
