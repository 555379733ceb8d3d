"""Backend selection for the hot kernels.

Numba is used when importable unless ``PSLOPT_DISABLE_NUMBA`` is set to a
truthy value, in which case every kernel falls back to its pure-numpy twin.
The flag is read once, at import time.
"""

import os

_FALSY = {"", "0", "false", "no", "off"}


def _flag(name):
    return os.environ.get(name, "").strip().lower() not in _FALSY


try:
    import numba as _numba
except ImportError:  # pragma: no cover - numba is a hard dependency in CI
    _numba = None

HAS_NUMBA = _numba is not None
USE_NUMBA = HAS_NUMBA and not _flag("PSLOPT_DISABLE_NUMBA")
BACKEND = "numba" if USE_NUMBA else "numpy"

# flip_update re-derives the sidelobes from scratch after every flip (O(n^2)).
DEBUG_CHECKS = _flag("PSLOPT_DEBUG_CHECKS")


def njit(*args, **kwargs):
    """``numba.njit`` when numba is available, identity decorator otherwise.

    Decorated functions stay callable as plain Python in the fallback case,
    which is only useful for small inputs; the numpy backend does not route
    through them.
    """
    if _numba is not None:
        return _numba.njit(*args, **kwargs)
    if len(args) == 1 and callable(args[0]) and not kwargs:
        return args[0]
    return lambda fn: fn
