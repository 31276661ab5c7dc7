"""Fixpoint kernel selection.

The hot loops (attractor BFS, Zielonka recursion) exist twice: a compiled
Cython extension (``_core``) and a pure-Python twin (``pure``) with
identical outputs.  The compiled one is preferred when importable; set
``OMEGAGAMES_BACKEND=python`` or ``=compiled`` to force a choice.
"""
import os

from . import pure

try:
    from . import _core
except ImportError:
    _core = None

_FORCED = os.environ.get("OMEGAGAMES_BACKEND")
if _FORCED == "python":
    _default = pure
elif _FORCED == "compiled":
    if _core is None:
        raise ImportError(
            "OMEGAGAMES_BACKEND=compiled but the _core extension is not built"
        )
    _default = _core
else:
    _default = _core if _core is not None else pure


def backend(name=None):
    """The kernel module to use: the import-time default, or by name."""
    if name is None or name == "auto":
        return _default
    if name == "python":
        return pure
    if name == "compiled":
        if _core is None:
            raise ValueError("compiled kernel requested but not built")
        return _core
    raise ValueError(f"unknown backend {name!r} (expected auto, compiled or python)")


def available():
    """Names of the usable kernels."""
    return ("compiled", "python") if _core is not None else ("python",)


def default_name():
    return _default.NAME
