"""Kernel backend selection.

The compiled extension is used when it imports; otherwise the numpy
fallback. ``MUGIQA_BACKEND=python`` forces the fallback,
``MUGIQA_BACKEND=compiled`` makes a missing extension an import error.
"""

import logging
import os

from . import _pykernels

log = logging.getLogger(__name__)

try:
    from . import _kernels as _compiled
except ImportError:  # extension not built
    _compiled = None

BACKENDS = ("compiled", "python")


def available_backends():
    return tuple(name for name in BACKENDS if name == "python" or _compiled is not None)


def get_kernels(name=None):
    """Return the kernel module for ``name`` (``None`` means the active one)."""
    if name is None:
        return kernels
    if name == "python":
        return _pykernels
    if name == "compiled":
        if _compiled is None:
            raise ImportError("mugiqa._kernels is not built; reinstall with a C compiler")
        return _compiled
    raise ValueError(f"unknown backend {name!r}; choose from {BACKENDS}")


def _select():
    requested = os.environ.get("MUGIQA_BACKEND", "").strip().lower()
    if requested in ("", "auto"):
        if _compiled is None:
            log.debug("compiled kernels unavailable, using numpy fallback")
            return "python", _pykernels
        return "compiled", _compiled
    return requested, get_kernels(requested)


BACKEND, kernels = _select()
