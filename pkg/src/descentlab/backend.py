"""Kernel backend selection.

Two interchangeable kernel modules provide ``svd_factor`` and
``eigh_values``:

* ``compiled`` -- Cython Jacobi sweeps (``descentlab._kernels``), fully
  deterministic, bounded by an explicit sweep cap;
* ``python`` -- numpy/LAPACK (``descentlab._kernels_py``), used when the
  extension is not built.

The active backend is chosen once at import:  ``DESCENTLAB_BACKEND`` may be
``auto`` (default: compiled if available), ``compiled``, or ``python``.
``set_active`` rebinds it at runtime, which the test suite and the backend
benchmark use to exercise both implementations.
"""

import importlib
import os

_MODULES = {
    "compiled": "descentlab._kernels",
    "python": "descentlab._kernels_py",
}


def load(name):
    """Import and return the kernel module for ``name``."""
    if name not in _MODULES:
        raise ValueError(f"unknown backend {name!r}; expected one of {sorted(_MODULES)}")
    return importlib.import_module(_MODULES[name])


def available():
    """Names of the backends importable in this environment."""
    names = []
    for name in ("compiled", "python"):
        try:
            load(name)
        except ImportError:
            continue
        names.append(name)
    return tuple(names)


def _select_initial():
    choice = os.environ.get("DESCENTLAB_BACKEND", "auto").strip().lower()
    if choice in ("", "auto"):
        try:
            return "compiled", load("compiled")
        except ImportError:
            return "python", load("python")
    return choice, load(choice)


_active_name, _active = _select_initial()


def active():
    """The kernel module currently in use."""
    return _active


def active_name():
    return _active_name


def set_active(name):
    """Switch the process-wide kernel backend; returns the previous name."""
    global _active, _active_name
    previous = _active_name
    _active = load(name)
    _active_name = name
    return previous
