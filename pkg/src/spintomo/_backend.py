"""Select the compiled kernels when built, else the numpy fallback."""

from __future__ import annotations

from . import _pykernels

try:
    from . import _ckernels
except ImportError:  # extension not built
    _ckernels = None

kernels = _ckernels if _ckernels is not None else _pykernels


def available():
    """Names of the kernel backends importable in this environment."""
    names = ["python"]
    if _ckernels is not None:
        names.insert(0, "cython")
    return names


def get(name):
    """Return the kernel module called ``name`` (``"cython"`` or ``"python"``)."""
    if name == "python":
        return _pykernels
    if name == "cython":
        if _ckernels is None:
            raise ImportError("compiled kernels are not built; run `pip install -e .`")
        return _ckernels
    raise ValueError(f"unknown backend {name!r}")


def use(name):
    """Switch the active backend for subsequently called package functions."""
    global kernels
    kernels = get(name)
    return kernels
