"""Backend selection for the inner-loop kernels.

The compiled extension is used when it was built; otherwise, or when the
environment variable ``FINHOR_PURE_PYTHON=1`` is set, the numpy fallback is
imported. ``BACKEND`` names the active one.
"""
import os

BACKEND = "python"

if os.environ.get("FINHOR_PURE_PYTHON", "") != "1":
    try:
        from ._kernels import expand, nondominated_mask, prune_dominated  # noqa: F401
        BACKEND = "cython"
    except ImportError:
        pass

if BACKEND == "python":
    from ._kernels_py import expand, nondominated_mask, prune_dominated  # noqa: F401


def load_backend(name: str):
    """Return the kernel module called ``name`` ("cython" or "python")."""
    if name == "cython":
        from . import _kernels
        return _kernels
    if name == "python":
        from . import _kernels_py
        return _kernels_py
    raise ValueError(f"unknown kernel backend {name!r}")
