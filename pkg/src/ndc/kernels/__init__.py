"""Kernel backend selection: compiled extension when available, numpy otherwise.

The environment variable ``NDC_KERNEL`` forces a backend (``python`` or
``cython``); leaving it unset picks the compiled one when it imported cleanly.
Both backends expose the same ``extreme_eig`` contract and agree within the
kernel tolerances (they may differ in the last ulp because summation order
differs).
"""

from __future__ import annotations

import os

from . import pylanczos

try:
    from . import _lanczos  # compiled at install time; optional

    HAVE_COMPILED = True
except ImportError:  # pragma: no cover - depends on build environment
    _lanczos = None
    HAVE_COMPILED = False


def available_backends() -> tuple[str, ...]:
    return ("python", "cython") if HAVE_COMPILED else ("python",)


def default_backend() -> str:
    forced = os.environ.get("NDC_KERNEL")
    if forced:
        if forced not in available_backends():
            raise RuntimeError(f"NDC_KERNEL={forced!r} is not available")
        return forced
    return "cython" if HAVE_COMPILED else "python"


def get_backend(name: str | None = None):
    """Module implementing ``extreme_eig``; ``name`` of None means the default."""
    name = name or default_backend()
    if name == "python":
        return pylanczos
    if name == "cython":
        if not HAVE_COMPILED:
            raise RuntimeError("compiled kernel requested but not built")
        return _lanczos
    raise ValueError(f"unknown kernel backend {name!r}")
