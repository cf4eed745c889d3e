"""Backend selection for the batch evaluation kernels.

The compiled ``_ckernels`` extension is preferred when it imports; the
numpy implementation in ``_pykernels`` is always available.  Both expose
``bloch``, ``pauli_diagonal``, ``sts1`` and ``sts2`` with identical
signatures, each returning a dict of 1-D arrays including a boolean
``physical`` mask.
"""

from __future__ import annotations

from types import ModuleType

from . import _pykernels

try:
    from . import _ckernels
except ImportError:  # extension not built
    _ckernels = None

__all__ = ["available_backends", "get_backend", "use_backend", "backend_name"]

_BACKENDS: dict[str, ModuleType] = {"python": _pykernels}
if _ckernels is not None:
    _BACKENDS["cython"] = _ckernels

_active: ModuleType = _ckernels if _ckernels is not None else _pykernels


def available_backends() -> list[str]:
    return sorted(_BACKENDS)


def get_backend(name: str | None = None) -> ModuleType:
    """Return the kernel module for ``name``; ``None`` or ``"auto"`` gives
    the active default."""
    if name is None or name == "auto":
        return _active
    try:
        return _BACKENDS[name]
    except KeyError:
        raise ValueError(
            f"unknown or unavailable kernel backend {name!r}; available: {available_backends()}"
        ) from None


def use_backend(name: str) -> ModuleType:
    global _active
    _active = get_backend(name)
    return _active


def backend_name() -> str:
    return _active.NAME
