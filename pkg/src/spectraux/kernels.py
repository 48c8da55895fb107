"""Kernel backend selection.

The compiled ``_ckernels`` extension is used when it imports; otherwise the
pure-Python ``_pykernels`` module is. Setting ``SPECTRAUX_PURE_PYTHON=1``
forces the fallback. Both backends return identical results.
"""
from __future__ import annotations

import importlib
import os
from types import ModuleType

from . import _pykernels

_NAMES = {"python": "spectraux._pykernels", "cython": "spectraux._ckernels"}


def load_backend(name: str) -> ModuleType:
    """Import a backend by name (``"python"`` or ``"cython"``)."""
    try:
        return importlib.import_module(_NAMES[name])
    except KeyError:
        raise ValueError(f"unknown kernel backend {name!r}") from None


def available_backends() -> list[str]:
    out = []
    for name in _NAMES:
        try:
            load_backend(name)
        except ImportError:
            continue
        out.append(name)
    return out


def _select() -> ModuleType:
    if os.environ.get("SPECTRAUX_PURE_PYTHON", "") not in ("", "0"):
        return _pykernels
    try:
        return load_backend("cython")
    except ImportError:
        return _pykernels


_active = _select()
BACKEND: str = _active.BACKEND


def greedy_rounds(owners, indptr, indices, bids, n_operators, backend: ModuleType | None = None):
    return (backend or _active).greedy_rounds(owners, indptr, indices, bids, n_operators)


def mwis(adj_masks, weights, alive, backend: ModuleType | None = None):
    mod = backend or _active
    limit = mod.MAX_MWIS_STATIONS
    if limit is not None and len(weights) > limit:
        mod = _pykernels
    return mod.mwis(adj_masks, weights, alive)
