"""Kernel selection: the compiled extension when importable, else pure Python.

Set ``CANAUG_PURE_PYTHON=1`` to force the fallback.
"""

from __future__ import annotations

import os

from . import _pykernels

BACKEND = "python"
refine = _pykernels.refine
normal_form = _pykernels.normal_form
multiset_search = _pykernels.multiset_search

if not os.environ.get("CANAUG_PURE_PYTHON"):
    try:
        from . import _ckernels
    except ImportError:
        pass
    else:
        BACKEND = "compiled"
        refine = _ckernels.refine
        normal_form = _ckernels.normal_form
        multiset_search = _ckernels.multiset_search


def backends() -> dict:
    """Available implementations by name, for tests and benchmarks."""
    out = {"python": _pykernels}
    try:
        from . import _ckernels
        out["compiled"] = _ckernels
    except ImportError:
        pass
    return out
