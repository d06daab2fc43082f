"""Hot predicates over finite orders, with a numba path and a numpy fallback.

The backend is chosen once at import from ``TTG_BACKEND``:

* ``numba`` (default when numba imports): ``_loops`` compiled with ``@njit``
* ``numpy``: the vectorized implementations in ``_vector``

Both expose the same functions; ``loops`` and ``vector`` are always importable
so tests and the benchmark can compare them directly.
"""
import logging
import os

from . import _loops as loops
from . import _vector as vector

log = logging.getLogger(__name__)

NAMES = (
    "transitive_closure",
    "pushforward_order",
    "corestricted_quotient",
    "weak_quotient_on",
    "surjective_on",
    "heritable_weak",
    "weak_lifting_matrix",
    "immediate_lifting",
)


def _jit_loops():
    import importlib.util

    from numba import njit

    # private copy of _loops whose globals point at the compiled kernels, so
    # nopython callees resolve; the pure-python ``loops`` stays untouched
    spec = importlib.util.find_spec(f"{__name__}._loops")
    mod = importlib.util.module_from_spec(spec)
    spec.loader.exec_module(mod)
    for name in ("_masks", *NAMES):
        setattr(mod, name, njit(cache=True)(getattr(mod, name)))
    return {name: getattr(mod, name) for name in NAMES}


def _select():
    want = os.environ.get("TTG_BACKEND", "numba").strip().lower()
    if want not in ("numba", "numpy"):
        raise ValueError(f"TTG_BACKEND must be 'numba' or 'numpy', got {want!r}")
    if want == "numba":
        try:
            return "numba", _jit_loops()
        except ImportError:
            log.warning("numba not importable; using numpy kernels")
    return "numpy", {name: getattr(vector, name) for name in NAMES}


BACKEND, _impl = _select()

transitive_closure = _impl["transitive_closure"]
pushforward_order = _impl["pushforward_order"]
corestricted_quotient = _impl["corestricted_quotient"]
weak_quotient_on = _impl["weak_quotient_on"]
surjective_on = _impl["surjective_on"]
heritable_weak = _impl["heritable_weak"]
weak_lifting_matrix = _impl["weak_lifting_matrix"]
immediate_lifting = _impl["immediate_lifting"]
