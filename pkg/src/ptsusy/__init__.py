"""Complex PT-symmetric superpartners of the infinite square well.

Submodules are imported lazily so the command line can pin the numerics
thread count (PTSUSY_THREADS) before numpy first loads.
"""

import importlib

__version__ = "0.1.0"

_SUBMODULES = ("analytic", "cli", "errors", "grids", "numerics", "operators", "symmetry")


def __getattr__(name):
    if name in _SUBMODULES:
        return importlib.import_module(f"{__name__}.{name}")
    raise AttributeError(f"module {__name__!r} has no attribute {name!r}")


def __dir__():
    return sorted(list(globals()) + list(_SUBMODULES))
