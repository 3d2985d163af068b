"""Backend selection for the hot kernels.

The compiled extension is used when importable; set ``MULTISYM_PURE_PYTHON=1``
to force the pure-Python fallback.
"""
import os

from . import _kernels_py

BACKEND = "python"
_impl = _kernels_py

if os.environ.get("MULTISYM_PURE_PYTHON", "") not in ("1", "true", "yes"):
    try:
        from . import _kernels_c as _impl  # type: ignore[no-redef]

        BACKEND = "cython"
    except ImportError:  # extension not built
        _impl = _kernels_py

merge_sign = _impl.merge_sign
split_sign = _impl.split_sign
wedge_terms = _impl.wedge_terms
contract_terms = _impl.contract_terms
rref_int = _impl.rref_int
rref_fractions = _impl.rref_fractions

__all__ = [
    "BACKEND",
    "merge_sign",
    "split_sign",
    "wedge_terms",
    "contract_terms",
    "rref_int",
    "rref_fractions",
]
