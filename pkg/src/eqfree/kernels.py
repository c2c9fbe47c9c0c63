"""Backend selection for the hot word kernels.

The compiled module is used when it was built; otherwise, or when the
``EQFREE_PURE_PYTHON`` environment variable is set to a non-empty value, the
pure-Python implementation is used. ``BACKEND`` names the active one.
"""

import os

if os.environ.get("EQFREE_PURE_PYTHON"):
    from ._pykernels import apply_codes, half_keys, invert_codes, letter_order, reduce_codes

    BACKEND = "python"
else:
    try:
        from ._ckernels import apply_codes, half_keys, invert_codes, letter_order, reduce_codes

        BACKEND = "cython"
    except ImportError:  # extension not built
        from ._pykernels import apply_codes, half_keys, invert_codes, letter_order, reduce_codes

        BACKEND = "python"

__all__ = ["BACKEND", "apply_codes", "half_keys", "invert_codes", "letter_order", "reduce_codes"]
