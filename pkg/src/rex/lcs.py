"""Character-level LCS alignment with a compiled fast path.

The Cython kernel is used when it was built; otherwise, or when
``REX_PURE_PYTHON`` is set, the pure-Python implementation is used.  Both
return identical alignments.
"""

from __future__ import annotations

import os

from . import _lcs_py

if os.environ.get("REX_PURE_PYTHON"):
    _kernel = None
else:
    try:
        from . import _lcs_ext as _kernel
    except ImportError:
        _kernel = None

BACKEND = "cython" if _kernel is not None else "python"
lcs_pairs = _kernel.lcs_pairs if _kernel is not None else _lcs_py.lcs_pairs
python_lcs_pairs = _lcs_py.lcs_pairs


def align(a: str, b: str) -> list[tuple[int, int]]:
    """Matched index pairs between ``a`` and ``b``.

    Common prefix and suffix are matched outright.  The middle is aligned on
    the lexicographically smaller string first, so ``align(b, a)`` is exactly
    the transpose of ``align(a, b)``.
    """
    n, m = len(a), len(b)
    lo = 0
    while lo < n and lo < m and a[lo] == b[lo]:
        lo += 1
    hi = 0
    while hi < n - lo and hi < m - lo and a[n - 1 - hi] == b[m - 1 - hi]:
        hi += 1
    mid_a, mid_b = a[lo:n - hi], b[lo:m - hi]
    if mid_a <= mid_b:
        middle = lcs_pairs(mid_a, mid_b)
    else:
        middle = [(i, j) for j, i in lcs_pairs(mid_b, mid_a)]
    pairs = [(k, k) for k in range(lo)]
    pairs.extend((i + lo, j + lo) for i, j in middle)
    pairs.extend((n - hi + k, m - hi + k) for k in range(hi))
    return pairs
