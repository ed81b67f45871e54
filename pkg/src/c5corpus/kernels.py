"""Text-kernel backend selection.

Imports the compiled extension when available, otherwise the pure-Python
fallback.  Set ``C5_PURE_PYTHON=1`` to force the fallback (used by the
benchmark and the parity tests).  Both backends are interchangeable: the
outputs are identical, only the speed differs.
"""

import os

if os.environ.get("C5_PURE_PYTHON"):
    from c5corpus import _speedups_py as _impl
else:
    try:
        from c5corpus import _speedups as _impl  # type: ignore[no-redef]
    except ImportError:
        from c5corpus import _speedups_py as _impl  # type: ignore[no-redef]

BACKEND: str = _impl.BACKEND
collapse_blanks = _impl.collapse_blanks
strip_blanks = _impl.strip_blanks
han_counts = _impl.han_counts
split_after_marks = _impl.split_after_marks
