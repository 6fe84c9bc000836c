"""Hot-loop kernels with a compiled core and a pure-Python fallback.

The Cython extension is used when it imported cleanly; setting
EMOLYSIS_PURE=1 forces the Python implementation. Both produce
bit-identical results; `IMPLEMENTATION` records which one is active.
"""

import os

from . import _python

if os.environ.get("EMOLYSIS_PURE") == "1":
    _impl = _python
    IMPLEMENTATION = "python"
else:
    try:
        from . import _native as _impl  # type: ignore[no-redef]

        IMPLEMENTATION = "native"
    except ImportError:
        _impl = _python
        IMPLEMENTATION = "python"

splitmix_expand = _impl.splitmix_expand
iou_matrix = _impl.iou_matrix
accumulate_ticks = _impl.accumulate_ticks

__all__ = ["splitmix_expand", "iou_matrix", "accumulate_ticks", "IMPLEMENTATION"]
