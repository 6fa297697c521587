"""Pure-Python back-and-forth refinement kernel (reference twin of ``_kernels.pyx``)."""
import numpy as np


def refine_step(cls, ptr, idx):
    """One back-and-forth round over a tuple table.

    ``cls[t]`` is the current class of tuple ``t``; the one-point extensions
    of ``t`` are ``idx[ptr[t]:ptr[t+1]]``.  The new class of ``t`` is keyed by
    its old class and the set of classes of its extensions.  New ids are
    handed out in order of first occurrence.  Returns ``(new_cls, n_classes)``.
    """
    n = len(cls)
    out = np.empty(n, dtype=np.int64)
    ids = {}
    for t in range(n):
        ext = sorted({int(cls[u]) for u in idx[ptr[t]:ptr[t + 1]]})
        key = (int(cls[t]), *ext)
        out[t] = ids.setdefault(key, len(ids))
    return out, len(ids)
