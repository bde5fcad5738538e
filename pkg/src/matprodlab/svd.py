"""Small dense singular value decomposition by cyclic one-sided Jacobi rotations.

Meant for the tiny matrices (d <= 16) met in this package; no external linear
algebra is used.
"""

from __future__ import annotations

import math
from typing import Sequence

TOL = 1e-13
MAX_SWEEPS = 100


def singular_values(a: Sequence[Sequence[float]], tol: float = TOL) -> list[float]:
    """Singular values of ``a`` in nonincreasing order."""
    rows = len(a)
    cols = len(a[0]) if rows else 0
    if rows == 0 or cols == 0:
        return []
    # orthogonalize columns of a copy; work on the transpose when wide
    if cols > rows:
        a = [list(r) for r in zip(*a)]
        rows, cols = cols, rows
    u = [[float(a[i][j]) for i in range(rows)] for j in range(cols)]  # column-major
    scale = max((abs(x) for col in u for x in col), default=0.0)
    if scale == 0.0:
        return [0.0] * cols
    u = [[x / scale for x in col] for col in u]
    for _ in range(MAX_SWEEPS):
        off = 0.0
        for p in range(cols - 1):
            up = u[p]
            for q in range(p + 1, cols):
                uq = u[q]
                alpha = sum(x * x for x in up)
                beta = sum(x * x for x in uq)
                gamma = sum(x * y for x, y in zip(up, uq))
                if alpha == 0.0 or beta == 0.0:
                    continue
                rel = abs(gamma) / (math.sqrt(alpha) * math.sqrt(beta))
                off = max(off, rel)
                if rel <= tol:
                    continue
                zeta = (beta - alpha) / (2.0 * gamma)
                t = math.copysign(1.0, zeta) / (abs(zeta) + math.sqrt(1.0 + zeta * zeta))
                c = 1.0 / math.sqrt(1.0 + t * t)
                s = c * t
                for i in range(rows):
                    x, y = up[i], uq[i]
                    up[i] = c * x - s * y
                    uq[i] = s * x + c * y
        if off <= tol:
            break
    sv = sorted((math.sqrt(sum(x * x for x in col)) * scale for col in u), reverse=True)
    return sv
