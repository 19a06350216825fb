"""Pure-Python integer kernels (fallback when the extension is not built).

Both functions take a row-major flat sequence of Python ints and use
fraction-free (Bareiss) elimination, so every intermediate stays integral.
"""

from __future__ import annotations

from typing import Sequence


def rank_int(flat: Sequence[int], rows: int, cols: int) -> int:
    if rows == 0 or cols == 0:
        return 0
    a = [list(flat[i * cols:(i + 1) * cols]) for i in range(rows)]
    prev = 1
    r = 0
    for c in range(cols):
        if r == rows:
            break
        p = r
        while p < rows and a[p][c] == 0:
            p += 1
        if p == rows:
            continue
        if p != r:
            a[p], a[r] = a[r], a[p]
        pivrow = a[r]
        piv = pivrow[c]
        for i in range(r + 1, rows):
            row = a[i]
            aic = row[c]
            if aic == 0:
                if piv != prev:
                    for j in range(c + 1, cols):
                        row[j] = row[j] * piv // prev
                continue
            for j in range(c + 1, cols):
                row[j] = (row[j] * piv - aic * pivrow[j]) // prev
            row[c] = 0
        prev = piv
        r += 1
    return r


def det_int(flat: Sequence[int], n: int) -> int:
    if n == 0:
        return 1
    a = [list(flat[i * n:(i + 1) * n]) for i in range(n)]
    sign = 1
    prev = 1
    for c in range(n - 1):
        p = c
        while p < n and a[p][c] == 0:
            p += 1
        if p == n:
            return 0
        if p != c:
            a[p], a[c] = a[c], a[p]
            sign = -sign
        pivrow = a[c]
        piv = pivrow[c]
        for i in range(c + 1, n):
            row = a[i]
            aic = row[c]
            for j in range(c + 1, n):
                row[j] = (row[j] * piv - aic * pivrow[j]) // prev
            row[c] = 0
        prev = piv
    return sign * a[n - 1][n - 1]
