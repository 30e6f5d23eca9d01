"""Pure-Python fraction-free elimination over arbitrary-precision integers."""


def echelon(rows, ncols):
    """Bareiss row echelon form of an integer matrix.

    Returns ``(rank, pivot_columns, echelon_rows)``. The input is not modified.
    Every division is exact: after ``k`` pivots each trailing entry equals a
    ``(k+1) x (k+1)`` minor of the (row-permuted) input.
    """
    a = [list(r) for r in rows]
    nrows = len(a)
    prev = 1
    rank = 0
    pivots = []
    for c in range(ncols):
        if rank == nrows:
            break
        p = rank
        while p < nrows and a[p][c] == 0:
            p += 1
        if p == nrows:
            continue
        if p != rank:
            a[rank], a[p] = a[p], a[rank]
        prow = a[rank]
        piv = prow[c]
        for i in range(rank + 1, nrows):
            row = a[i]
            f = row[c]
            for j in range(c + 1, ncols):
                row[j] = (piv * row[j] - f * prow[j]) // prev
            row[c] = 0
        prev = piv
        pivots.append(c)
        rank += 1
    return rank, pivots, a
