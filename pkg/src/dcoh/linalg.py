"""Exact linear algebra over the sigma-fields.

Matrices are lists of rows of FieldElements.  Elimination is done by
cross-multiplication (no pivot division inside the loop), and after
each combination the field's normalize_row hook may rescale the row;
over QQ(t) this keeps entries polynomial with small content, which is
what tames expression swell there.  Pivot divisions happen only once,
when reading off kernels or solutions.
"""

from __future__ import annotations


def row_echelon(matrix, field):
    """Reduced echelon form (pivots not normalized to 1).

    Returns (rows, pivots) where pivots is a list of (row, col) pairs.
    """
    rows = [list(r) for r in matrix]
    pivots = []
    r = 0
    ncols = len(rows[0]) if rows else 0
    for col in range(ncols):
        piv = None
        for i in range(r, len(rows)):
            if not rows[i][col].is_zero():
                piv = i
                break
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        pv = rows[r][col]
        for i in range(len(rows)):
            if i == r:
                continue
            c = rows[i][col]
            if c.is_zero():
                continue
            base = rows[i]
            ref = rows[r]
            combined = [
                pv * a - c * b if not (a.is_zero() and b.is_zero()) else a
                for a, b in zip(base, ref)
            ]
            rows[i] = field.normalize_row(combined)
        pivots.append((r, col))
        r += 1
        if r == len(rows):
            break
    return rows, pivots


def rank(matrix, field) -> int:
    return len(row_echelon(matrix, field)[1])


def kernel_basis(matrix, field, ncols=None):
    """Basis of {x : M x = 0}; rows of the matrix are the equations."""
    if ncols is None:
        ncols = len(matrix[0]) if matrix else 0
    if not matrix:
        matrix = []
    rows, pivots = row_echelon(matrix, field)
    pivot_of_col = {c: r for r, c in pivots}
    zero = field.zero()
    one = field.one()
    basis = []
    for free in range(ncols):
        if free in pivot_of_col:
            continue
        vec = [zero] * ncols
        vec[free] = one
        for col, r in pivot_of_col.items():
            vec[col] = -rows[r][free] / rows[r][col]
        basis.append(vec)
    return basis


def solve(matrix, rhs, field):
    """One solution x of M x = rhs, or None if inconsistent."""
    if not matrix:
        return [] if all(b.is_zero() for b in rhs) else None
    aug = [list(row) + [b] for row, b in zip(matrix, rhs)]
    rows, pivots = row_echelon(aug, field)
    ncols = len(matrix[0])
    for r, c in pivots:
        if c == ncols:
            return None
    zero = field.zero()
    x = [zero] * ncols
    for r, c in pivots:
        x[c] = rows[r][ncols] / rows[r][c]
    return x


def in_span(vectors, target, field):
    """Coefficients expressing target in the span of vectors, or None."""
    if not vectors:
        return [] if all(t.is_zero() for t in target) else None
    matrix = [[vec[i] for vec in vectors] for i in range(len(target))]
    return solve(matrix, target, field)


def invert_matrix(matrix, field):
    """Inverse of a square matrix of field elements, or None if singular."""
    n = len(matrix)
    zero = field.zero()
    one = field.one()
    aug = [list(row) + [one if i == j else zero for j in range(n)]
           for i, row in enumerate(matrix)]
    rows, pivots = row_echelon(aug, field)
    if len(pivots) < n or any(c >= n for _, c in pivots):
        return None
    inv = [[zero] * n for _ in range(n)]
    for r, c in pivots:
        pv = rows[r][c]
        for j in range(n):
            inv[c][j] = rows[r][n + j] / pv
    return inv
