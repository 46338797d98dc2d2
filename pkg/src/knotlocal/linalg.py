"""Exact linear algebra over the rationals and the integers.

Small dense systems only: everything here backs the symbolic derivation
pipeline, where matrices have a handful of rows.  Rational elimination uses
fractions.Fraction; integer solving goes through a Hermite normal form.
"""

from __future__ import annotations

from fractions import Fraction


def rref(m, ncols=None):
    """Reduced row echelon form in place.  Returns the list of pivot columns.

    `m` is a list of rows of Fractions.  If `ncols` is given, pivots are only
    sought in the first `ncols` columns (the rest ride along as right hand
    sides).
    """
    if not m:
        return []
    width = ncols if ncols is not None else len(m[0])
    pivots = []
    row = 0
    for col in range(width):
        pr = None
        for r in range(row, len(m)):
            if m[r][col] != 0:
                pr = r
                break
        if pr is None:
            continue
        m[row], m[pr] = m[pr], m[row]
        inv = Fraction(1) / m[row][col]
        m[row] = [v * inv for v in m[row]]
        for r in range(len(m)):
            if r != row and m[r][col] != 0:
                f = m[r][col]
                m[r] = [a - f * b for a, b in zip(m[r], m[row])]
        pivots.append(col)
        row += 1
        if row == len(m):
            break
    return pivots


def rank(rows, cols):
    """Rank of the submatrix of `rows` restricted to column indices `cols`."""
    sub = [[Fraction(r[c]) for c in cols] for r in rows]
    return len(rref(sub))


def solve_unique(a, b_cols):
    """Solve A x = B exactly where A is square and invertible over Q.

    `b_cols` is a matrix of right hand side columns (one row per equation).
    Returns the solution as a list of rows (one per unknown), or None if A
    is singular.
    """
    n = len(a)
    aug = [[Fraction(v) for v in a[i]] + [Fraction(v) for v in b_cols[i]]
           for i in range(n)]
    pivots = rref(aug, ncols=n)
    if len(pivots) != n:
        return None
    return [row[n:] for row in aug]


def hnf_solve(a, b):
    """Find an integer vector x with A x = b, or None.

    A is a list of integer rows (m x n), b an integer vector of length m.
    Column-operation Hermite reduction: track U with A U = H, solve H y = b
    by forward substitution, return U y.
    """
    m = len(a)
    n = len(a[0]) if m else 0
    h = [list(map(int, row)) for row in a]
    u = [[1 if i == j else 0 for j in range(n)] for i in range(n)]

    def colop(j, k, q):
        # col_k -= q * col_j
        for row in h:
            row[k] -= q * row[j]
        for row in u:
            row[k] -= q * row[j]

    def colswap(j, k):
        for row in h:
            row[j], row[k] = row[k], row[j]
        for row in u:
            row[j], row[k] = row[k], row[j]

    piv = 0
    pivot_rows = []
    for i in range(m):
        if piv >= n:
            break
        while True:
            nz = [j for j in range(piv, n) if h[i][j] != 0]
            if not nz:
                break
            j0 = min(nz, key=lambda j: abs(h[i][j]))
            colswap(piv, j0)
            done = True
            for j in range(piv + 1, n):
                if h[i][j] != 0:
                    q = h[i][j] // h[i][piv]
                    colop(piv, j, q)
                    if h[i][j] != 0:
                        done = False
            if done:
                break
        if h[i][piv] != 0:
            if h[i][piv] < 0:
                for row in h:
                    row[piv] = -row[piv]
                for row in u:
                    row[piv] = -row[piv]
            pivot_rows.append(i)
            piv += 1
    # forward substitution on the triangular-ish H
    y = [0] * n
    seen = set()
    col = 0
    for i in range(m):
        if col < n and h[i][col] != 0 and i in pivot_rows:
            resid = b[i] - sum(h[i][j] * y[j] for j in range(col))
            if resid % h[i][col] != 0:
                return None
            y[col] = resid // h[i][col]
            seen.add(i)
            col += 1
    # consistency of the remaining rows
    for i in range(m):
        if i in seen:
            continue
        if sum(h[i][j] * y[j] for j in range(n)) != b[i]:
            return None
    return [sum(u[i][j] * y[j] for j in range(n)) for i in range(n)]
