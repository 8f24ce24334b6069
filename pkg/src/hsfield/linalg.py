"""Exact Gaussian elimination over any ring descriptor that is a field.

Matrices are lists of row lists holding ring elements.  The ring is anything
with the shared interface of :mod:`hsfield.rings` (``GF`` included).
"""

from __future__ import annotations

from .poly import exact_div


def rref(rows, R):
    """Reduced row echelon form.  Returns (matrix, pivot_columns)."""
    M = [list(r) for r in rows]
    if not M:
        return M, []
    ncols = len(M[0])
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        if r == len(M):
            break
        piv = next((i for i in range(r, len(M)) if not R.is_zero(M[i][c])), None)
        if piv is None:
            continue
        M[r], M[piv] = M[piv], M[r]
        inv = R.inv(M[r][c])
        M[r] = [R.mul(x, inv) for x in M[r]]
        for i in range(len(M)):
            if i != r and not R.is_zero(M[i][c]):
                f = M[i][c]
                M[i] = [R.sub(x, R.mul(f, y)) for x, y in zip(M[i], M[r])]
        pivots.append(c)
        r += 1
    return M, pivots


def rank(rows, R) -> int:
    if getattr(R, "kind", None) == "rational":
        return _fraction_free_rank(rows)
    return len(rref(rows, R)[1])


def _fraction_free_rank(rows) -> int:
    """Rank over a rational function field without any gcd computations.

    Rows are scaled by the product of their distinct denominators, then
    reduced by Bareiss elimination in the polynomial ring: every update
    divides exactly by the previous pivot.
    """
    M = []
    for row in rows:
        dens = []
        for x in row:
            if not x.is_zero() and not x.den.is_one() and x.den not in dens:
                dens.append(x.den)
        out = []
        for x in row:
            v = x.num
            for d in dens:
                v = v * d if d != x.den else v
            out.append(v)
        M.append(out)
    if not M:
        return 0
    ncols = len(M[0])
    prev = None
    r = 0
    for c in range(ncols):
        if r == len(M):
            break
        piv = next((i for i in range(r, len(M)) if not M[i][c].is_zero()), None)
        if piv is None:
            continue
        M[r], M[piv] = M[piv], M[r]
        p = M[r][c]
        for i in range(r + 1, len(M)):
            a = M[i][c]
            new = []
            for x, y in zip(M[i], M[r]):
                v = x * p - y * a
                new.append(exact_div(v, prev) if prev is not None and not v.is_zero() else v)
            M[i] = new
        prev = p
        r += 1
    return r


def nullspace(rows, R, ncols: int | None = None):
    """Basis of {x : M x = 0}, one vector per free column, in column order."""
    if not rows:
        if ncols is None:
            raise ValueError("need ncols for an empty matrix")
        return [[R.one if i == j else R.zero for i in range(ncols)] for j in range(ncols)]
    ncols = len(rows[0])
    M, pivots = rref(rows, R)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for fc in free:
        v = [R.zero] * ncols
        v[fc] = R.one
        for r, pc in enumerate(pivots):
            v[pc] = R.neg(M[r][fc])
        basis.append(v)
    return basis


def row_space_basis(rows, R):
    """Nonzero rows of the reduced echelon form."""
    M, pivots = rref(rows, R)
    return M[: len(pivots)]


def solve(rows, rhs, R):
    """One solution of M x = rhs, or None when inconsistent."""
    if not rows:
        return [] if all(R.is_zero(b) for b in rhs) else None
    ncols = len(rows[0])
    aug = [list(r) + [b] for r, b in zip(rows, rhs)]
    M, pivots = rref(aug, R)
    if ncols in pivots:
        return None
    x = [R.zero] * ncols
    for r, pc in enumerate(pivots):
        x[pc] = M[r][ncols]
    return x
