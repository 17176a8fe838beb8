"""Dense linear algebra over the rationals and over floats.

Exact routines run on ``gmpy2.mpq`` internally and hand back
:class:`fractions.Fraction` values.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Callable, List, Optional, Sequence

import gmpy2
import numpy as np

from .scalar import FLOAT_ZERO_TOL

mpq = gmpy2.mpq


def _to_mpq(v):
    if isinstance(v, Fraction):
        return mpq(v.numerator, v.denominator)
    return mpq(v)


def _to_frac(v) -> Fraction:
    return Fraction(int(v.numerator), int(v.denominator))


def mpq_matrix(rows) -> List[list]:
    return [[_to_mpq(v) for v in row] for row in rows]


def _echelon(a: List[list], cols: Sequence[int], reduce_above: bool):
    """In-place Gaussian elimination over the given column order.

    Returns the pivot columns; rows ``0..rank-1`` of ``a`` hold the echelon
    form with unit pivots.
    """
    nrows = len(a)
    pivots = []
    r = 0
    for c in cols:
        if r == nrows:
            break
        p = next((i for i in range(r, nrows) if a[i][c] != 0), None)
        if p is None:
            continue
        a[r], a[p] = a[p], a[r]
        prow = a[r]
        inv = 1 / prow[c]
        nz = [j for j in range(len(prow)) if prow[j] != 0]
        for j in nz:
            prow[j] *= inv
        targets = range(nrows) if reduce_above else range(r + 1, nrows)
        for i in targets:
            if i == r:
                continue
            row = a[i]
            f = row[c]
            if f == 0:
                continue
            for j in nz:
                row[j] -= f * prow[j]
        pivots.append(c)
        r += 1
    return pivots


def rref(rows, col_order: Optional[Sequence[int]] = None):
    """Reduced row echelon form.

    ``col_order`` lists the columns in the order pivots are searched for;
    the default is left to right.  Returns ``(rows, pivot_columns)`` with
    only the ``rank`` non-zero rows.
    """
    a = mpq_matrix(rows)
    if not a:
        return [], []
    ncols = len(a[0])
    cols = list(col_order) if col_order is not None else list(range(ncols))
    pivots = _echelon(a, cols, reduce_above=True)
    return [[_to_frac(v) for v in a[i]] for i in range(len(pivots))], pivots


def rank(rows) -> int:
    a = mpq_matrix(rows)
    if not a:
        return 0
    return len(_echelon(a, range(len(a[0])), reduce_above=False))


def nullspace(rows, ncols: Optional[int] = None,
              col_order: Optional[Sequence[int]] = None) -> List[List[Fraction]]:
    """Canonical nullspace basis from the reduced echelon form.

    One vector per free column (in ``col_order``), with a 1 in that column
    and zeros in the other free columns.
    """
    if ncols is None:
        ncols = len(rows[0])
    if not rows:
        return [[Fraction(int(i == j)) for i in range(ncols)] for j in range(ncols)]
    red, pivots = rref(rows, col_order)
    order = list(col_order) if col_order is not None else list(range(ncols))
    pivset = set(pivots)
    basis = []
    for f in order:
        if f in pivset:
            continue
        v = [Fraction(0)] * ncols
        v[f] = Fraction(1)
        for row, pc in zip(red, pivots):
            if row[f] != 0:
                v[pc] = -row[f]
        basis.append(v)
    return basis


def det(rows) -> Fraction:
    """Exact determinant by Gaussian elimination."""
    a = mpq_matrix(rows)
    n = len(a)
    if n == 0:
        return Fraction(1)
    if any(len(r) != n for r in a):
        raise ValueError("determinant of a non-square matrix")
    d = mpq(1)
    for c in range(n):
        p = next((i for i in range(c, n) if a[i][c] != 0), None)
        if p is None:
            return Fraction(0)
        if p != c:
            a[c], a[p] = a[p], a[c]
            d = -d
        piv = a[c][c]
        d *= piv
        for i in range(c + 1, n):
            f = a[i][c] / piv
            if f:
                ri, rc = a[i], a[c]
                for j in range(c, n):
                    ri[j] -= f * rc[j]
    return _to_frac(d)


def bareiss_det(matrix, exact_div: Callable, zero, one):
    """Fraction-free determinant over an integral domain.

    ``exact_div(a, b)`` must return ``a / b`` when the division is exact
    (Sylvester's identity guarantees it for every step).
    """
    a = [list(r) for r in matrix]
    n = len(a)
    if n == 0:
        return one
    sign = 1
    prev = one
    for k in range(n - 1):
        if not a[k][k]:
            p = next((i for i in range(k + 1, n) if a[i][k]), None)
            if p is None:
                return zero
            a[k], a[p] = a[p], a[k]
            sign = -sign
        pk = a[k][k]
        for i in range(k + 1, n):
            aik = a[i][k]
            for j in range(k + 1, n):
                num = a[i][j] * pk - aik * a[k][j]
                a[i][j] = exact_div(num, prev) if k else num
            a[i][k] = zero
        prev = pk
    d = a[n - 1][n - 1]
    return d if sign == 1 else -d


def plu_last_row(mt) -> tuple:
    """Exact partial-pivot elimination of the ``N x (N-1)`` matrix ``mt``.

    Returns ``(w, diag, sign)`` where ``w`` is the last row of
    ``L^-1 P^T`` (so ``L^-1 P^T mt = U`` with a zero last row), ``diag`` the
    diagonal of ``U`` (``None`` if a pivot column has no non-zero entry) and
    ``sign = det(P)``.
    """
    a = mpq_matrix(mt)
    n = len(a)
    m = len(a[0]) if a else 0
    if m != n - 1:
        raise ValueError("expected an N x (N-1) matrix")
    e = [[mpq(int(i == j)) for j in range(n)] for i in range(n)]
    sign = 1
    diag = []
    for c in range(m):
        p = max(range(c, n), key=lambda i: abs(a[i][c]))
        if a[p][c] == 0:
            return None, None, sign
        if p != c:
            a[c], a[p] = a[p], a[c]
            e[c], e[p] = e[p], e[c]
            sign = -sign
        piv = a[c][c]
        diag.append(_to_frac(piv))
        for i in range(c + 1, n):
            f = a[i][c] / piv
            if f:
                ri, rc = a[i], a[c]
                for j in range(c, m):
                    ri[j] -= f * rc[j]
                ei, ec = e[i], e[c]
                for j in range(n):
                    if ec[j]:
                        ei[j] -= f * ec[j]
    return [_to_frac(v) for v in e[n - 1]], diag, sign


# -- float helpers -----------------------------------------------------------

def float_svd_rank(a, tol: float = FLOAT_ZERO_TOL) -> int:
    a = np.asarray(a, dtype=float)
    if a.size == 0:
        return 0
    s = np.linalg.svd(a, compute_uv=False)
    if s.size == 0 or s[0] == 0:
        return 0
    return int(np.sum(s > tol * s[0]))


def float_nullspace(a, tol: float = FLOAT_ZERO_TOL) -> np.ndarray:
    """Right singular vectors with singular value below ``tol * sigma_max``.

    Returned as rows.
    """
    a = np.asarray(a, dtype=float)
    ncols = a.shape[1]
    _, s, vt = np.linalg.svd(a, full_matrices=True)
    smax = s[0] if s.size else 0.0
    r = int(np.sum(s > tol * smax)) if smax > 0 else 0
    return vt[r:ncols]
