"""Exact dense linear algebra over a field (RREF, kernels, membership).

Matrices are lists of lists of Scalar.  Everything is deterministic: pivots
are chosen as the first nonzero entry scanning top-to-bottom, columns
left-to-right, so identical inputs give identical echelon forms.
"""

from __future__ import annotations

from .fields import Field, Scalar


def rref(rows, field: Field):
    """Reduced row echelon form (a copy) plus the pivot column indices."""
    m = [list(r) for r in rows]
    if not m:
        return m, []
    ncols = len(m[0])
    pivots = []
    pr = 0
    for pc in range(ncols):
        pivot_row = None
        for r in range(pr, len(m)):
            if m[r][pc]:
                pivot_row = r
                break
        if pivot_row is None:
            continue
        m[pr], m[pivot_row] = m[pivot_row], m[pr]
        inv = m[pr][pc].inverse()
        m[pr] = [x * inv for x in m[pr]]
        for r in range(len(m)):
            if r != pr and m[r][pc]:
                factor = m[r][pc]
                m[r] = [a - factor * b for a, b in zip(m[r], m[pr])]
        pivots.append(pc)
        pr += 1
        if pr == len(m):
            break
    return m, pivots


def kernel_basis(rows, ncols: int, field: Field):
    """Basis of the right kernel of the matrix (one vector per free column)."""
    if not rows:
        return [_unit(ncols, j, field) for j in range(ncols)]
    echelon, pivots = rref(rows, field)
    pivot_set = set(pivots)
    free_cols = [j for j in range(ncols) if j not in pivot_set]
    basis = []
    for fc in free_cols:
        vec = [field.zero] * ncols
        vec[fc] = field.one
        for r, pc in enumerate(pivots):
            vec[pc] = -echelon[r][fc]
        basis.append(vec)
    return basis


def _unit(n: int, j: int, field: Field):
    vec = [field.zero] * n
    vec[j] = field.one
    return vec


def canonical_span_basis(vectors, field: Field):
    """Reduced-echelon basis of the span of the given vectors (rows)."""
    if not vectors:
        return []
    echelon, pivots = rref(vectors, field)
    return [echelon[i] for i in range(len(pivots))]


def solve_membership(columns, target, field: Field):
    """Coefficients c with sum_j c_j * columns[j] == target, or None.

    ``columns`` is a list of vectors (all the same length).
    """
    if not columns:
        return [] if all(not x for x in target) else None
    nrows = len(columns[0])
    rows = []
    for i in range(nrows):
        rows.append([col[i] for col in columns] + [target[i]])
    echelon, pivots = rref(rows, field)
    ncols = len(columns)
    if ncols in pivots:
        return None  # inconsistent: pivot in the augmented column
    coeffs = [field.zero] * ncols
    for r, pc in enumerate(pivots):
        coeffs[pc] = echelon[r][ncols]
    return coeffs
