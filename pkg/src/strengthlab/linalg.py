"""Gaussian elimination over a :class:`~strengthlab.field.FiniteField`.

Matrices are lists of rows of int codes.  Pivoting is deterministic: the
pivot of each column is the first row (from the current one down) with a
nonzero entry, so certificates built on these solves are reproducible.
"""


def rref(rows, field):
    """Reduced row echelon form; returns ``(matrix, pivot_columns)``."""
    m = [list(r) for r in rows]
    if not m:
        return m, []
    ncols = len(m[0])
    pivots = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(m)) if m[i][c]), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = field.inv(m[r][c])
        m[r] = [field.mul(inv, x) for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c]:
                f = m[i][c]
                m[i] = [field.sub(x, field.mul(f, y)) for x, y in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m, pivots


def rank(rows, field):
    return len(rref(rows, field)[1])


def solve(a, b, field):
    """One solution of ``a x = b`` (free variables set to 0), or ``None``."""
    ncols = len(a[0]) if a else 0
    aug = [list(row) + [bi] for row, bi in zip(a, b)]
    m, pivots = rref(aug, field)
    if ncols in pivots:
        return None
    x = [0] * ncols
    for row, c in zip(m, pivots):
        x[c] = row[ncols]
    return x


def nullspace(rows, ncols, field):
    """Basis of ``{x : rows x = 0}`` as a list of vectors."""
    if not rows:
        return [[int(i == j) for j in range(ncols)] for i in range(ncols)]
    m, pivots = rref(rows, field)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        v = [0] * ncols
        v[f] = 1
        for row, c in zip(m, pivots):
            v[c] = field.neg(row[f])
        basis.append(v)
    return basis


def matmul(a, b, field):
    cols = list(zip(*b))
    out = []
    for row in a:
        out_row = []
        for col in cols:
            acc = 0
            for x, y in zip(row, col):
                if x and y:
                    acc = field.add(acc, field.mul(x, y))
            out_row.append(acc)
        out.append(out_row)
    return out


def transpose(a):
    return [list(r) for r in zip(*a)]
