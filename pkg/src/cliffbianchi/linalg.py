"""Exact linear algebra over the rationals and integer lattices (HNF, kernels)."""

from fractions import Fraction


def xgcd(a, b):
    x, nx = 1, 0
    y, ny = 0, 1
    g, ng = a, b
    while ng:
        q = g // ng
        x, nx = nx, x - q * nx
        y, ny = ny, y - q * ny
        g, ng = ng, g - q * ng
    if g < 0:
        x, y, g = -x, -y, -g
    return g, x, y


def mat_mul(a, b):
    n, k = len(a), len(b)
    m = len(b[0]) if b else 0
    out = [[Fraction(0)] * m for _ in range(n)]
    for i in range(n):
        ai = a[i]
        oi = out[i]
        for t in range(k):
            c = ai[t]
            if not c:
                continue
            bt = b[t]
            for j in range(m):
                if bt[j]:
                    oi[j] += c * bt[j]
    return out

def mat_vec(a, v):
    return [sum((c * x for c, x in zip(row, v) if c), Fraction(0)) for row in a]


def identity(n):
    return [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]


def mat_det(a):
    """Determinant by fraction-free elimination; exact for int or Fraction."""
    n = len(a)
    m = [[Fraction(x) for x in row] for row in a]
    det = Fraction(1)
    for col in range(n):
        piv = None
        for r in range(col, n):
            if m[r][col]:
                piv = r
                break
        if piv is None:
            return Fraction(0)
        if piv != col:
            m[col], m[piv] = m[piv], m[col]
            det = -det
        det *= m[col][col]
        inv = Fraction(1) / m[col][col]
        for r in range(col + 1, n):
            f = m[r][col] * inv
            if not f:
                continue
            for c in range(col, n):
                m[r][c] -= f * m[col][c]
    return det


def solve(a, b):
    """Solve a x = b exactly; returns None if singular/inconsistent."""
    n = len(a)
    m = [[Fraction(x) for x in row] + [Fraction(y)] for row, y in zip(a, b)]
    cols = len(a[0])
    row = 0
    pivots = []
    for col in range(cols):
        piv = None
        for r in range(row, n):
            if m[r][col]:
                piv = r
                break
        if piv is None:
            continue
        m[row], m[piv] = m[piv], m[row]
        inv = Fraction(1) / m[row][col]
        m[row] = [x * inv for x in m[row]]
        for r in range(n):
            if r != row and m[r][col]:
                f = m[r][col]
                m[r] = [x - f * y for x, y in zip(m[r], m[row])]
        pivots.append(col)
        row += 1
        if row == n:
            break
    for r in range(row, n):
        if m[r][cols]:
            return None
    x = [Fraction(0)] * cols
    for r, col in enumerate(pivots):
        x[col] = m[r][cols]
    return x


def mat_inv(a):
    n = len(a)
    aug = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(a)]
    for col in range(n):
        piv = None
        for r in range(col, n):
            if aug[r][col]:
                piv = r
                break
        if piv is None:
            raise ValueError("singular matrix")
        aug[col], aug[piv] = aug[piv], aug[col]
        inv = Fraction(1) / aug[col][col]
        aug[col] = [x * inv for x in aug[col]]
        for r in range(n):
            if r != col and aug[r][col]:
                f = aug[r][col]
                aug[r] = [x - f * y for x, y in zip(aug[r], aug[col])]
    return [row[n:] for row in aug]


def rank(a):
    if not a:
        return 0
    m = [[Fraction(x) for x in row] for row in a]
    n, cols = len(m), len(m[0])
    row = 0
    for col in range(cols):
        piv = None
        for r in range(row, n):
            if m[r][col]:
                piv = r
                break
        if piv is None:
            continue
        m[row], m[piv] = m[piv], m[row]
        inv = Fraction(1) / m[row][col]
        m[row] = [x * inv for x in m[row]]
        for r in range(n):
            if r != row and m[r][col]:
                f = m[r][col]
                m[r] = [x - f * y for x, y in zip(m[r], m[row])]
        row += 1
    return row


def rational_kernel(a):
    """Basis of the right kernel {x : a x = 0}, exact."""
    if not a:
        return []
    n, cols = len(a), len(a[0])
    m = [[Fraction(x) for x in row] for row in a]
    pivots = {}
    row = 0
    for col in range(cols):
        piv = None
        for r in range(row, n):
            if m[r][col]:
                piv = r
                break
        if piv is None:
            continue
        m[row], m[piv] = m[piv], m[row]
        inv = Fraction(1) / m[row][col]
        m[row] = [x * inv for x in m[row]]
        for r in range(n):
            if r != row and m[r][col]:
                f = m[r][col]
                m[r] = [x - f * y for x, y in zip(m[r], m[row])]
        pivots[col] = row
        row += 1
    basis = []
    free = [c for c in range(cols) if c not in pivots]
    for fc in free:
        v = [Fraction(0)] * cols
        v[fc] = Fraction(1)
        for pc, pr in pivots.items():
            v[pc] = -m[pr][fc]
        basis.append(v)
    return basis


def hnf(rows):
    """Row Hermite normal form of an integer matrix; zero rows dropped.

    Pivots positive, entries above each pivot reduced into [0, pivot).
    """
    m = [list(map(int, r)) for r in rows if any(r)]
    if not m:
        return []
    cols = len(m[0])
    out = []
    row = 0
    work = m
    for col in range(cols):
        idx = [r for r in range(len(work)) if work[r][col]]
        if not idx:
            continue
        r0 = idx[0]
        for r in idx[1:]:
            a, b = work[r0][col], work[r][col]
            g, x, y = xgcd(a, b)
            ca, cb = a // g, b // g
            new0 = [x * p + y * q for p, q in zip(work[r0], work[r])]
            newr = [-cb * p + ca * q for p, q in zip(work[r0], work[r])]
            work[r0], work[r] = new0, newr
        piv = work.pop(r0)
        if piv[col] < 0:
            piv = [-x for x in piv]
        for prev in out:
            if prev[col]:
                q = prev[col] // piv[col]
                if q:
                    for j in range(cols):
                        prev[j] -= q * piv[j]
        out.append(piv)
        work = [r for r in work if any(r)]
    return out


def hnf_with_denominator(rows):
    """HNF presentation (den, int rows) of the lattice spanned by rational rows."""
    den = 1
    for r in rows:
        for x in r:
            f = Fraction(x)
            den = den * f.denominator // _gcd_int(den, f.denominator)
    int_rows = [[int(Fraction(x) * den) for x in r] for r in rows]
    return den, hnf(int_rows)


def _gcd_int(a, b):
    while b:
        a, b = b, a % b
    return abs(a)


def lattice_key(rows):
    """Canonical hashable key for the lattice spanned by rational rows."""
    den, h = hnf_with_denominator(rows)
    return (den,) + tuple(tuple(r) for r in h)


def integer_kernel(a):
    """Basis of {x in Z^n : x a = 0} for an integer matrix a (rows act on left)."""
    n = len(a)
    if n == 0:
        return []
    cols = len(a[0])
    # HNF of [a | I]: rows whose a-part vanished give the kernel
    aug = [list(map(int, a[i])) + [int(i == j) for j in range(n)] for i in range(n)]
    reduced = _hnf_tracked(aug, cols)
    out = []
    for row in reduced:
        if not any(row[:cols]):
            out.append(row[cols:])
    return out


def _hnf_tracked(m, lead_cols):
    work = [list(r) for r in m]
    out = []
    for col in range(lead_cols):
        idx = [r for r in range(len(work)) if work[r][col]]
        if not idx:
            continue
        r0 = idx[0]
        for r in idx[1:]:
            a, b = work[r0][col], work[r][col]
            g, x, y = xgcd(a, b)
            ca, cb = a // g, b // g
            new0 = [x * p + y * q for p, q in zip(work[r0], work[r])]
            newr = [-cb * p + ca * q for p, q in zip(work[r0], work[r])]
            work[r0], work[r] = new0, newr
        out.append(work.pop(r0))
    out.extend(work)
    return out


def lattice_contains(den, hnf_rows, vector):
    """Membership of a rational vector in the lattice given by (den, HNF rows)."""
    v = [Fraction(x) * den for x in vector]
    if any(x.denominator != 1 for x in v):
        return False
    v = [int(x) for x in v]
    cols = len(v)
    pivots = []
    for row in hnf_rows:
        lead = next((j for j in range(cols) if row[j]), None)
        pivots.append((lead, row))
    for lead, row in pivots:
        if lead is None:
            continue
        if v[lead] % row[lead] != 0:
            return False
        q = v[lead] // row[lead]
        if q:
            for j in range(cols):
                v[j] -= q * row[j]
    return not any(v)


def smith_invariants(matrix):
    """Elementary divisors of an integer matrix (nonzero ones, in order)."""
    m = [list(map(int, row)) for row in matrix]
    if not m:
        return []
    rows, cols = len(m), len(m[0])
    out = []
    top = 0
    while top < min(rows, cols):
        # find a nonzero pivot
        piv = None
        for i in range(top, rows):
            for j in range(top, cols):
                if m[i][j]:
                    piv = (i, j)
                    break
            if piv:
                break
        if piv is None:
            break
        i, j = piv
        m[top], m[i] = m[i], m[top]
        for r in range(rows):
            m[r][top], m[r][j] = m[r][j], m[r][top]
        while True:
            # clear column
            again = False
            for i in range(top + 1, rows):
                if m[i][top]:
                    a, b = m[top][top], m[i][top]
                    g, x, y = xgcd(a, b)
                    ca, cb = a // g, b // g
                    r0 = [x * p + y * q for p, q in zip(m[top], m[i])]
                    r1 = [-cb * p + ca * q for p, q in zip(m[top], m[i])]
                    m[top], m[i] = r0, r1
            for j in range(top + 1, cols):
                if m[top][j]:
                    a, b = m[top][top], m[top][j]
                    g, x, y = xgcd(a, b)
                    ca, cb = a // g, b // g
                    for r in range(rows):
                        p, q = m[r][top], m[r][j]
                        m[r][top] = x * p + y * q
                        m[r][j] = -cb * p + ca * q
                    again = True
            if not again and all(m[i][top] == 0 for i in range(top + 1, rows)):
                break
        d = abs(m[top][top])
        out.append(d)
        top += 1
    # normalize divisibility chain
    for i in range(len(out)):
        for j in range(i + 1, len(out)):
            g = _gcd_int(out[i], out[j])
            if g:
                l = out[i] * out[j] // g
                out[i], out[j] = g, l
    return sorted(d for d in out if d)


def lattice_index(den_a, hnf_a, den_b, hnf_b):
    """Index [A : B] of lattices given by HNF data, assuming B <= A, same rank."""
    det_a = Fraction(1)
    for i, row in enumerate(hnf_a):
        lead = next(j for j in range(len(row)) if row[j])
        det_a *= Fraction(row[lead], den_a)
    det_b = Fraction(1)
    for i, row in enumerate(hnf_b):
        lead = next(j for j in range(len(row)) if row[j])
        det_b *= Fraction(row[lead], den_b)
    q = det_b / det_a
    if q.denominator != 1:
        raise ValueError("not a sublattice")
    return q.numerator
