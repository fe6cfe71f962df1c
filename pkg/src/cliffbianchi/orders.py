"""Orders in rational Clifford algebras: discriminants, p-maximal enumeration,
maximal orders, involution stability, Clifford-vector lattices, codes.

An order is stored by a Hermite-normal-form basis over the algebra's subset
basis with one global denominator, so equality is structural.
"""

from fractions import Fraction

import numpy as np

from .algebra import CliffordElement, popcount
from .lattices import Lattice
from .linalg import (
    hnf,
    hnf_with_denominator,
    integer_kernel,
    lattice_contains,
    lattice_key,
    mat_det,
    mat_inv,
    mat_mul,
    solve,
)

LINE_ENUM_CAP = 1 << 21


def _object_tensor(E):
    return E.astype(object)


def _int_matrix(frac_rows):
    """(numpy object matrix, common denominator) for a rational matrix."""
    den = 1
    for row in frac_rows:
        for x in row:
            f = Fraction(x)
            g = _gcd2(den, f.denominator)
            den = den * f.denominator // g
    num = np.zeros((len(frac_rows), len(frac_rows[0])), dtype=object)
    for i, row in enumerate(frac_rows):
        for j, x in enumerate(row):
            num[i, j] = int(Fraction(x) * den)
    return num, den


def _gcd2(a, b):
    while b:
        a, b = b, a % b
    return abs(a)


class Order:
    """Full-rank subring of a rational Clifford algebra, finitely generated over Z."""

    def __init__(self, alg, rows, validate=False):
        self.alg = alg
        den, h = hnf_with_denominator(rows)
        if len(h) != alg.rank:
            raise ValueError("order basis must have full rank %d" % alg.rank)
        self.den = den
        self.hnf_rows = h
        self.basis = [[Fraction(x, den) for x in row] for row in h]
        self._struct = None
        self._trace_matrix = None
        self._disc = None
        if not self.contains(alg.one()):
            raise ValueError("1 is not in the order")
        if validate:
            problem = self.validate()
            if problem:
                raise ValueError(problem)

    # -- basic structure ---------------------------------------------------

    def key(self):
        return (self.den,) + tuple(tuple(r) for r in self.hnf_rows)

    def __eq__(self, other):
        return isinstance(other, Order) and self.alg == other.alg and self.key() == other.key()

    def __hash__(self):
        return hash((self.alg, self.key()))

    def basis_elements(self):
        return [self.alg.element({m: c for m, c in enumerate(row) if c}) for row in self.basis]

    def element_row(self, x):
        return [x.coefficient(m) for m in range(self.alg.rank)]

    def contains(self, x):
        return lattice_contains(self.den, self.hnf_rows, self.element_row(x))

    def coords(self, x):
        """Coordinates of x over the order basis (rational; integral iff x in O)."""
        cols = self.alg.rank
        mat = [[self.basis[i][j] for i in range(cols)] for j in range(cols)]
        return solve(mat, self.element_row(x))

    def index_in(self, bigger):
        q = covolume(self) / covolume(bigger)
        if q.denominator != 1:
            raise ValueError("not contained with finite index")
        return q.numerator

    # -- multiplicative structure -------------------------------------------

    def int_rows(self):
        """numpy object matrix of the HNF basis rows (scaled by self.den)."""
        n = self.alg.rank
        B = np.zeros((n, n), dtype=object)
        for i, row in enumerate(self.hnf_rows):
            for j, x in enumerate(row):
                B[i, j] = int(x)
        return B

    def structure(self):
        """(C, T): integer structure tensor b_i b_j = sum_k C[i,j,k] b_k and
        regular trace matrix T[i,j] = tr(b_i b_j)."""
        if self._struct is not None:
            return self._struct, self._trace_matrix
        n = self.alg.rank
        E = _object_tensor(self.alg.structure_tensor())
        B = self.int_rows()
        P = np.einsum("is,jt,stk->ijk", B, B, E)  # scaled by den^2
        # order coordinates: solve c . B = P/den, exactly, via the inverse
        binv = mat_inv([[Fraction(int(B[i][j])) for j in range(n)] for i in range(n)])
        num, den_inv = _int_matrix(binv)
        flat = P.reshape(n * n, n) @ num  # scaled by den^2 * den_inv
        scale = self.den * den_inv
        C = np.zeros((n, n, n), dtype=object)
        for i in range(n):
            for j in range(n):
                for k in range(n):
                    q, r = divmod(int(flat[i * n + j, k]), scale)
                    if r:
                        raise ValueError("basis is not multiplicatively closed")
                    C[i, j, k] = q
        T = np.zeros((n, n), dtype=object)
        d2 = self.den * self.den
        for i in range(n):
            for j in range(n):
                q, r = divmod(n * int(P[i, j, 0]), d2)
                if r:
                    raise RuntimeError("trace pairing must be integral")
                T[i, j] = q
        self._struct = C
        self._trace_matrix = T
        return C, T

    def validate(self):
        """None if this is an order; otherwise a human-readable defect."""
        try:
            C, _ = self.structure()
        except ValueError as e:
            return str(e)
        for b in self.basis_elements():
            if not integral_charpoly(self.alg, b):
                return "basis element %r is not integral" % (b,)
        return None

    def lattice(self):
        """The order as an integral lattice for the scaled Euclidean form."""
        n = self.alg.rank
        metric = [[Fraction(0)] * n for _ in range(n)]
        for m in range(n):
            metric[m][m] = self.alg.vector_weight(m)
        return Lattice(self.basis, metric)

    def __repr__(self):
        return "Order(%r, den=%d)" % (self.alg, self.den)


def covolume(order):
    d = Fraction(1)
    for row in order.hnf_rows:
        lead = next(x for x in row if x)
        d *= Fraction(lead, order.den)
    return d


def integral_charpoly(alg, x):
    """Whether x has integral characteristic polynomial for left multiplication.

    The minimal polynomial decides: charpoly and minpoly share their
    irreducible factors, and integrality passes between them by Gauss's lemma.
    """
    poly = minimal_polynomial(alg, x)
    return all(c.denominator == 1 for c in poly)


def minimal_polynomial(alg, x):
    """Coefficients [c_0, ..., c_(d-1), 1] of the monic minimal polynomial."""
    n = alg.rank
    red = _IncrementalRREF(n)
    power = alg.one()
    red.add([power.coefficient(m) for m in range(n)])
    d = 0
    while True:
        power = power * x
        d += 1
        combo = red.reduce([power.coefficient(m) for m in range(n)])
        if combo is not None:
            # x^d = sum combo_k x^k  ->  t^d - sum combo_k t^k
            return [-c for c in combo] + [Fraction(1)]
        if d > n:
            raise RuntimeError("no minimal polynomial found")


class _IncrementalRREF:
    """Row space with combination tracking; reduce() returns coefficients."""

    def __init__(self, width):
        self.width = width
        self.rows = []
        self.combos = []
        self.pivots = []
        self.count = 0

    def _eliminate(self, vec, combo):
        for (piv, row), crow in zip(zip(self.pivots, self.rows), self.combos):
            c = vec[piv]
            if c:
                vec = [a - c * b for a, b in zip(vec, row)]
                combo = [a - c * b for a, b in zip(combo, crow)]
        return vec, combo

    def reduce(self, vec):
        """Combination over existing rows if dependent, else None (and add)."""
        vec = [Fraction(v) for v in vec]
        combo = [Fraction(0)] * self.count + [Fraction(1)]
        for crow in self.combos:
            crow.append(Fraction(0))
        vec, combo = self._eliminate(vec, combo)
        lead = next((i for i, v in enumerate(vec) if v), None)
        if lead is None:
            self.count += 1
            out = [-c for c in combo[:-1]]
            return out
        inv = Fraction(1) / vec[lead]
        vec = [v * inv for v in vec]
        combo = [c * inv for c in combo]
        # keep full reduced echelon form so one elimination pass stays exact
        for idx in range(len(self.rows)):
            c = self.rows[idx][lead]
            if c:
                self.rows[idx] = [a - c * b for a, b in zip(self.rows[idx], vec)]
                self.combos[idx] = [a - c * b for a, b in zip(self.combos[idx], combo)]
        self.rows.append(vec)
        self.combos.append(combo)
        self.pivots.append(lead)
        self.count += 1
        return None

    def add(self, vec):
        assert self.reduce(vec) is None


def order_from_generators(alg, generators, max_rounds=None, den_cap=None):
    """Ring closure of Z[1, generators]; None plus a witness if not an order.

    Returns (order, None) on success or (None, witness_element) on failure.
    """
    rows = [[Fraction(int(m == 0)) for m in range(alg.rank)]]
    for g in generators:
        rows.append([g.coefficient(m) for m in range(alg.rank)])
        for h in generators:
            prod = g * h
            rows.append([prod.coefficient(m) for m in range(alg.rank)])
    return _saturate(alg, rows, max_rounds=max_rounds, den_cap=den_cap)


def _pair_products(alg, h, den):
    """Products of all basis pairs as integer algebra rows scaled by den^2."""
    E = alg.structure_tensor()
    B = np.array(h, dtype=object)
    if all(abs(int(x)) < (1 << 20) for row in h for x in row):
        B64 = np.array(h, dtype=np.int64)
        P = np.einsum("is,jt,stk->ijk", B64, B64, E)
        return P.astype(object)
    return np.einsum("is,jt,stk->ijk", B, B, E.astype(object))


def _row_in_lattice(row, den_row, den, h, pivots):
    """Whether row/den_row lies in the lattice spanned by h/den (h in HNF)."""
    v = [x * den for x in row]
    if any(x % den_row for x in v):
        return False
    v = [x // den_row for x in v]
    for lead, hr in pivots:
        if v[lead] % hr[lead]:
            return False
        q = v[lead] // hr[lead]
        if q:
            for j in range(lead, len(v)):
                v[j] -= q * hr[j]
    return not any(v)


def _saturate(alg, rows, max_rounds=None, den_cap=None, dual=None):
    """Close a module under multiplication; (Order, None) or (None, witness).

    Works on integer rows with one running denominator throughout.
    """
    n = alg.rank
    if max_rounds is None:
        max_rounds = 2 * n
    den, h = hnf_with_denominator([list(r) for r in rows])
    if dual is not None:
        dual_den, dual_rows = dual
        dual_pivots = _pivots_of(dual_rows, n)
    prev_key = None
    for _ in range(max_rounds):
        g = den
        for row in h:
            for x in row:
                if x:
                    g = _gcd2(g, x)
                    if g == 1:
                        break
            if g == 1:
                break
        if g > 1:
            den //= g
            h = [[x // g for x in row] for row in h]
        if den_cap is not None and den > den_cap:
            return None, _first_nonintegral(alg, h, den)
        if dual is not None:
            for row in h:
                # row/den in dual  <=>  row * dual_den / den in span(dual_rows)
                if not _row_in_lattice(list(row), den, dual_den, dual_rows, dual_pivots):
                    return None, alg.element(
                        {m: Fraction(c, den) for m, c in enumerate(row) if c}
                    )
        key = (den,) + tuple(tuple(r) for r in h)
        if key == prev_key:
            return None, None
        prev_key = key
        if len(h) == n:
            P = _pair_products(alg, h, den)
            pivots = _pivots_of(h, n)
            extra = []
            d2 = den * den
            for i in range(n):
                for j in range(i, n):
                    row = [int(x) for x in P[i, j]]
                    if not _row_in_lattice(row, d2, den, h, pivots):
                        extra.append(row)
                    if i != j:
                        row = [int(x) for x in P[j, i]]
                        if not _row_in_lattice(row, d2, den, h, pivots):
                            extra.append(row)
            if not extra:
                order = Order(alg, [[Fraction(x, den) for x in row] for row in h])
                bad = next(
                    (b for b in order.basis_elements() if not integral_charpoly(alg, b)),
                    None,
                )
                if bad is not None:
                    return None, bad
                return order, None
            stacked = [[x * den for x in row] for row in h] + extra
            h = hnf(stacked)
            den = d2
        else:
            # not yet full rank: pad with pairwise products
            P = _pair_products(alg, h, den)
            stacked = [[x * den for x in row] for row in h]
            k = len(h)
            for i in range(k):
                for j in range(k):
                    stacked.append([int(x) for x in P[i, j]])
            h = hnf(stacked)
            den = den * den
    return None, None


def _pivots_of(h, n):
    pivots = []
    for hr in h:
        lead = next(j for j in range(n) if hr[j])
        pivots.append((lead, hr))
    return pivots


def _first_nonintegral(alg, h, den):
    for row in h:
        b = alg.element({m: Fraction(c, den) for m, c in enumerate(row) if c})
        if not integral_charpoly(alg, b):
            return b
    return None


def trace_dual(order):
    """(den, hnf rows) of the trace-dual lattice {x : tr(x O) in Z}."""
    _, T = order.structure()
    n = order.alg.rank
    tinv = mat_inv([[Fraction(int(T[i, j])) for j in range(n)] for i in range(n)])
    rows = mat_mul(tinv, order.basis)
    return hnf_with_denominator(rows)


def clifford_order(alg):
    """Z[gamma_1, ..., gamma_m]: the subset basis with integer coefficients."""
    n = alg.rank
    rows = [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    return Order(alg, rows)


# -- discriminants -----------------------------------------------------------


class Discriminant:
    def __init__(self, value, factorization):
        self.value = value
        self.factorization = factorization

    def __repr__(self):
        return "Discriminant(%d)" % self.value

    def __eq__(self, other):
        if isinstance(other, Discriminant):
            return self.value == other.value
        return self.value == other


def factorize(n):
    n = abs(n)
    out = {}
    d = 2
    while d * d <= n:
        while n % d == 0:
            out[d] = out.get(d, 0) + 1
            n //= d
        d += 1 if d == 2 else 2
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def discriminant(order):
    if order._disc is not None:
        return order._disc
    _, T = order.structure()
    n = order.alg.rank
    val = mat_det([[Fraction(int(T[i, j])) for j in range(n)] for i in range(n)])
    if val.denominator != 1:
        raise RuntimeError("discriminant must be an integer")
    d = Discriminant(val.numerator, factorize(val.numerator))
    order._disc = d
    return d


# -- p-maximal and maximal orders --------------------------------------------


def _candidate_lines(order, p):
    """Coset representatives v of (1/p)O/O that could enlarge O to an order.

    Sound filter: any x = v/p lying in an over-order has tr(v y) = 0 mod p for
    all y in O and v nilpotent in O/pO.
    """
    C, T = order.structure()
    n = order.alg.rank
    Tp = np.array([[int(T[i, j]) % p for j in range(n)] for i in range(n)], dtype=np.int64)
    kernel = _fp_kernel(Tp, p)
    if kernel is None or len(kernel) == n:
        space_dim = n
        basis_vs = np.eye(n, dtype=np.int64)
    else:
        space_dim = len(kernel)
        if space_dim == 0:
            return np.zeros((0, n), dtype=np.int64)
        basis_vs = np.array(kernel, dtype=np.int64)
    count = p**space_dim
    if count > LINE_ENUM_CAP:
        raise ValueError(
            "candidate space too large at p=%d (dimension %d)" % (p, space_dim)
        )
    # all nonzero vectors of the candidate space, one per projective line
    if p == 2:
        idx = np.arange(1, count, dtype=np.uint32)
        digits = ((idx[:, None] >> np.arange(space_dim)[None, :]) & 1).astype(np.int64)
        reps = digits
    else:
        reps = []
        for idx in range(1, count):
            digits = []
            t = idx
            for _ in range(space_dim):
                digits.append(t % p)
                t //= p
            lead = next(d for d in digits if d)
            if lead != 1:
                continue
            reps.append(digits)
        if not reps:
            return np.zeros((0, n), dtype=np.int64)
        reps = np.array(reps, dtype=np.int64)
    V = (reps @ basis_vs) % p
    # keep only elements that are nilpotent mod p (repeated element squaring)
    dtype = np.int16 if p == 2 and n <= 64 else np.int64
    Cnum = np.zeros((n, n, n), dtype=dtype)
    for i in range(n):
        for j in range(n):
            for k in range(n):
                c = int(C[i, j, k]) % p
                if c:
                    Cnum[i, j, k] = c
    W = V.astype(dtype)
    steps = 1
    while (1 << steps) < n:
        steps += 1
    for _ in range(steps):
        W = np.einsum("ci,cj,ijk->ck", W, W, Cnum) % p
    kept = V[~W.any(axis=1)]
    return kept if len(kept) else np.zeros((0, n), dtype=np.int64)


def _fp_kernel(mat, p):
    """Kernel basis of a symmetric integer matrix mod p; None means full space."""
    m = mat.copy() % p
    n = m.shape[0]
    if not m.any():
        return None
    pivots = []
    row = 0
    cols = n
    work = m.astype(np.int64)
    where = []
    for col in range(cols):
        piv = None
        for r in range(row, n):
            if work[r][col] % p:
                piv = r
                break
        if piv is None:
            continue
        work[[row, piv]] = work[[piv, row]]
        inv = pow(int(work[row][col]), -1, p)
        work[row] = (work[row] * inv) % p
        for r in range(n):
            if r != row and work[r][col] % p:
                work[r] = (work[r] - work[r][col] * work[row]) % p
        where.append(col)
        row += 1
    free = [c for c in range(cols) if c not in where]
    basis = []
    for fc in free:
        v = [0] * cols
        v[fc] = 1
        for r, pc in enumerate(where):
            v[pc] = (-int(work[r][fc])) % p
        basis.append(v)
    return basis


def _integrality_prefilter(order, V, p):
    """Vectorized necessary conditions tr(b_j v^k) = 0 mod p^k for x = v/p.

    Powers of v are tracked mod p^e with e chosen so products fit in int64.
    """
    C, T = order.structure()
    n = order.alg.rank
    if len(V) == 0:
        return V
    # keep 2*exp + 18 bits of product room inside int64
    exp = int(18 / _log2(p))
    modulus = p**exp
    Cnum = np.zeros((n, n, n), dtype=np.int64)
    for i in range(n):
        for j in range(n):
            for k in range(n):
                c = int(C[i, j, k])
                if c:
                    Cnum[i, j, k] = c % modulus
    Tnum = np.array(
        [[int(T[i, j]) % modulus for j in range(n)] for i in range(n)], dtype=np.int64
    )
    alive = np.ones(len(V), dtype=bool)
    W = V.astype(np.int64) % modulus
    powers = {1: W}
    power = 1

    def check(mat, k):
        need = p ** min(k, exp)
        traces = (mat @ Tnum.T) % need
        return ~traces.any(axis=1)

    while power < n:
        W = np.einsum("ci,cj,ijk->ck", W, W, Cnum) % modulus
        power *= 2
        powers[power] = W
        alive &= check(W, power)
        W = W.copy()
        W[~alive] = 0
    # a couple of mixed exponents catch stragglers cheaply
    for a, b in ((8, 4), (16, 8)):
        if a in powers and b in powers:
            M = np.einsum("ci,cj,ijk->ck", powers[a], powers[b], Cnum) % modulus
            alive &= check(M, a + b)
    kept = V[alive]
    return kept if len(kept) else np.zeros((0, n), dtype=np.int64)


def _log2(p):
    import math

    return math.log2(p)


def _enlargements(order, p, den_cap=None, dual=None):
    """All distinct orders obtained by adjoining v/p for one candidate line v."""
    alg = order.alg
    n = alg.rank
    V = _candidate_lines(order, p)
    V = _integrality_prefilter(order, V, p)
    if den_cap is None:
        vp = discriminant(order).factorization.get(p, 0)
        den_cap = order.den * p ** (vp // 2 + 1)
    # the closure of O + Z(v/p) only depends on the O-bimodule generated by
    # v/p modulo O, i.e. on the mod-p span of v, v b_j, b_j v; dedupe on that
    C, _ = order.structure()
    Cnum = np.zeros((n, n, n), dtype=np.int64)
    for i in range(n):
        for j in range(n):
            for k in range(n):
                c = int(C[i, j, k]) % p
                if c:
                    Cnum[i, j, k] = c
    V64 = V.astype(np.int64)
    xb = np.einsum("ci,ijk->cjk", V64, Cnum) % p
    bx = np.einsum("ci,jik->cjk", V64, Cnum) % p
    reps = {}
    if p == 2:
        weights = (1 << np.arange(n)).astype(np.int64)
        vw = V64 @ weights
        xw = (xb % 2) @ weights
        bw = (bx % 2) @ weights
        for t in range(len(V)):
            words = [int(vw[t])] + [int(w) for w in xw[t]] + [int(w) for w in bw[t]]
            key = _bit_rowspace_key(words)
            if key not in reps:
                reps[key] = V[t]
    else:
        for t in range(len(V)):
            rows = np.vstack([V64[t : t + 1], xb[t], bx[t]]) % p
            key = _fp_rowspace_key(rows, p)
            if key not in reps:
                reps[key] = V[t]
    rep_list = list(reps.values())
    if rep_list:
        # the closure contains x b_j and b_j x, which must also pass the
        # integrality trace conditions; batch-test them to kill bad keys
        rep_arr = np.array(rep_list, dtype=np.int64)
        xb_r = np.einsum("ci,ijk->cjk", rep_arr, Cnum % p)
        bx_r = np.einsum("ci,jik->cjk", rep_arr, Cnum % p)
        good = []
        for t, v in enumerate(rep_list):
            probes = np.vstack([rep_arr[t : t + 1], xb_r[t] % p, bx_r[t] % p])
            probes = probes[[bool(r.any()) for r in probes]]
            kept = _integrality_prefilter(order, probes, p)
            if len(kept) == len(probes):
                good.append(v)
        rep_list = good
    seen = set()
    out = []
    basis_rows = [list(r) for r in order.basis]
    basis_elts = order.basis_elements()
    for v in rep_list:
        x = alg.zero()
        for i, c in enumerate(v):
            if c:
                x = x + basis_elts[i] * int(c)
        x = x * Fraction(1, p)
        if not integral_charpoly(alg, x):
            continue
        rows = basis_rows + [[x.coefficient(m) for m in range(n)]]
        cand, _ = _saturate(alg, rows, den_cap=den_cap, dual=dual)
        if cand is None:
            continue
        key = cand.key()
        if key not in seen:
            seen.add(key)
            out.append(cand)
    return out


def _bit_rowspace_key(words):
    basis = []
    for w in words:
        for b in basis:
            if w & (b & -b):
                w ^= b
        if w:
            low = w & -w
            basis = [b ^ w if (b & low) else b for b in basis]
            basis.append(w)
    return tuple(sorted(basis))


def _fp_rowspace_key(rows, p):
    """Canonical key of the F_p row space (bit-packed RREF for p = 2)."""
    if p == 2:
        packed = []
        for r in rows:
            word = 0
            for i, x in enumerate(r):
                if x % 2:
                    word |= 1 << i
            if word:
                packed.append(word)
        basis = []
        for w in packed:
            for b in basis:
                low = b & (-b)
                if w & low:
                    w ^= b
            if w:
                basis.append(w)
                # keep rows reduced against the new pivot
                low = w & (-w)
                basis = [b ^ w if (b != w and (b & low)) else b for b in basis]
        return tuple(sorted(basis))
    work = [list(int(x) % p for x in r) for r in rows]
    m = _fp_rref(work, p)
    return tuple(tuple(r) for r in m)


def _fp_rref(rows, p):
    work = [r for r in rows if any(r)]
    out = []
    width = len(rows[0]) if rows else 0
    for col in range(width):
        piv = next((r for r in work if r[col] % p), None)
        if piv is None:
            continue
        inv = pow(piv[col], -1, p)
        piv = [(x * inv) % p for x in piv]
        work = [
            [(a - r[col] * b) % p for a, b in zip(r, piv)] if r[col] % p else r
            for r in work
            if r is not piv
        ]
        out = [
            [(a - r[col] * b) % p for a, b in zip(r, piv)] if r[col] % p else r
            for r in out
        ]
        out.append(piv)
        work = [r for r in work if any(x % p for x in r)]
    return out


def p_maximal_orders(order, p, threads=None):
    """All p-maximal orders containing the given order (queue of enlargements).

    The queue may be processed by a worker pool; results are deduplicated by
    their HNF keys, so the outcome does not depend on processing order.
    """
    vp_root = discriminant(order).factorization.get(p, 0)
    den_cap = order.den * p ** (vp_root // 2 + 1)
    dual = trace_dual(order)
    root_covol = covolume(order)
    alg = order.alg
    queue = [order]
    queued = {order.key()}
    results = {}

    def is_deep_enough(current):
        index = root_covol / covolume(current)
        return vp_root - 2 * _p_valuation(index.numerator, p) >= 2

    if threads and threads > 1:
        import multiprocessing as mp

        coeffs = [str(d) for d in alg.form.coefficients]
        dual_ser = (dual[0], [list(map(int, r)) for r in dual[1]])
        with mp.Pool(threads, maxtasksperchild=64) as pool:
            while queue:
                wave, rest = [], []
                for current in queue:
                    (wave if is_deep_enough(current) else rest).append(current)
                for current in rest:
                    results[current.key()] = current
                if not wave:
                    break
                args = [
                    (coeffs, o.den, [list(map(int, r)) for r in o.hnf_rows], p,
                     den_cap, dual_ser)
                    for o in wave
                ]
                queue = []
                for current, found in zip(wave, pool.map(_sweep_job, args)):
                    if not found:
                        results[current.key()] = current
                        continue
                    for den, rows in found:
                        o = Order(alg, [[Fraction(x, den) for x in row] for row in rows])
                        if o.key() not in queued:
                            queued.add(o.key())
                            queue.append(o)
        return list(results.values())

    while queue:
        current = queue.pop()
        if not is_deep_enough(current):
            results[current.key()] = current
            continue
        bigger = _enlargements(current, p, den_cap=den_cap, dual=dual)
        if not bigger:
            results[current.key()] = current
            continue
        for o in bigger:
            if o.key() not in queued:
                queued.add(o.key())
                queue.append(o)
    return list(results.values())


def _sweep_job(args):
    from .algebra import CliffordAlgebra

    coeffs, den, rows, p, den_cap, dual = args
    alg = CliffordAlgebra([Fraction(c) for c in coeffs])
    order = Order(alg, [[Fraction(x, den) for x in row] for row in rows])
    found = _enlargements(order, p, den_cap=den_cap, dual=dual)
    return [(o.den, [list(map(int, r)) for r in o.hnf_rows]) for o in found]


def _p_valuation(n, p):
    v = 0
    n = abs(n)
    while n and n % p == 0:
        n //= p
        v += 1
    return v


def maximal_orders(order, threads=None):
    """All maximal orders containing the given order."""
    disc = discriminant(order)
    primes = sorted(pp for pp, e in disc.factorization.items() if e >= 2)
    if not primes:
        return [order]
    families = [p_maximal_orders(order, p, threads=threads) for p in primes]
    out = {}
    for combo in _cartesian(families):
        rows = []
        for o in combo:
            rows.extend(o.basis)
        den, h = hnf_with_denominator(rows)
        merged = Order(order.alg, [[Fraction(x, den) for x in row] for row in h])
        problem = merged.validate()
        if problem:
            raise RuntimeError("sum of p-maximal orders failed: %s" % problem)
        out[merged.key()] = merged
    return list(out.values())


def _cartesian(families):
    if not families:
        yield ()
        return
    head, *tail = families
    for h in head:
        for rest in _cartesian(tail):
            yield (h,) + rest


def is_maximal(order):
    disc = discriminant(order)
    for p, e in disc.factorization.items():
        if e >= 2 and _enlargements(order, p):
            return False
    return True


# -- involutions and conjugation ---------------------------------------------


def involution_image(order, kind):
    rows = [[x for x in order.element_row(b.involution(kind))] for b in order.basis_elements()]
    return Order(order.alg, rows)


def is_star_stable(order):
    return involution_image(order, "transpose") == order


def is_clifford_stable(order):
    return (
        involution_image(order, "transpose") == order
        and involution_image(order, "conjugate") == order
    )


def clifford_conjugate(order, v, inverse_on_left=True):
    """v^-1 O v (or v O v^-1 with inverse_on_left=False) as an order."""
    if not v.is_monoid():
        raise ValueError("conjugating element must be in the Clifford monoid")
    vinv = v.invert()
    left, right = (vinv, v) if inverse_on_left else (v, vinv)
    rows = [order.element_row(left * b * right) for b in order.basis_elements()]
    return Order(order.alg, rows)


# -- Clifford vectors and codes ------------------------------------------------


def vectors_of(order):
    """Vec(O) = O intersected with the paravectors, as a rank-(m+1) lattice."""
    alg = order.alg
    n = alg.rank
    vec_masks = [0] + [1 << i for i in range(alg.arity)]
    other = [m for m in range(n) if m not in vec_masks]
    int_rows = order.hnf_rows
    if other:
        restricted = [[row[m] for m in other] for row in int_rows]
        kernel = integer_kernel(restricted)
    else:
        kernel = [[int(i == j) for j in range(len(int_rows))] for i in range(len(int_rows))]
    rows = []
    for combo in kernel:
        full = [
            Fraction(sum(combo[i] * int_rows[i][m] for i in range(len(int_rows))), order.den)
            for m in range(n)
        ]
        rows.append([full[m] for m in vec_masks])
    metric = [[Fraction(0)] * len(vec_masks) for _ in vec_masks]
    metric[0][0] = Fraction(1)
    for i in range(alg.arity):
        metric[i + 1][i + 1] = alg.form.coefficients[i]
    return Lattice(rows, metric)


def code_of(order):
    """The doubly even binary code C with Vec(O) = (1/2) Lambda_C."""
    from .codes import BinaryCode

    alg = order.alg
    for d in alg.form.coefficients:
        if d != 1:
            raise ValueError("codes require the all-(-1) form")
    for i in range(1, alg.arity + 1):
        if not order.contains(alg.gamma(i)):
            raise ValueError("order does not contain all generators")
    vec = vectors_of(order)
    nn = alg.arity + 1
    den, h = hnf_with_denominator(vec.basis)
    if den not in (1, 2):
        raise ValueError("Vec(O) is not between the cubic lattice and its half")
    words = []
    if den == 2:
        for row in h:
            word = tuple(x % 2 for x in row)
            if any(word):
                words.append(word)
    return BinaryCode(nn, words)
