"""Clifford-Euclidean division, one-sided gcds with certificates, unimodularity,
and lifting unimodular pairs to SL2 rows.

Right division approximates x^-1 y by a lattice paravector: y = x q + r.
Left-handed variants are derived through the * involution, never reimplemented.
"""

from fractions import Fraction

from .lattices import closest_vector
from .linalg import hnf_with_denominator, lattice_key
from .orders import vectors_of


class EuclideanFailure:
    """A division or gcd attempt that could not reduce the norm; kept as data."""

    def __init__(self, pair, norms, best_remainder=None, reason=""):
        self.pair = pair
        self.norms = norms
        self.best_remainder = best_remainder
        self.reason = reason

    def __repr__(self):
        return "EuclideanFailure(%s)" % (self.reason,)


class DivisionResult:
    def __init__(self, quotient, remainder):
        self.quotient = quotient
        self.remainder = remainder

    def __iter__(self):
        return iter((self.quotient, self.remainder))


class GcdCertificate:
    def __init__(self, gcd, c, d, quotients):
        self.gcd = gcd
        self.coeffs = (c, d)
        self.quotients = quotients


def _scalar_nrd(x):
    nr = x.nrd()
    if not nr.is_scalar():
        raise ValueError("norm is not scalar; element outside the monoid")
    return nr.scalar_part()


def divide_right(y, x, order):
    """q, r with y = x q + r, q a paravector of the order, nrd(r) < nrd(x).

    Returns DivisionResult or EuclideanFailure when no norm-reducing
    remainder exists (covering radius >= 1 situations).
    """
    nx = _scalar_nrd(x)
    if nx <= 0:
        raise ValueError("divisor must have positive norm")
    ratio = x.invert() * y
    if not ratio.is_vector():
        raise ValueError("x^-1 y is not a paravector")
    vec = vectors_of(order)
    target = ratio.vec_coords()
    point, dist_sq = closest_vector(vec, target)
    q = order.alg.from_vec_coords(point)
    r = y - x * q
    if _scalar_nrd(r) >= nx:
        return EuclideanFailure(
            (y, x), (_scalar_nrd(y), nx), best_remainder=r,
            reason="no remainder of smaller norm; covering radius >= 1 here",
        )
    return DivisionResult(q, r)


def divide_left(y, x, order):
    """q, r with y = q x + r, via the transport quo_L(y,x)* = quo_R(y*,x*)."""
    res = divide_right(y.transpose(), x.transpose(), order)
    if isinstance(res, EuclideanFailure):
        return res
    q, r = res
    return DivisionResult(q.transpose(), r.transpose())


def gcd_left(a, b, order):
    """g with O a + O b = O g, by left-division remainder chains."""
    cert = gcd_coeffs_left(a, b, order)
    if isinstance(cert, EuclideanFailure):
        return cert
    return cert.gcd


def gcd_coeffs_left(a, b, order):
    """Certificate (g, c, d) with c a + d b = g and O a + O b = O g.

    Tracks r_j = u_j a + w_j b along r_(j-2) = q_j r_(j-1) + r_j; the closing
    pair (u_n, w_n) is the certificate (same recurrence as c/d elimination).
    """
    one, zero = order.alg.one(), order.alg.zero()
    r_prev, r_cur = a, b
    uw_prev, uw_cur = (one, zero), (zero, one)
    quotients = []
    guard = 0
    while r_cur:
        res = divide_left(r_prev, r_cur, order)
        if isinstance(res, EuclideanFailure):
            return res
        q, r = res
        quotients.append(q)
        nxt = (uw_prev[0] - q * uw_cur[0], uw_prev[1] - q * uw_cur[1])
        r_prev, r_cur = r_cur, r
        uw_prev, uw_cur = uw_cur, nxt
        guard += 1
        if guard > 10000:
            return EuclideanFailure((a, b), None, reason="norms failed to reach zero")
    g = r_prev
    c, d = uw_prev
    if c * a + d * b != g:
        raise RuntimeError("gcd certificate failed to reconstruct")
    return GcdCertificate(g, c, d, quotients)


def gcd_right(a, b, order):
    res = gcd_coeffs_right(a, b, order)
    if isinstance(res, EuclideanFailure):
        return res
    return res.gcd


def gcd_coeffs_right(a, b, order):
    """Certificate with a c + b d = g and a O + b O = g O (via * transport)."""
    res = gcd_coeffs_left(a.transpose(), b.transpose(), order)
    if isinstance(res, EuclideanFailure):
        return res
    c, d = res.coeffs
    return GcdCertificate(res.gcd.transpose(), c.transpose(), d.transpose(), res.quotients)


def right_ideal_rows(order, elements):
    """Z-generators of sum(e O) as rows over the algebra basis."""
    rows = []
    for e in elements:
        for b in order.basis_elements():
            prod = e * b
            rows.append([prod.coefficient(m) for m in range(order.alg.rank)])
    return rows


def right_ideal_is_full(order, elements):
    """Whether sum(e O) = O."""
    rows = right_ideal_rows(order, elements)
    return lattice_key(rows) == lattice_key(order.basis)


def right_ideal_index(order, elements):
    """Index [O : sum(e O)] as an integer (0 if not full rank)."""
    from .linalg import lattice_index

    rows = right_ideal_rows(order, elements)
    den, h = hnf_with_denominator(rows)
    if len(h) < order.alg.rank:
        return 0
    return abs(
        lattice_index(order.den, order.hnf_rows, den, h)
    )


def is_unimodular(mu, nu, order):
    """Whether (mu, nu) is a right-unimodular pair (a bottom SL2 row)."""
    alg = order.alg
    if not mu:
        return nu.is_unit() if nu.is_monoid() else False
    if not nu:
        return mu.is_unit() if mu.is_monoid() else False
    if not (mu.is_monoid() and nu.is_monoid()):
        return False
    ratio = mu.invert() * nu
    if not ratio.is_vector():
        return False
    cert = gcd_coeffs_right(mu, nu, order)
    if not isinstance(cert, EuclideanFailure):
        g = cert.gcd
        return g.is_monoid() and g.nrd() == alg.one()
    return right_ideal_is_full(order, [mu, nu])


def lift_to_sl2(mu, nu, order):
    """An SL2 matrix with bottom row (mu, nu), built from gcd coefficients."""
    from .mobius import SL2Element, sl2_check

    alg = order.alg
    one, zero = alg.one(), alg.zero()
    if not mu:
        if not nu.is_unit():
            raise ValueError("pair (0, nu) lifts only for unit nu")
        return SL2Element(nu.transpose().invert(), zero, zero, nu)
    if not nu:
        if not mu.is_unit():
            raise ValueError("pair (mu, 0) lifts only for unit mu")
        return SL2Element(zero, -(mu.transpose().invert()), mu, zero)
    cert = gcd_coeffs_right(mu, nu, order)
    if isinstance(cert, EuclideanFailure):
        raise ValueError("no Euclidean lift: %s" % cert.reason)
    g = cert.gcd
    if not (g.is_monoid() and g.nrd() == alg.one()):
        raise ValueError("pair is not unimodular: gcd has norm %s" % g.nrd())
    ginv = g.invert()
    c, d = cert.coeffs
    c, d = c * ginv, d * ginv  # now mu c + nu d = 1
    # want a nu* - b mu* = 1: transpose gives c* mu* + d* nu* = 1
    a = d.transpose()
    b = -(c.transpose())
    cand = SL2Element(a, b, mu, nu)
    ok, why = sl2_check(cand.matrix(), order=order)
    if not ok:
        raise ValueError("lift failed the membership test: %s" % why)
    return cand
