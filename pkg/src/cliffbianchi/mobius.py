"""SL2 over Clifford algebras and the Mobius action on hyperbolic space.

Points carry an exact boundary paravector and an exact squared height, so no
square root is ever materialized.  Infinity is a distinguished value.
"""

from fractions import Fraction

from .algebra import CliffordElement


class SL2Element:
    """A 2x2 Clifford matrix, normally satisfying the SL2 membership conditions."""

    def __init__(self, a, b, c, d):
        self.a, self.b, self.c, self.d = a, b, c, d
        self.alg = a.alg

    def matrix(self):
        return [[self.a, self.b], [self.c, self.d]]

    def pseudodeterminant(self):
        return self.a * self.d.transpose() - self.b * self.c.transpose()

    def inverse(self):
        return SL2Element(
            self.d.transpose(),
            -self.b.transpose(),
            -self.c.transpose(),
            self.a.transpose(),
        )

    def adjoint(self):
        """Conjugate transpose (dagger)."""
        return SL2Element(
            self.a.conjugate(),
            self.c.conjugate(),
            self.b.conjugate(),
            self.d.conjugate(),
        )

    def __mul__(self, other):
        return SL2Element(
            self.a * other.a + self.b * other.c,
            self.a * other.b + self.b * other.d,
            self.c * other.a + self.d * other.c,
            self.c * other.b + self.d * other.d,
        )

    def __neg__(self):
        return SL2Element(-self.a, -self.b, -self.c, -self.d)

    def __eq__(self, other):
        return (
            isinstance(other, SL2Element)
            and (self.a, self.b, self.c, self.d) == (other.a, other.b, other.c, other.d)
        )

    def __hash__(self):
        return hash((self.a, self.b, self.c, self.d))

    def is_identity(self):
        one, zero = self.alg.one(), self.alg.zero()
        return (self.a, self.b, self.c, self.d) == (one, zero, zero, one)

    def is_plus_minus_identity(self):
        if self.is_identity():
            return True
        one, zero = self.alg.one(), self.alg.zero()
        return (self.a, self.b, self.c, self.d) == (-one, zero, zero, -one)

    def __repr__(self):
        return "[[%r, %r], [%r, %r]]" % (self.a, self.b, self.c, self.d)


def identity_sl2(alg):
    return SL2Element(alg.one(), alg.zero(), alg.zero(), alg.one())


def translation(v):
    alg = v.alg
    return SL2Element(alg.one(), v, alg.zero(), alg.one())


def inversion(alg):
    """S: x -> -x^-1."""
    return SL2Element(alg.zero(), alg.one(), -alg.one(), alg.zero())


def unit_rotation(t):
    """sigma_t = diag(t, (t*)^-1) for a Clifford unit t."""
    alg = t.alg
    return SL2Element(t, alg.zero(), alg.zero(), t.transpose().invert())


def sl2_check(mat, order=None):
    """Full membership test; returns (ok, first failed condition or '')."""
    (a, b), (c, d) = mat
    alg = a.alg
    for name, x in (("a", a), ("b", b), ("c", c), ("d", d)):
        if x and not x.is_monoid():
            return False, "entry %s is not a Clifford monoid element" % name
        if order is not None and not order.contains(x):
            return False, "entry %s is outside the order" % name
    delta = a * d.transpose() - b * c.transpose()
    if delta != alg.one():
        return False, "pseudodeterminant is %r, not 1" % delta
    if not (a * b.transpose()).is_vector():
        return False, "a b* is not a paravector"
    if not (d * c.transpose()).is_vector():
        return False, "d c* is not a paravector"
    # derived conditions; these follow but are rechecked as diagnostics
    if not (c.transpose() * a).is_vector():
        return False, "c* a is not a paravector"
    if not (b.transpose() * d).is_vector():
        return False, "b* d is not a paravector"
    return True, ""


def sl2_from_rows(rows):
    return SL2Element(rows[0][0], rows[0][1], rows[1][0], rows[1][1])


class HPoint:
    """Point of hyperbolic (n+1)-space: boundary paravector plus squared height.

    boundary holds coordinates over (1, gamma_1, ..., gamma_m); height_sq is an
    exact rational; infinity is flagged.
    """

    def __init__(self, alg, boundary=None, height_sq=0, infinity=False):
        self.alg = alg
        self.infinity = infinity
        if infinity:
            self.boundary = None
            self.height_sq = None
        else:
            self.boundary = [Fraction(x) for x in boundary]
            self.height_sq = Fraction(height_sq)
            if self.height_sq < 0:
                raise ValueError("height_sq must be nonnegative")

    @classmethod
    def infinity_point(cls, alg):
        return cls(alg, infinity=True)

    def is_interior(self):
        return (not self.infinity) and self.height_sq > 0

    def boundary_element(self):
        return self.alg.from_vec_coords(self.boundary)

    def __eq__(self, other):
        if not isinstance(other, HPoint):
            return NotImplemented
        if self.infinity or other.infinity:
            return self.infinity == other.infinity
        return self.boundary == other.boundary and self.height_sq == other.height_sq

    def __hash__(self):
        if self.infinity:
            return hash("inf")
        return hash((tuple(self.boundary), self.height_sq))

    def __repr__(self):
        if self.infinity:
            return "HPoint(inf)"
        return "HPoint(%s, h^2=%s)" % ([str(x) for x in self.boundary], self.height_sq)


class HermitianMatrix:
    """[[a, b], [conj(b), c]] with rational a, c and a paravector b."""

    def __init__(self, a, b, c):
        self.a = Fraction(a)
        self.b = b
        self.c = Fraction(c)
        if not b.is_vector():
            raise ValueError("off-diagonal entry must be a paravector")

    def det(self):
        return self.a * self.c - self.b.bigform()

    def is_positive_definite(self):
        return self.a > 0 and self.c > 0 and self.det() > 0

    def scaled(self, k):
        return HermitianMatrix(self.a * k, self.b * Fraction(k), self.c * k)

    def __repr__(self):
        return "HermitianMatrix(%s, %r, %s)" % (self.a, self.b, self.c)


def hermitian_of_point(point, scale=1):
    """The Hermitian matrix of an interior point, times a positive scale."""
    if not point.is_interior():
        raise ValueError("interior points only")
    alg = point.alg
    z = point.boundary_element()
    a = point.height_sq + z.bigform()
    return HermitianMatrix(Fraction(scale) * a, z * Fraction(scale), Fraction(scale))


def point_of_hermitian(A):
    if not A.is_positive_definite():
        raise ValueError("matrix is not positive definite")
    alg = A.b.alg
    z = A.b * (Fraction(1) / A.c)
    h_sq = A.det() / (A.c * A.c)
    return HPoint(alg, z.vec_coords(), h_sq)


def form_value(A, u, v):
    """q_A(u, v) = a|u|^2 + 2 Re(conj(u) b v) + c |v|^2, exactly."""
    cross = (u.conjugate() * A.b * v).scalar_part()
    return A.a * u.bigform() + 2 * cross + A.c * v.bigform()


def conjugate_hermitian(g, A):
    """g . A = g A g-dagger, the action on Hermitian matrices."""
    gd = g.adjoint()
    m00 = g.a * A.a + g.b * A.b.conjugate()
    m01 = g.a * A.b + g.b * A.c
    r_a = m00 * gd.a + m01 * gd.c
    r_b = m00 * gd.b + m01 * gd.d
    m10 = g.c * A.a + g.d * A.b.conjugate()
    m11 = g.c * A.b + g.d * A.c
    r_c = m10 * gd.b + m11 * gd.d
    if not (r_a.is_scalar() and r_c.is_scalar()):
        raise ValueError("conjugation left the Hermitian space; not a member?")
    return HermitianMatrix(r_a.scalar_part(), r_b, r_c.scalar_part())


def mobius_apply(g, point):
    """Exact Mobius action on boundary or interior points (and infinity)."""
    alg = g.alg
    if point.infinity:
        if not g.c:
            return HPoint.infinity_point(alg)
        img = g.a * g.c.invert()
        if not img.is_vector():
            raise ValueError("image of infinity is not a paravector")
        return HPoint(alg, img.vec_coords(), 0)
    if point.is_interior():
        A = hermitian_of_point(point)
        B = conjugate_hermitian(g, A)
        return point_of_hermitian(B)
    x = point.boundary_element()
    den = g.c * x + g.d
    if not den:
        return HPoint.infinity_point(alg)
    img = (g.a * x + g.b) * den.invert()
    if not img.is_vector():
        raise ValueError("boundary image is not a paravector")
    return HPoint(alg, img.vec_coords(), 0)


def magic_formula_residual(g, x, y):
    """g(x) - g(y)* - Delta(g)(y c* + d*)(x - y)(c x + d)^-1; must be zero."""
    cxd = g.c * x + g.d
    cyd = g.c * y + g.d
    if not (cxd.is_monoid() and cxd.nrd().scalar_part() != 0):
        raise ValueError("c x + d is not invertible")
    if not (cyd.is_monoid() and cyd.nrd().scalar_part() != 0):
        raise ValueError("c y + d is not invertible")
    gx = (g.a * x + g.b) * cxd.invert()
    gy = (g.a * y + g.b) * cyd.invert()
    delta = g.pseudodeterminant()
    rhs = delta * (y * g.c.transpose() + g.d.transpose()) * (x - y) * cxd.invert()
    return gx - gy.transpose() - rhs


def height_sq_after(g, point):
    """Squared height of g(point); the height law in squared-exact form."""
    return mobius_apply(g, point).height_sq


def stabilizer_infty_generators(order, unit_generators):
    """tau_s for a basis of Vec(O) and sigma_t for the given unit generators."""
    from .orders import vectors_of

    vec = vectors_of(order)
    gens = []
    for row in vec.basis:
        gens.append(("tau", translation(order.alg.from_vec_coords(row))))
    for t in unit_generators:
        gens.append(("sigma", unit_rotation(t)))
    return gens


def tidy_matrix(lam, mu):
    """M_s for the tidy cusp s = lam mu^-1 with integer mu > 0.

    Needs conj(lam) lam = +-1 mod mu; the sign decides the first row.
    """
    alg = lam.alg
    mu = int(mu)
    if mu <= 0:
        raise ValueError("mu must be a positive integer")
    if not lam.is_vector():
        raise ValueError("lambda must be a paravector of the order")
    norm = (lam.conjugate() * lam).scalar_part()
    if norm.denominator != 1:
        raise ValueError("lambda must have integral norm")
    norm = norm.numerator
    if norm % mu == 1 % mu:
        c = (norm - 1) // mu
        return SL2Element(
            -lam.conjugate(), alg.scalar(c), alg.scalar(mu), -lam
        )
    if (-norm) % mu == 1 % mu:
        c = (norm + 1) // mu
        return SL2Element(
            lam.conjugate(), alg.scalar(-c), alg.scalar(mu), -lam
        )
    raise ValueError("cusp is not tidy: |lambda|^2 = %d is not +-1 mod %d" % (norm, mu))


def is_tidy(lam, mu):
    norm = (lam.conjugate() * lam).scalar_part()
    if norm.denominator != 1:
        return False
    return norm % mu in (1 % mu, (-1) % mu)


def tidy_reflection_image(point, lam, mu):
    """The reflection P -> -(conj(P) - s) + s_dual across the hemisphere at
    s = lam/mu, with s_dual = -conj(lam)/mu; boundary conjugation fixes height."""
    alg = point.alg
    s = lam * Fraction(1, mu)
    s_dual = -(lam.conjugate()) * Fraction(1, mu)
    p = point.boundary_element()
    image = -(p.conjugate() - s) + s_dual
    return HPoint(alg, image.vec_coords(), point.height_sq)


def matrix_to_json(g):
    from .algebra import format_element

    return [
        [format_element(g.a), format_element(g.b)],
        [format_element(g.c), format_element(g.d)],
    ]


def point_to_json(point):
    if point.infinity:
        return {"inf": True}
    return {
        "boundary": [str(x) for x in point.boundary],
        "height_sq": str(point.height_sq),
    }
