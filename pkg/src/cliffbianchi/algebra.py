"""Exact arithmetic in rational Clifford algebras of diagonal positive forms.

The algebra Clf(q) for q = d_1 y_1^2 + ... + d_m y_m^2 is generated by
gamma_1, ..., gamma_m with gamma_i^2 = -d_i and gamma_i gamma_j = -gamma_j gamma_i.
Basis elements gamma_S are indexed by bitmasks S over {1..m} (bit i-1 <-> gamma_i),
listed in increasing bitmask order.  Elements are sparse maps mask -> coefficient.

Coefficients are usually Fraction, but any commutative ring element supporting
+, -, * and truthiness works (polynomials, for instance).
"""

import re
from fractions import Fraction

MAX_ARITY = 9


def popcount(mask):
    return bin(mask).count("1")


def parity_sign(k):
    return -1 if k % 2 else 1


def transpose_sign(k):
    # reversal of a k-fold product: (-1)^(k(k-1)/2)
    return -1 if (k * (k - 1) // 2) % 2 else 1


def conjugate_sign(k):
    return parity_sign(k) * transpose_sign(k)


class DiagonalForm:
    """A diagonal positive definite quadratic form d_1 y_1^2 + ... + d_m y_m^2."""

    def __init__(self, coefficients):
        coeffs = tuple(Fraction(d) for d in coefficients)
        if any(d <= 0 for d in coeffs):
            raise ValueError("form coefficients must be positive")
        if len(coeffs) > MAX_ARITY:
            raise ValueError("arity capped at %d" % MAX_ARITY)
        self.coefficients = coeffs
        self.arity = len(coeffs)

    def is_integral_primitive(self):
        if not all(d.denominator == 1 for d in self.coefficients):
            return False
        ints = [d.numerator for d in self.coefficients]
        if any(_has_square_factor(n) for n in ints):
            return False
        g = 0
        for n in ints:
            g = _gcd(g, n)
        return g == 1 or not ints

    def __eq__(self, other):
        return isinstance(other, DiagonalForm) and self.coefficients == other.coefficients

    def __hash__(self):
        return hash(self.coefficients)

    def __repr__(self):
        return "DiagonalForm(%s)" % (list(self.coefficients),)


def _gcd(a, b):
    while b:
        a, b = b, a % b
    return abs(a)


def _has_square_factor(n):
    n = abs(n)
    d = 2
    while d * d <= n:
        if n % (d * d) == 0:
            return True
        d += 1
    return False


class CliffordAlgebra:
    """Clf(q) with its basis of subset products, product signs memoized."""

    def __init__(self, form):
        if not isinstance(form, DiagonalForm):
            form = DiagonalForm(form)
        self.form = form
        self.arity = form.arity
        self.rank = 1 << form.arity
        self.dim_vec = form.arity + 1
        self._sign = {}
        # scaled Euclidean weight of gamma_S: product of d_i over i in S
        self._weight = [Fraction(1)] * self.rank
        for mask in range(1, self.rank):
            low = mask & (-mask)
            i = low.bit_length() - 1
            self._weight[mask] = self._weight[mask ^ low] * form.coefficients[i]

    def basis_sign(self, s, t):
        """Coefficient c with gamma_S gamma_T = c * gamma_(S xor T)."""
        key = (s, t)
        hit = self._sign.get(key)
        if hit is not None:
            return hit
        coeff = Fraction(1)
        acc = s
        for i in range(self.arity):
            bit = 1 << i
            if not (t & bit):
                continue
            # move gamma_i from the left end of the tail past the generators
            # of acc with larger index, then cancel a repeat if present
            higher = acc >> (i + 1)
            if popcount(higher) % 2:
                coeff = -coeff
            if acc & bit:
                coeff = coeff * (-self.form.coefficients[i])
                acc ^= bit
            else:
                acc |= bit
        self._sign[key] = coeff
        return coeff

    def structure_tensor(self):
        """Dense int tensor E with gamma_s gamma_t = E[s,t,s^t] gamma_(s^t).

        Only available for integral forms (the usual case).
        """
        if getattr(self, "_tensor", None) is not None:
            return self._tensor
        import numpy as np

        if any(d.denominator != 1 for d in self.form.coefficients):
            raise ValueError("structure tensor needs an integral form")
        n = self.rank
        E = np.zeros((n, n, n), dtype=np.int64)
        for s in range(n):
            for t in range(n):
                E[s, t, s ^ t] = int(self.basis_sign(s, t))
        self._tensor = E
        return E

    def element(self, coeffs):
        return CliffordElement(self, coeffs)

    def zero(self):
        return CliffordElement(self, {})

    def one(self):
        return CliffordElement(self, {0: Fraction(1)})

    def scalar(self, c):
        return CliffordElement(self, {0: Fraction(c)})

    def gamma(self, i):
        """The i-th generator, 1-indexed."""
        if not 1 <= i <= self.arity:
            raise ValueError("generator index out of range")
        return CliffordElement(self, {1 << (i - 1): Fraction(1)})

    def basis_element(self, mask):
        return CliffordElement(self, {mask: Fraction(1)})

    def basis_paravectors(self):
        """1, gamma_1, ..., gamma_m: a basis of Vec(q)."""
        out = [self.one()]
        out.extend(self.gamma(i) for i in range(1, self.arity + 1))
        return out

    def vector_weight(self, mask):
        return self._weight[mask]

    def from_vec_coords(self, coords):
        """Paravector with coordinates (x_0, x_1, ..., x_m) on (1, gamma_1, ..)."""
        if len(coords) != self.dim_vec:
            raise ValueError("expected %d coordinates" % self.dim_vec)
        out = {}
        for i, c in enumerate(coords):
            c = Fraction(c)
            if c:
                out[0 if i == 0 else 1 << (i - 1)] = c
        return CliffordElement(self, out)

    def __eq__(self, other):
        return isinstance(other, CliffordAlgebra) and self.form == other.form

    def __hash__(self):
        return hash(self.form)

    def __repr__(self):
        return "CliffordAlgebra(%s)" % (list(self.form.coefficients),)


class CliffordElement:
    """Sparse element of a Clifford algebra; zero coefficients are pruned."""

    __slots__ = ("alg", "coeffs")

    def __init__(self, alg, coeffs):
        self.alg = alg
        self.coeffs = {m: c for m, c in coeffs.items() if c}

    def copy(self):
        return CliffordElement(self.alg, dict(self.coeffs))

    def __bool__(self):
        return bool(self.coeffs)

    def __eq__(self, other):
        if isinstance(other, CliffordElement):
            return self.alg == other.alg and self.coeffs == other.coeffs
        if isinstance(other, (int, Fraction)):
            return self == self.alg.scalar(other)
        return NotImplemented

    def __hash__(self):
        return hash((self.alg, tuple(sorted(self.coeffs.items()))))

    def __add__(self, other):
        other = self._coerce(other)
        out = dict(self.coeffs)
        for m, c in other.coeffs.items():
            out[m] = out.get(m, 0) + c
        return CliffordElement(self.alg, out)

    def __radd__(self, other):
        return self.__add__(other)

    def __neg__(self):
        return CliffordElement(self.alg, {m: -c for m, c in self.coeffs.items()})

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return CliffordElement(self.alg, {m: c * other for m, c in self.coeffs.items()})
        if not isinstance(other, CliffordElement):
            return NotImplemented
        if other.alg != self.alg:
            raise ValueError("mismatched algebras")
        alg = self.alg
        out = {}
        for s, a in self.coeffs.items():
            for t, b in other.coeffs.items():
                m = s ^ t
                out[m] = out.get(m, 0) + a * b * alg.basis_sign(s, t)
        return CliffordElement(alg, out)

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.__mul__(other)
        return NotImplemented

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return self * (Fraction(1) / Fraction(other))
        return NotImplemented

    def _coerce(self, other):
        if isinstance(other, CliffordElement):
            if other.alg != self.alg:
                raise ValueError("mismatched algebras")
            return other
        if isinstance(other, (int, Fraction)):
            return self.alg.scalar(other)
        raise TypeError("cannot coerce %r" % (other,))

    # -- involutions -------------------------------------------------

    def parity(self):
        return CliffordElement(
            self.alg, {m: c * parity_sign(popcount(m)) for m, c in self.coeffs.items()}
        )

    def transpose(self):
        return CliffordElement(
            self.alg, {m: c * transpose_sign(popcount(m)) for m, c in self.coeffs.items()}
        )

    def conjugate(self):
        return CliffordElement(
            self.alg, {m: c * conjugate_sign(popcount(m)) for m, c in self.coeffs.items()}
        )

    def involution(self, kind):
        if kind == "parity":
            return self.parity()
        if kind == "transpose":
            return self.transpose()
        if kind == "conjugate":
            return self.conjugate()
        raise ValueError("unknown involution %r" % (kind,))

    # -- grading and support -----------------------------------------

    def graded_parts(self):
        even = {m: c for m, c in self.coeffs.items() if popcount(m) % 2 == 0}
        odd = {m: c for m, c in self.coeffs.items() if popcount(m) % 2 == 1}
        return GradedParts(CliffordElement(self.alg, even), CliffordElement(self.alg, odd))

    def is_even(self):
        return all(popcount(m) % 2 == 0 for m in self.coeffs)

    def is_vector(self):
        """Supported on 1 and the generators (a paravector)."""
        return all(popcount(m) <= 1 for m in self.coeffs)

    def is_imaginary_vector(self):
        return all(popcount(m) == 1 for m in self.coeffs)

    def is_scalar(self):
        return all(m == 0 for m in self.coeffs)

    def scalar_part(self):
        return self.coeffs.get(0, Fraction(0))

    def coefficient(self, mask):
        return self.coeffs.get(mask, Fraction(0))

    def vec_coords(self):
        if not self.is_vector():
            raise ValueError("not a paravector")
        coords = [self.coeffs.get(0, Fraction(0))]
        for i in range(self.alg.arity):
            coords.append(self.coeffs.get(1 << i, Fraction(0)))
        return coords

    # -- norms ---------------------------------------------------------

    def nrd(self):
        return self * self.conjugate()

    def trd(self):
        return self + self.conjugate()

    def spinor_norm(self):
        return self * self.transpose()

    def bigform(self):
        """The 1-component of nrd(x); the scaled Euclidean square norm."""
        s = Fraction(0)
        for m, c in self.coeffs.items():
            s += c * c * self.alg.vector_weight(m)
        return s

    def norms(self):
        return self.nrd(), self.trd(), self.spinor_norm(), self.bigform()

    # -- monoid / group membership --------------------------------------

    def is_monoid(self):
        """nrd scalar and conjugation x . v . x* keeps paravectors paravectors."""
        if not self:
            return True
        if not self.nrd().is_scalar():
            return False
        xt = self.transpose()
        for v in self.alg.basis_paravectors():
            if not (self * v * xt).is_vector():
                return False
        return True

    def is_unit(self):
        return self.is_monoid() and self.nrd() == self.alg.one()

    def invert(self):
        nr = self.nrd()
        if not nr.is_scalar():
            raise ValueError("element is not in the Clifford monoid")
        s = nr.scalar_part()
        if not s:
            raise ZeroDivisionError("zero Clifford norm")
        return self.conjugate() * (Fraction(1) / s)

    def __repr__(self):
        return "<%s>" % format_element(self)


class GradedParts:
    """Even/odd split of an element; even + odd reconstructs the input."""

    def __init__(self, even, odd):
        self.even = even
        self.odd = odd

    def __iter__(self):
        return iter((self.even, self.odd))


def useful_ratio_test(a, c):
    """a * c^-1 is a paravector; equivalent to transpose(a) * c being one."""
    return (a * c.invert()).is_vector()


def decompose_graded(x):
    return x.graded_parts()


def multiply(x, y):
    return x * y


def involution(x, kind):
    return x.involution(kind)


def norms(x):
    return x.norms()


# -- textual format ------------------------------------------------------

_TERM_RE = re.compile(r"([+-]?)(\d+(?:/\d+)?)\*(1|e[1-9]+)")


def mask_label(mask):
    if mask == 0:
        return "1"
    return "e" + "".join(str(i + 1) for i in range(9) if mask & (1 << i))


def label_mask(label):
    if label == "1":
        return 0
    mask = 0
    for ch in label[1:]:
        mask |= 1 << (int(ch) - 1)
    return mask


def format_element(x):
    if not x.coeffs:
        return "0"
    parts = []
    for m in sorted(x.coeffs):
        c = x.coeffs[m]
        sign = "-" if c < 0 else "+"
        parts.append((sign, "%s*%s" % (abs(c), mask_label(m))))
    first_sign, first = parts[0]
    out = (first_sign if first_sign == "-" else "") + first
    for sign, body in parts[1:]:
        out += sign + body
    return out


def parse_element(alg, text):
    text = text.strip().replace(" ", "")
    if text == "0":
        return alg.zero()
    coeffs = {}
    pos = 0
    while pos < len(text):
        m = _TERM_RE.match(text, pos)
        if not m:
            raise ValueError("bad element syntax at %r" % text[pos:])
        sign, num, label = m.groups()
        c = Fraction(num)
        if sign == "-":
            c = -c
        mask = label_mask(label)
        if mask >= alg.rank:
            raise ValueError("basis label %r outside the algebra" % label)
        if mask in coeffs:
            raise ValueError("repeated basis label %r" % label)
        coeffs[mask] = c
        pos = m.end()
    return CliffordElement(alg, coeffs)
