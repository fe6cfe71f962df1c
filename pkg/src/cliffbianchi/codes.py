"""Doubly even binary codes, their lattices, and candidate orders built from them."""

from fractions import Fraction

from .algebra import CliffordAlgebra
from .lattices import Lattice, covering_radius
from .linalg import hnf
from .orders import order_from_generators


class BinaryCode:
    """A linear code C in F_2^n, stored by a reduced generator set."""

    def __init__(self, length, words):
        self.length = length
        rows = []
        for w in words:
            if isinstance(w, str):
                if len(w) != length:
                    raise ValueError("word %r has wrong length" % w)
                rows.append([int(ch) for ch in w])
            else:
                rows.append([int(x) % 2 for x in w])
        self.generators = _f2_reduce(rows, length)
        self.dimension = len(self.generators)

    def words(self):
        out = []
        for bits in range(1 << self.dimension):
            w = [0] * self.length
            for i in range(self.dimension):
                if bits & (1 << i):
                    w = [(a + b) % 2 for a, b in zip(w, self.generators[i])]
            out.append(tuple(w))
        return sorted(set(out))

    def generator_strings(self):
        return ["".join(str(b) for b in g) for g in self.generators]

    def is_doubly_even(self):
        return all(sum(w) % 4 == 0 for w in self.words())

    def minimal_distance(self):
        wts = [sum(w) for w in self.words() if any(w)]
        return min(wts) if wts else 0

    def __eq__(self, other):
        return (
            isinstance(other, BinaryCode)
            and self.length == other.length
            and self.generators == other.generators
        )

    def __hash__(self):
        return hash((self.length, tuple(tuple(g) for g in self.generators)))

    def __repr__(self):
        return "BinaryCode(%d, %s)" % (self.length, self.generator_strings())


def _f2_reduce(rows, length):
    work = [list(r) for r in rows if any(r)]
    out = []
    pivots = []
    for col in range(length):
        piv = next((r for r in work if r[col] and all(r[c] == 0 for c in range(col))), None)
        if piv is None:
            continue
        work.remove(piv)
        work = [
            [(a + b) % 2 for a, b in zip(r, piv)] if r[col] else r for r in work
        ]
        out = [
            [(a + b) % 2 for a, b in zip(r, piv)] if r[col] else r for r in out
        ]
        out.append(piv)
        work = [r for r in work if any(r)]
    return sorted(out, reverse=True)


def hamming_8_4():
    """The extended Hamming code H(8,4), doubly even of dimension 4."""
    return BinaryCode(
        8,
        ["11110000", "11001100", "10101010", "11111111"],
    )


def all_doubly_even(length, dimension=None):
    """All doubly even codes of the given length (and dimension, if set)."""
    words = [w for w in range(1, 1 << length) if bin(w).count("1") % 4 == 0]
    seen = set()
    out = []

    def grow(code_words, start):
        key = tuple(sorted(code_words))
        if key in seen:
            return
        seen.add(key)
        code = BinaryCode(length, [_bits(w, length) for w in code_words if w])
        if code.is_doubly_even():
            if dimension is None or code.dimension == dimension:
                if code not in out:
                    out.append(code)
            for w in words[start:]:
                new = set()
                ok = True
                for c in list(code_words) + [0]:
                    combo = c ^ w
                    if bin(combo).count("1") % 4 != 0:
                        ok = False
                        break
                    new.add(combo)
                if ok:
                    grow(sorted(set(code_words) | new), words.index(w) + 1)

    grow([], 0)
    return out


def _bits(w, length):
    return [(w >> (length - 1 - i)) & 1 for i in range(length)]


def lattice_of_code(code):
    """Lambda_C: the preimage of C under Z^n -> F_2^n, basis in HNF."""
    n = code.length
    rows = [[2 * int(i == j) for j in range(n)] for i in range(n)]
    for g in code.generators:
        rows.append(list(g))
    return Lattice([[Fraction(x) for x in row] for row in hnf(rows)])


def order_from_code(code, stretch=False):
    """Ring closure of the Clifford order plus (c . I)/2 for codeword generators.

    Returns (order, None) or (None, witness) when closure leaves integrality.
    """
    cap = 10 if stretch else 9
    if code.length > cap:
        raise ValueError("code length capped at %d" % cap)
    if not code.is_doubly_even():
        raise ValueError("code must be doubly even")
    alg = CliffordAlgebra([1] * (code.length - 1))
    gens = []
    for g in code.generators:
        coords = [Fraction(b, 2) for b in g]
        gens.append(alg.from_vec_coords(coords))
    for i in range(1, alg.arity + 1):
        gens.append(alg.gamma(i))
    return order_from_generators(alg, gens)


def euclidean_by_code(code):
    """Whether rho^2(Lambda_C) < 4, which makes the associated order Euclidean.

    Convention: Lambda_C contains 2Z^n, and the threshold rho(Lambda_C) < 2 is
    stated for that normalization; everything here is squared.
    """
    lam = lattice_of_code(code)
    rho_sq = covering_radius(lam, exact_rank_cap=6)
    return rho_sq < 4, rho_sq
