"""Enumerate the finite Clifford unit group of an order and its action on
paravectors (the orthogonal image with kernel +-1)."""

from fractions import Fraction

from .lattices import Lattice, enumerate_by_norm
from .linalg import mat_mul


class UnitGroup:
    def __init__(self, order, elements, generators, exhaustive=True):
        self.order = order
        self.elements = elements
        self.generators = generators
        self.exhaustive = exhaustive

    @property
    def size(self):
        return len(self.elements)

    def action_matrix(self, u):
        """Matrix of x -> u x u* on the paravector coordinates (columns)."""
        alg = self.order.alg
        ut = u.transpose()
        cols = []
        for v in alg.basis_paravectors():
            img = u * v * ut
            if not img.is_vector():
                raise ValueError("unit fails to stabilize the paravectors")
            cols.append(img.vec_coords())
        n = len(cols)
        return [[cols[j][i] for j in range(n)] for i in range(n)]

    def action_image(self):
        """Set of orthogonal matrices {pi_u}; its order is size/2."""
        mats = {}
        for u in self.elements:
            m = tuple(tuple(r) for r in self.action_matrix(u))
            mats[m] = u
        return mats

    def element_orders(self):
        out = {}
        one = self.order.alg.one()
        for u in self.elements:
            k, p = 1, u
            while p != one:
                p = p * u
                k += 1
                if k > 4 * len(self.elements):
                    raise RuntimeError("element order runaway")
            out[u] = k
        return out


def unit_group(order, exhaustive=True, heuristic_depth=4):
    """The Clifford units of the order.

    Exhaustive mode enumerates lattice vectors of scaled norm d^2 in dO and
    filters monoid members; it is capped at algebra rank 32.  Heuristic mode
    multiplies signed basis multisets to a fixed depth and checks stability;
    its output is flagged non-rigorous via exhaustive=False.
    """
    alg = order.alg
    if exhaustive and alg.rank > 32:
        exhaustive = False
    if exhaustive:
        d = order.den
        rows = [[c * d for c in row] for row in order.basis]
        metric = [[Fraction(0)] * alg.rank for _ in range(alg.rank)]
        for m in range(alg.rank):
            metric[m][m] = alg.vector_weight(m)
        lat = Lattice(rows, metric)
        hits = enumerate_by_norm(lat, d * d)
        units = []
        for vec, norm in hits:
            if norm != d * d:
                continue
            x = alg.element({m: Fraction(c, d) for m, c in enumerate(vec) if c})
            if x.is_monoid():
                units.append(x)
        elements = units
    else:
        elements = _heuristic_units(order, heuristic_depth)
    elements = sorted(elements, key=_unit_sort_key)
    gens = _shrink_generators(elements, alg)
    _check_group(elements, gens, alg)
    return UnitGroup(order, elements, gens, exhaustive=exhaustive)


def _unit_sort_key(x):
    return tuple(sorted((m, (c.numerator, c.denominator)) for m, c in x.coeffs.items()))


def _check_group(elements, generators, alg):
    index = set(elements)
    if alg.one() not in index:
        raise RuntimeError("unit set misses 1")
    for x in elements:
        if x.invert() not in index:
            raise RuntimeError("unit set not closed under inverse")
    if len(_close(generators, alg)) != len(index):
        raise RuntimeError("generators fail to reproduce the unit set")


def _shrink_generators(elements, alg):
    have = {alg.one()}
    gens = []
    for x in sorted(elements, key=lambda e: (-len(e.coeffs), _unit_sort_key(e))):
        if x in have:
            continue
        gens.append(x)
        have = _close(gens, alg)
        if len(have) == len(elements):
            break
    slim = list(gens)
    for g in list(gens):
        test = [h for h in slim if h != g]
        if test and len(_close(test, alg)) == len(elements):
            slim = test
    return slim


def _close(generators, alg):
    """The subgroup generated: BFS by left multiplication with the generators."""
    out = {alg.one()}
    frontier = [alg.one()]
    while frontier:
        new = []
        for x in frontier:
            for g in generators:
                z = g * x
                if z not in out:
                    out.add(z)
                    new.append(z)
        frontier = new
        if len(out) > 200000:
            raise RuntimeError("group closure runaway")
    return out


def _heuristic_units(order, depth):
    alg = order.alg
    basis = order.basis_elements()
    found = {alg.one(), -alg.one()}
    frontier = {alg.one()}
    for _ in range(depth):
        new = set()
        for x in frontier:
            for b in basis:
                for s in (1, -1):
                    y = x + b * s
                    if y in found or y in new:
                        continue
                    if y.is_monoid() and y.nrd() == alg.one():
                        new.add(y)
        if not new:
            break
        found |= new
        frontier = new
    return sorted(_close(sorted(found, key=_unit_sort_key), alg), key=_unit_sort_key)


def action_image_order(units):
    mats = units.action_image()
    size = len(mats)
    if 2 * size != units.size:
        raise RuntimeError("action kernel is not +-1")
    return size


def preserves_metric(matrix, metric):
    mt = [[matrix[j][i] for j in range(len(matrix))] for i in range(len(matrix))]
    return mat_mul(mat_mul(mt, metric), matrix) == [
        [Fraction(x) for x in row] for row in metric
    ]
