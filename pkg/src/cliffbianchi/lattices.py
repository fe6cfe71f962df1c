"""Exact integer-lattice toolkit: norm enumeration, closest vectors, covering radii.

All geometry is carried in squared-distance form so everything stays rational.
"""

import itertools
from fractions import Fraction
from math import isqrt

from .linalg import hnf_with_denominator, lattice_key, mat_inv, rational_kernel, solve


class Lattice:
    """Full-rank-in-its-span lattice: rational basis rows in an ambient metric."""

    def __init__(self, basis, metric=None):
        self.basis = [[Fraction(x) for x in row] for row in basis]
        self.dim = len(self.basis[0]) if self.basis else 0
        if metric is None:
            metric = [[Fraction(int(i == j)) for j in range(self.dim)] for i in range(self.dim)]
        self.metric = [[Fraction(x) for x in row] for row in metric]
        self.rank = len(self.basis)
        self.gram = [[self._inner(a, b) for b in self.basis] for a in self.basis]
        if _det_symmetric(self.gram) == 0:
            raise ValueError("basis rows are dependent")

    def _inner(self, u, v):
        total = Fraction(0)
        for i, ui in enumerate(u):
            if not ui:
                continue
            row = self.metric[i]
            for j, vj in enumerate(v):
                if vj and row[j]:
                    total += ui * row[j] * vj
        return total

    def norm_sq(self, ambient):
        return self._inner(ambient, ambient)

    def vector(self, coords):
        return tuple(
            sum((Fraction(c) * self.basis[i][j] for i, c in enumerate(coords) if c), Fraction(0))
            for j in range(self.dim)
        )

    def key(self):
        return lattice_key(self.basis)

    def __repr__(self):
        return "Lattice(rank=%d, dim=%d)" % (self.rank, self.dim)


class Hole:
    """A point together with its squared distance to the nearest lattice vector."""

    def __init__(self, point, distance_sq):
        self.point = tuple(Fraction(x) for x in point)
        self.distance_sq = Fraction(distance_sq)

    def __repr__(self):
        return "Hole(%s, %s)" % (list(self.point), self.distance_sq)


def _det_symmetric(g):
    from .linalg import mat_det

    return mat_det(g)


def size_reduce(lat):
    """Greedy pairwise size-reduction; returns a new Lattice with shorter rows."""
    basis = [list(r) for r in lat.basis]
    k = len(basis)

    def inner(u, v):
        return lat._inner(u, v)

    changed = True
    guard = 0
    while changed and guard < 1000:
        changed = False
        guard += 1
        norms = [inner(b, b) for b in basis]
        for i in range(k):
            for j in range(k):
                if i == j or not norms[j]:
                    continue
                q = _nearest_int(inner(basis[i], basis[j]) / norms[j])
                if q:
                    cand = [x - q * y for x, y in zip(basis[i], basis[j])]
                    n = inner(cand, cand)
                    if n < norms[i]:
                        basis[i] = cand
                        norms[i] = n
                        changed = True
        order = sorted(range(k), key=lambda t: (norms[t],))
        basis = [basis[t] for t in order]
    return Lattice(basis, lat.metric)


def _nearest_int(x):
    f = Fraction(x)
    q, r = divmod(f.numerator, f.denominator)
    if 2 * r > f.denominator:
        q += 1
    elif 2 * r == f.denominator and q % 2:
        q += 1  # ties to even keeps reductions symmetric
    return q


def _ldl(gram):
    """G = L D L^T with unit lower-triangular L; exact."""
    n = len(gram)
    L = [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    D = [Fraction(0)] * n
    g = [[Fraction(x) for x in row] for row in gram]
    for j in range(n):
        D[j] = g[j][j] - sum(L[j][k] * L[j][k] * D[k] for k in range(j))
        if D[j] <= 0:
            raise ValueError("gram matrix not positive definite")
        for i in range(j + 1, n):
            L[i][j] = (g[i][j] - sum(L[i][k] * L[j][k] * D[k] for k in range(j))) / D[j]
    return L, D


def _int_range_sq(center, radius_sq):
    """All integers t with (t - center)^2 <= radius_sq, exactly."""
    if radius_sq < 0:
        return range(0, 0)
    c = Fraction(center)
    r = Fraction(radius_sq)
    # sqrt(r) = sqrt(num*den)/den
    s_num = isqrt(r.numerator * r.denominator)
    lo_est = (c.numerator * s_num.denominator if False else 0)
    approx = Fraction(s_num, r.denominator)
    lo = _ceil_frac(c - approx - 1)
    hi = _floor_frac(c + approx + 1)
    while lo <= hi and (lo - c) * (lo - c) > r:
        lo += 1
    while hi >= lo and (hi - c) * (hi - c) > r:
        hi -= 1
    return range(lo, hi + 1)


def _ceil_frac(x):
    f = Fraction(x)
    return -((-f.numerator) // f.denominator)


def _floor_frac(x):
    f = Fraction(x)
    return f.numerator // f.denominator


def _enumerate_coords(gram, bound, shift=None):
    """Integer coordinate vectors x with |x + shift|^2_G <= bound, exactly.

    Yields (coords, norm_sq).  Uses the LDL quadratic-completion recursion.
    """
    n = len(gram)
    L, D = _ldl(gram)
    shift = [Fraction(0)] * n if shift is None else [Fraction(s) for s in shift]
    coords = [0] * n

    def rec(i, remaining):
        if i < 0:
            yield list(coords), Fraction(bound) - remaining
            return
        # contribution: D[i] * (x_i + shift_i + sum_{j>i} L[j][i] x_j ... ) using
        # the U^T D U form with U = L^T: q(x) = sum_i D_i (x_i + sum_{j>i} L_{ji} x_j)^2
        c = shift[i] + sum(L[j][i] * (coords[j] + shift[j]) for j in range(i + 1, n))
        # we fold shift into the offset: center for x_i is -c
        for t in _int_range_sq(-c, remaining / D[i]):
            coords[i] = t
            used = D[i] * (t + c) * (t + c)
            yield from rec(i - 1, remaining - used)
        coords[i] = 0

    yield from rec(n - 1, Fraction(bound))


def enumerate_by_norm(lat, bound):
    """All lattice vectors with squared norm <= bound, sorted by (norm, coords)."""
    bound = Fraction(bound)
    if bound < 0:
        return []
    red = size_reduce(lat) if lat.rank > 1 else lat
    out = []
    for coords, norm in _enumerate_coords(red.gram, bound):
        vec = red.vector(coords)
        out.append((vec, norm))
    out.sort(key=lambda item: (item[1], item[0]))
    return out


def closest_vector(lat, target):
    """A nearest lattice vector to target; ties go lexicographically smallest."""
    target = [Fraction(x) for x in target]
    red = size_reduce(lat) if lat.rank > 1 else lat
    # decompose target into span and orthogonal components
    proj = solve(
        [[red._inner(b, c) for c in red.basis] for b in red.basis],
        [red._inner(b, target) for b in red.basis],
    )
    resid = [t - x for t, x in zip(red.vector(proj), target)]
    perp = red.norm_sq(resid)
    # initial radius from rounding the projection coordinates
    start = [_nearest_int(c) for c in proj]
    diff = [Fraction(s) - c for s, c in zip(start, proj)]
    radius = _quadform(red.gram, diff)
    best = None
    shift = [-c for c in proj]
    for coords, norm in _enumerate_coords(red.gram, radius, shift):
        vec = red.vector(coords)
        if best is None or (norm, vec) < best:
            best = (norm, vec)
    norm, vec = best
    return vec, norm + perp


def _quadform(gram, x):
    total = Fraction(0)
    n = len(gram)
    for i in range(n):
        if not x[i]:
            continue
        for j in range(n):
            if x[j]:
                total += x[i] * gram[i][j] * x[j]
    return total


# -- covering radius --------------------------------------------------------


def voronoi_relevant_vectors(lat):
    """Nonzero vectors v such that +-v are the unique minima of v + 2L."""
    red = size_reduce(lat)
    k = red.rank
    out = []
    gram2 = [[4 * x for x in row] for row in red.gram]
    for bits in itertools.product((0, 1), repeat=k):
        if not any(bits):
            continue
        shift = [Fraction(b, 2) for b in bits]
        # minimize |2(x + bits/2)|^2 over integer x
        found = []
        bound = _quadform(gram2, shift)
        while True:
            found = [
                (coords, norm)
                for coords, norm in _enumerate_coords(gram2, bound, shift)
            ]
            if found:
                break
            bound *= 4
        best = min(norm for _, norm in found)
        minima = [coords for coords, norm in found if norm == best]
        if len(minima) == 2:
            coords = [2 * c + b for c, b in zip(minima[0], bits)]
            out.append(tuple(red.vector(coords)))
    return red, out


ROOT_RHO_SQ = {
    # irreducible root lattices at minimal norm 2: squared covering radius
    "A": lambda n: Fraction(((n + 1) // 2) * (n + 1 - (n + 1) // 2), n + 1),
    "D": lambda n: Fraction(n, 4),
    "E6": Fraction(4, 3),
    "E7": Fraction(3, 2),
    "E8": Fraction(1),
}

ROOT_COUNTS = {"A": lambda n: n * (n + 1), "D": lambda n: 2 * n * (n - 1), "E6": 72, "E7": 126, "E8": 240}


def _recognize_root_component(lat):
    """Squared covering radius if lat is a scaled irreducible root lattice."""
    n = lat.rank
    mins = enumerate_by_norm(lat, min(lat.gram[i][i] for i in range(n)))
    nonzero = [(v, s) for v, s in mins if s > 0]
    if not nonzero:
        return None
    min_norm = min(s for _, s in nonzero)
    scale = min_norm / 2  # catalogue entries live at minimal norm 2
    roots = [v for v, s in enumerate_by_norm(lat, min_norm) if s == min_norm]
    count = len(roots)
    root_lat_rows = [list(v) for v in roots]
    if n == 1:
        if count == 2:
            return Fraction(1, 2) * scale
        return None
    candidates = []
    if count == ROOT_COUNTS["A"](n):
        candidates.append(ROOT_RHO_SQ["A"](n))
    if n >= 4 and count == ROOT_COUNTS["D"](n):
        candidates.append(ROOT_RHO_SQ["D"](n))
    if n == 6 and count == ROOT_COUNTS["E6"]:
        candidates.append(ROOT_RHO_SQ["E6"])
    if n == 7 and count == ROOT_COUNTS["E7"]:
        candidates.append(ROOT_RHO_SQ["E7"])
    if n == 8 and count == ROOT_COUNTS["E8"]:
        candidates.append(ROOT_RHO_SQ["E8"])
    if len(candidates) != 1:
        return None
    # the roots must span the lattice itself, not a proper sublattice
    try:
        if lattice_key(root_lat_rows) != lat.key():
            return None
    except Exception:
        return None
    return candidates[0] * scale


def orthogonal_components(lat):
    """Split a size-reduced lattice into orthogonal summands (by Gram support)."""
    red = size_reduce(lat)
    k = red.rank
    adj = {i: set() for i in range(k)}
    for i in range(k):
        for j in range(k):
            if i != j and red.gram[i][j]:
                adj[i].add(j)
    seen = set()
    comps = []
    for i in range(k):
        if i in seen:
            continue
        stack, comp = [i], set()
        while stack:
            t = stack.pop()
            if t in comp:
                continue
            comp.add(t)
            stack.extend(adj[t] - comp)
        seen |= comp
        comps.append(sorted(comp))
    return red, comps


def covering_radius(lat, exact_rank_cap=6):
    """Exact squared covering radius; catalogue or Voronoi-vertex computation."""
    red, comps = orthogonal_components(lat)
    total = Fraction(0)
    for comp in comps:
        sub = Lattice([red.basis[i] for i in comp], red.metric)
        rho = _recognize_root_component(sub)
        if rho is None:
            if sub.rank > exact_rank_cap:
                raise ValueError(
                    "covering radius needs rank <= %d or a catalogued root lattice"
                    % exact_rank_cap
                )
            rho = _covering_radius_exact(sub).distance_sq
        total += rho
    return total


def deep_hole(lat, exact_rank_cap=6):
    """A deep hole (in exact mode only): point plus squared covering radius."""
    return _covering_radius_exact(lat if lat.rank <= exact_rank_cap else None)


def _covering_radius_exact(lat):
    if lat is None:
        raise ValueError("exact covering radius restricted to small rank")
    red, relevant = voronoi_relevant_vectors(lat)
    k = red.rank
    # work in lattice coordinates: constraint <y, v> <= |v|^2/2 for relevant v
    rel_coords = []
    for v in relevant:
        coords = solve([[red._inner(b, c) for c in red.basis] for b in red.basis],
                       [red._inner(b, list(v)) for b in red.basis])
        rel_coords.append((coords, [red._inner(list(v), b) for b in red.basis],
                           red.norm_sq(list(v))))
    best = None
    gram = red.gram
    seen = set()
    for subset in itertools.combinations(range(len(rel_coords)), k):
        rows = [rel_coords[i][1] for i in subset]
        rhs = [rel_coords[i][2] / 2 for i in subset]
        y = solve(rows, rhs)
        if y is None:
            continue
        key = tuple(y)
        if key in seen:
            continue
        seen.add(key)
        ok = True
        for coords, row, nsq in rel_coords:
            lhs = sum(r * yi for r, yi in zip(row, y))
            if lhs > nsq / 2:
                ok = False
                break
        if not ok:
            continue
        norm = _quadform(gram, y)
        if best is None or norm > best[0]:
            best = (norm, y)
    if best is None:
        raise ValueError("no Voronoi vertex found")
    norm, y = best
    point = red.vector(y)
    return Hole(point, norm)


def lattice_to_json(lat):
    return {
        "basis": [[str(x) for x in row] for row in lat.basis],
        "metric": [[str(x) for x in row] for row in lat.metric],
    }


def lattice_from_json(data):
    basis = [[Fraction(x) for x in row] for row in data["basis"]]
    metric = None
    if "metric" in data:
        metric = [[Fraction(x) for x in row] for row in data["metric"]]
    return Lattice(basis, metric)
