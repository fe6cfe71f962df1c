"""Fundamental domains: the stabilizer-of-infinity polytope, candidate cusps,
bubble domination by exact linear programming, facet bubbles, cusp classes.

All geometry lives in paravector coordinates (x_0, ..., x_m) over the basis
(1, gamma_1, ..., gamma_m) with the scaled metric diag(1, d_1, ..., d_m).
Heights and radii are always squared rationals.
"""

from fractions import Fraction

from .euclid import EuclideanFailure, gcd_coeffs_right, is_unimodular, right_ideal_index
from .lattices import Lattice, enumerate_by_norm, voronoi_relevant_vectors
from .lp import Infeasible, LinearProgram, Optimal, Unbounded
from .mobius import SL2Element, is_tidy, tidy_matrix
from .orders import vectors_of
from .units import unit_group


class Bubble:
    """Boundary hemisphere of a unimodular pair: center mu^-1 lam, radius^2 = 1/nrd(mu)."""

    def __init__(self, center, radius_sq, witness=None):
        self.center = tuple(Fraction(x) for x in center)
        self.radius_sq = Fraction(radius_sq)
        self.witness = witness

    def __eq__(self, other):
        return (
            isinstance(other, Bubble)
            and self.center == other.center
            and self.radius_sq == other.radius_sq
        )

    def __hash__(self):
        return hash((self.center, self.radius_sq))

    def __repr__(self):
        return "Bubble(%s, r^2=%s)" % ([str(x) for x in self.center], self.radius_sq)


class Polytope:
    """Intersection of halfspaces normal . x <= offset (weighted inner product
    is NOT applied here; normals are plain coordinate rows)."""

    def __init__(self, halfspaces):
        seen = []
        for normal, offset in halfspaces:
            key = (tuple(Fraction(x) for x in normal), Fraction(offset))
            if key not in seen and any(key[0]):
                seen.append(key)
        self.halfspaces = [(list(n), o) for n, o in seen]
        self.dim = len(self.halfspaces[0][0]) if self.halfspaces else 0

    def contains(self, point, strict=False):
        for normal, offset in self.halfspaces:
            lhs = sum(a * Fraction(x) for a, x in zip(normal, point))
            if lhs > offset or (strict and lhs == offset):
                return False
        return True

    def interior_point(self):
        """A point maximizing the minimum slack (Chebyshev-like, exact)."""
        n = self.dim
        prog = LinearProgram(n + 1, [0] * n + [1])
        for normal, offset in self.halfspaces:
            norm1 = sum(abs(x) for x in normal)
            prog.add(list(normal) + [norm1], "<=", offset)
        res = prog.solve()
        if not isinstance(res, Optimal) or res.value <= 0:
            return None
        return res.point[:n]

    def bounding_box(self):
        out = []
        n = self.dim
        for i in range(n):
            lo = self._extreme(i, -1)
            hi = self._extreme(i, 1)
            if lo is None or hi is None:
                return None
            out.append((lo, hi))
        return out

    def _extreme(self, coord, sign):
        n = self.dim
        obj = [0] * n
        obj[coord] = sign
        prog = LinearProgram(n, obj)
        for normal, offset in self.halfspaces:
            prog.add(normal, "<=", offset)
        res = prog.solve()
        if isinstance(res, Optimal):
            return res.point[coord]
        return None

    def essential(self):
        """Drop halfspaces that are implied by the others."""
        keep = []
        for idx, (normal, offset) in enumerate(self.halfspaces):
            others = [h for j, h in enumerate(self.halfspaces) if j != idx]
            prog = LinearProgram(self.dim, normal)
            for nrm, off in others:
                prog.add(nrm, "<=", off)
            res = prog.solve()
            if isinstance(res, (Unbounded,)) or (
                isinstance(res, Optimal) and res.value > offset
            ):
                keep.append((normal, offset))
        return Polytope(keep)

    def __repr__(self):
        return "Polytope(%d halfspaces, dim %d)" % (len(self.halfspaces), self.dim)


class FundamentalDomain:
    def __init__(self, order, polytope, facet_bubbles, all_candidates, bound,
                 inconclusive=(), crossings=None):
        self.order = order
        self.polytope = polytope
        self.facet_bubbles = list(facet_bubbles)
        self.all_candidates = list(all_candidates)
        self.bound = bound
        self.inconclusive = list(inconclusive)
        self.crossings = dict(crossings or {})

    def __repr__(self):
        return "FundamentalDomain(%d facet bubbles, bound %s)" % (
            len(self.facet_bubbles),
            self.bound,
        )


# -- squared-exact sphere comparisons ------------------------------------------


def _weighted_dist_sq(alg, a, b):
    w = [Fraction(1)] + list(alg.form.coefficients)
    return sum(wk * (x - y) * (x - y) for wk, x, y in zip(w, a, b))


def exclusion_test(h0, h1, alg):
    """True iff every point of h0 is on or under h1 (r1 >= d + r0)."""
    r0, r1 = h0.radius_sq, h1.radius_sq
    if r1 < r0:
        return False
    d_sq = _weighted_dist_sq(alg, h0.center, h1.center)
    # (r1 - r0)^2 >= d^2 with radii as square roots:
    # r1sq + r0sq - dsq >= 2 sqrt(r1sq r0sq)
    lhs = r1 + r0 - d_sq
    if lhs < 0:
        return False
    return lhs * lhs >= 4 * r1 * r0


class Dominated:
    def __repr__(self):
        return "Dominated()"


class WitnessPoint:
    def __init__(self, point):
        self.point = point

    def __repr__(self):
        return "WitnessPoint(%s)" % ([str(x) for x in self.point],)


class Inconclusive:
    def __init__(self, reason):
        self.reason = reason

    def __repr__(self):
        return "Inconclusive(%r)" % self.reason


def _height_excess_row(alg, h0, hi):
    """Linear (row, const) with row . x + const = (r0^2-|x-P0|^2)-(ri^2-|x-Pi|^2)."""
    w = [Fraction(1)] + list(alg.form.coefficients)
    p0, pi = h0.center, hi.center
    row = [2 * wk * (a - b) for wk, a, b in zip(w, p0, pi)]
    const = (
        h0.radius_sq
        - hi.radius_sq
        - sum(wk * a * a for wk, a in zip(w, p0))
        + sum(wk * b * b for wk, b in zip(w, pi))
    )
    return row, const


def under_spheres(h0, cover, region, alg, max_cuts=40):
    """Does h0 lie under the union of the cover over the region?

    Implements the cut-and-reoptimize loop: feasibility, then objectives over
    the tight set; tangent cuts when an optimum escapes h0's disk.
    """
    if not cover:
        return Inconclusive("empty cover")
    n = len(h0.center)
    rows = []
    for hi in cover:
        rows.append(_height_excess_row(alg, h0, hi))
    cuts = []
    for _ in range(max_cuts):
        prog = LinearProgram(n)
        idx_of = {}
        for k, (row, const) in enumerate(rows):
            # excess >= 0: row . x >= -const
            cid = prog.add([-c for c in row], "<=", const)
            idx_of[cid] = k
        for normal, offset in region.halfspaces:
            prog.add(normal, "<=", offset)
        for normal, offset in cuts:
            prog.add(normal, "<=", offset)
        res = prog.solve()
        if isinstance(res, Infeasible):
            return Dominated()
        if isinstance(res, Unbounded):
            return Inconclusive("region fails to bound the program")
        point = res.point
        tight = [idx_of[c] for c in res.tight if c in idx_of]
        visited = set()
        while True:
            if not tight:
                d_sq = _weighted_dist_sq(alg, point, h0.center)
                if d_sq < h0.radius_sq:
                    return WitnessPoint(point)
                cut = _tangent_cut(alg, h0, point)
                if cut is None:
                    return Inconclusive("no rational tangent point found")
                cuts.append(cut)
                break
            j = next(k for k in tight if k not in visited) if any(
                k not in visited for k in tight
            ) else None
            if j is None:
                # every tight constraint already maximized to positive slack
                d_sq = _weighted_dist_sq(alg, point, h0.center)
                if d_sq < h0.radius_sq:
                    return WitnessPoint(point)
                cut = _tangent_cut(alg, h0, point)
                if cut is None:
                    return Inconclusive("no rational tangent point found")
                cuts.append(cut)
                break
            visited.add(j)
            row, const = rows[j]
            res = prog.solve(objective=row)
            if isinstance(res, Unbounded):
                return Inconclusive("region fails to bound the program")
            value = res.value + const
            if value == 0:
                return Dominated()
            point = res.point
            tight = [idx_of[c] for c in res.tight if c in idx_of]
    return Inconclusive("cut budget exhausted")


def _tangent_cut(alg, h0, outside_point):
    """Tangent halfspace at a rational sphere point separating the outside point."""
    w = [Fraction(1)] + list(alg.form.coefficients)
    center = list(h0.center)
    q = [Fraction(x) for x in outside_point]
    base = _rational_sphere_point(alg, center, h0.radius_sq)
    if base is None:
        return None
    # walk rational points toward the radial projection of q until the
    # tangent plane at the point separates q from the center
    for _ in range(80):
        grad = [2 * wk * (y - c) for wk, y, c in zip(w, base, center)]
        lhs_q = sum(g * (a - b) for g, a, b in zip(grad, q, base))
        if lhs_q > 0:
            offset = sum(g * b for g, b in zip(grad, base))
            return (grad, offset)
        base = _sphere_step(alg, center, h0.radius_sq, base, q)
        if base is None:
            return None
    return None


def _rational_sphere_point(alg, center, radius_sq):
    """Some rational point on the weighted sphere around the center.

    |x - c|_w^2 = r^2 always has the solutions c +- t e_0 with t^2 = r^2
    when r^2 is a square; otherwise scale a known representation: the
    bubble radii are 1/nrd(mu), and nrd(mu) = |mu|^2 is a value of the
    weighted form, so a representing vector gives a rational point.
    """
    r = Fraction(radius_sq)
    # try axis points: need r/w_i to be a rational square
    w = [Fraction(1)] + list(alg.form.coefficients)
    for i, wi in enumerate(w):
        target = r / wi
        s = _sqrt_fraction(target)
        if s is not None:
            out = list(center)
            out[i] += s
            return out
    # fall back: search small vectors v with |v|_w^2 = N and use v/N, where
    # r = 1/N (the standard bubble shape)
    if r.numerator == 1:
        N = r.denominator
        lat = Lattice(
            [[Fraction(int(i == j)) for j in range(len(w))] for i in range(len(w))],
            [[w[i] if i == j else Fraction(0) for j in range(len(w))] for i in range(len(w))],
        )
        for vec, norm in enumerate_by_norm(lat, N):
            if norm == N and any(vec):
                return [c + Fraction(x, N) for c, x in zip(center, vec)]
    return None


def _sqrt_fraction(x):
    from math import isqrt

    x = Fraction(x)
    if x < 0:
        return None
    a = isqrt(x.numerator)
    b = isqrt(x.denominator)
    if a * a == x.numerator and b * b == x.denominator:
        return Fraction(a, b)
    return None


def _sphere_step(alg, center, radius_sq, base, target):
    """Move along the sphere from base toward the radial projection of target.

    Chord construction: the line through base in a rational direction t meets
    the sphere again at a rational point; aim t at the target.
    """
    w = [Fraction(1)] + list(alg.form.coefficients)
    t = [Fraction(a - b) for a, b in zip(target, base)]
    qt = sum(wk * x * x for wk, x in zip(w, t))
    if not qt:
        return None
    bb = sum(wk * (b - c) * x for wk, b, c, x in zip(w, base, center, t))
    tau = -2 * bb / qt
    if not tau:
        # base is diametrically aligned; nudge the direction
        t[0] += Fraction(1, 7)
        qt = sum(wk * x * x for wk, x in zip(w, t))
        bb = sum(wk * (b - c) * x for wk, b, c, x in zip(w, base, center, t))
        if not qt:
            return None
        tau = -2 * bb / qt
        if not tau:
            return None
    return [b + tau * x for b, x in zip(base, t)]


# -- the stabilizer-of-infinity polytope ---------------------------------------


def infty_domain(order, units=None):
    """Fundamental polytope for Vec(O) x units acting on the boundary.

    Dirichlet cell of the translation lattice intersected with a Dirichlet
    cell for the finite rotation group about a deterministic generic point.
    """
    if units is None:
        units = unit_group(order)
    alg = order.alg
    vec = vectors_of(order)
    red, relevant = voronoi_relevant_vectors(vec)
    halfspaces = []
    w = [Fraction(1)] + list(alg.form.coefficients)
    for v in relevant:
        normal = [2 * wk * x for wk, x in zip(w, v)]
        offset = sum(wk * x * x for wk, x in zip(w, v))
        halfspaces.append((normal, offset))
    cell = Polytope(halfspaces)
    mats = units.action_image()
    nontrivial = [m for m in mats if not _is_identity_matrix(m)]
    base = _generic_point(cell, nontrivial)
    for m in nontrivial:
        mb = _apply_matrix(m, base)
        normal = [2 * wk * (x - y) for wk, x, y in zip(w, mb, base)]
        # weighted |x-b|^2 <= |x-Mb|^2, and |Mb| = |b| for orthogonal actions
        offset = Fraction(0)
        if any(normal):
            halfspaces.append((normal, offset))
    return Polytope(halfspaces)


def _is_identity_matrix(m):
    return all(m[i][j] == (1 if i == j else 0) for i in range(len(m)) for j in range(len(m)))


def _apply_matrix(m, v):
    return [sum(Fraction(m[i][j]) * v[j] for j in range(len(v))) for i in range(len(m))]


def _generic_point(cell, matrices):
    inner = cell.interior_point()
    if inner is None:
        raise ValueError("translation cell has no interior")
    for den in (13, 17, 19, 23, 29):
        probe = [x + Fraction(i + 1, den**2 + 7 * i) for i, x in enumerate(inner)]
        probe = [x / 2 for x in probe]
        if not cell.contains(probe):
            probe = [x / 4 for x in probe]
        if not cell.contains(probe):
            continue
        if all(_apply_matrix(m, probe) != probe for m in matrices):
            return probe
    raise RuntimeError("no generic base point found")


# -- candidate cusps ------------------------------------------------------------


def candidate_cusps(order, bound, region, progress=None):
    """Unimodular cusps mu^-1 lam with nrd(mu) <= bound whose bubble can meet
    the prism over the region, deduplicated by center."""
    alg = order.alg
    box = region.bounding_box()
    if box is None:
        raise ValueError("region must be bounded")
    vec = vectors_of(order)
    monoid_by_norm = _monoid_elements_by_norm(order, bound)
    centers = {}
    for N in sorted(monoid_by_norm):
        mus = monoid_by_norm[N]
        radius_sq = Fraction(1, N)
        margin = radius_sq
        grid = _lattice_points_in_box(
            vec, [(lo - margin - 1, hi + margin + 1) for lo, hi in box], scale=N
        )
        for wcoords in grid:
            center = [Fraction(x, N) for x in wcoords]
            key = tuple(center)
            if key in centers:
                continue
            if not _box_meets(center, radius_sq, box, alg):
                continue
            hit = None
            c_elt = alg.from_vec_coords(center)
            for mu in mus:
                lam = mu * c_elt
                if not lam.is_vector():
                    continue
                if not order.contains(lam):
                    continue
                if is_unimodular(mu, lam, order):
                    hit = (lam, mu)
                    break
            if hit is not None:
                centers[key] = Bubble(center, radius_sq, witness=hit)
        if progress:
            progress(N, len(centers))
    return sorted(
        centers.values(), key=lambda b: (-b.radius_sq, b.center)
    )


def _monoid_elements_by_norm(order, bound):
    alg = order.alg
    d = order.den
    rows = [[c * d for c in row] for row in order.basis]
    metric = [[Fraction(0)] * alg.rank for _ in range(alg.rank)]
    for m in range(alg.rank):
        metric[m][m] = alg.vector_weight(m)
    lat = Lattice(rows, metric)
    out = {}
    for vec, norm in enumerate_by_norm(lat, bound * d * d):
        if not any(vec):
            continue
        scaled = Fraction(norm, d * d)
        if scaled.denominator != 1 or scaled == 0:
            continue
        N = scaled.numerator
        if N > bound:
            continue
        x = alg.element({m: Fraction(c, d) for m, c in enumerate(vec) if c})
        if x.is_monoid():
            out.setdefault(N, []).append(x)
    return out


def _lattice_points_in_box(lat, box, scale=1):
    """Integer-combination points x of the lattice with x/scale inside the box."""
    # enumerate by norm bound covering the box, then filter coordinates
    w_box = [(Fraction(lo) * scale, Fraction(hi) * scale) for lo, hi in box]
    corner_norms = []
    for corner in _corners(w_box):
        corner_norms.append(lat.norm_sq(list(corner)))
    bound = max(corner_norms)
    out = []
    for vec, norm in enumerate_by_norm(lat, bound):
        ok = True
        for x, (lo, hi) in zip(vec, w_box):
            if x < lo or x > hi:
                ok = False
                break
        if ok:
            out.append(vec)
    return out


def _corners(box):
    if not box:
        yield ()
        return
    (lo, hi), *rest = box
    for tail in _corners(rest):
        yield (lo,) + tail
        yield (hi,) + tail


def _box_meets(center, radius_sq, box, alg):
    """Whether the bubble can reach the prism over the box (weighted metric)."""
    w = [Fraction(1)] + list(alg.form.coefficients)
    total = Fraction(0)
    for wk, c, (lo, hi) in zip(w, center, box):
        if c < lo:
            total += wk * (lo - c) * (lo - c)
        elif c > hi:
            total += wk * (c - hi) * (c - hi)
    return total <= radius_sq


# -- facet selection -------------------------------------------------------------


def facet_bubbles(order, bound, region=None, units=None, progress=None):
    """Candidate sweep then LP domination; returns the fundamental domain data."""
    alg = order.alg
    if region is None:
        region = infty_domain(order, units=units)
    candidates = candidate_cusps(order, bound, region, progress=progress)
    survivors = []
    inconclusive = []
    for b in candidates:
        others = [c for c in candidates if c is not b]
        if any(exclusion_test(b, c, alg) for c in others):
            continue
        if not others:
            survivors.append((b, None))
            continue
        verdict = under_spheres(b, others, region, alg)
        if isinstance(verdict, Dominated):
            continue
        if isinstance(verdict, WitnessPoint):
            survivors.append((b, verdict.point))
        else:
            inconclusive.append(b)
    crossings = {}
    final = []
    for b, witness_point in survivors:
        final.append(b)
        lam, mu = b.witness
        if mu.is_scalar():
            mu_int = mu.scalar_part()
            if mu_int.denominator == 1 and is_tidy(lam, int(mu_int)):
                crossings[b] = tidy_matrix(lam, int(mu_int))
    return FundamentalDomain(
        order, region, final, candidates, bound,
        inconclusive=inconclusive, crossings=crossings,
    )


# -- cusp classes ----------------------------------------------------------------


def cusp_classes(order, bound, region=None, units=None):
    """Representatives of cusp classes detected up to the denominator bound.

    Boundary cusps v with some (mu, mu v) unimodular lie in the orbit of
    infinity; the rest are partitioned by the invariants of the left ideal
    O(Nv) + ON (index and elementary divisors), and flagged singular when the
    index is not a (2^m)-th power.
    """
    from .linalg import smith_invariants

    alg = order.alg
    if region is None:
        region = infty_domain(order, units=units)
    box = region.bounding_box()
    classes = [{"representative": "inf", "kind": "unimodular", "ideal_index": 1}]
    others = {}
    vec = vectors_of(order)
    monoid_by_norm = _monoid_elements_by_norm(order, bound)
    mus = [m for N in sorted(monoid_by_norm) for m in monoid_by_norm[N]]
    for N in range(2, bound + 1):
        grid = _lattice_points_in_box(vec, box, scale=N)
        for wcoords in grid:
            center = [Fraction(x, N) for x in wcoords]
            if all(c.denominator == 1 for c in center):
                continue  # integral translate of infinity-equivalent 0
            c_elt = alg.from_vec_coords(center)
            lam = c_elt * N
            if not order.contains(lam):
                continue
            if _gcd_content(order, lam, alg.scalar(N)) != 1:
                continue
            unimodular = False
            for mu in mus:
                cand = mu * c_elt
                if not order.contains(cand):
                    continue
                if is_unimodular(mu, cand, order):
                    unimodular = True
                    break
            if unimodular:
                continue
            rows = []
            for b in order.basis_elements():
                for gen in (b * lam, b * N):
                    rows.append([gen.coefficient(m) for m in range(alg.rank)])
            inv = _ideal_invariant(order, rows)
            if inv not in others:
                idx, divisors = inv
                others[inv] = {
                    "representative": [str(x) for x in center],
                    "kind": "singular" if not _is_perfect_power(idx, alg.rank // 2) else "nonprincipal",
                    "ideal_index": idx,
                    "elementary_divisors": divisors,
                }
    classes.extend(others.values())
    return classes


def _ideal_invariant(order, rows):
    from .linalg import hnf_with_denominator, smith_invariants

    den, h = hnf_with_denominator(rows)
    # express the ideal basis in order coordinates (integer matrix)
    coords = []
    for row in h:
        x = order.alg.element(
            {m: Fraction(c, den) for m, c in enumerate(row) if c}
        )
        coords.append([int(v) for v in order.coords(x)])
    divisors = smith_invariants(coords)
    idx = 1
    for d in divisors:
        idx *= int(d)
    return (idx, tuple(int(d) for d in divisors))


def _is_perfect_power(n, k):
    if n <= 0:
        return False
    root = round(n ** (1.0 / k))
    for r in (root - 1, root, root + 1):
        if r >= 1 and r**k == n:
            return True
    return False


def _gcd_content(order, lam, mu):
    """Integer content of the pair (rules out non-primitive pairs)."""
    vals = []
    for x in (lam, mu):
        for c in x.coeffs.values():
            vals.append(c)
    g = Fraction(0)
    for v in vals:
        g = _gcd_frac(g, v)
    return g


def _gcd(a, b):
    while b:
        a, b = b, a % b
    return abs(a)


def _gcd_frac(a, b):
    a, b = abs(Fraction(a)), abs(Fraction(b))
    num = _gcd(a.numerator * b.denominator, b.numerator * a.denominator)
    return Fraction(num, a.denominator * b.denominator)


# -- the distance-lemma grid check ----------------------------------------------


def deephole_cover_check(n, r1_sq, r2_sq, grid_steps=8):
    """Every a in [0,1/2]^n has |a|^2 <= r1_sq or |a-h|^2 <= r2_sq.

    Uses the per-coordinate inequality a - 2a^2 >= 0 on [0,1/2] symbolically
    (so |a|^2 + |a-h|^2 <= n/4), then spot-checks a rational grid.
    """
    r1_sq, r2_sq = Fraction(r1_sq), Fraction(r2_sq)
    if r1_sq + r2_sq != Fraction(n, 4):
        raise ValueError("requires r1^2 + r2^2 = n/4")
    # symbolic: f(t) = t - 2t^2 is concave with f(0) = f(1/2) = 0, so f >= 0
    # on [0,1/2]; summing gives |a|^2 + |a-h|^2 <= n/4.
    f = lambda t: t - 2 * t * t
    if f(Fraction(0)) != 0 or f(Fraction(1, 2)) != 0 or f(Fraction(1, 4)) <= 0:
        return False
    # grid verification
    steps = [Fraction(i, 2 * grid_steps) for i in range(grid_steps + 1)]
    half = Fraction(1, 2)

    def rec(prefix):
        if len(prefix) == n:
            asq = sum(t * t for t in prefix)
            hsq = sum((t - half) * (t - half) for t in prefix)
            return asq <= r1_sq or hsq <= r2_sq
        return all(rec(prefix + [t]) for t in steps)

    if n <= 4:
        return rec([])
    # sampled corners plus random-ish rationals for larger n
    import itertools

    for combo in itertools.product([Fraction(0), Fraction(1, 4), half], repeat=n):
        asq = sum(t * t for t in combo)
        hsq = sum((t - half) * (t - half) for t in combo)
        if not (asq <= r1_sq or hsq <= r2_sq):
            return False
    return True
