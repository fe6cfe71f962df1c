"""Exact rational linear programming: two-phase simplex with Bland's rule.

Variables are free (unrestricted sign); constraints are rows
(coeffs, relation, rhs) with relation one of '<=', '>=', '='.
Every outcome is a value: Infeasible, Unbounded, or Optimal with the
optimal point, value, and the set of tight constraint indices.
"""

from fractions import Fraction


class Infeasible:
    def __repr__(self):
        return "Infeasible()"


class Unbounded:
    def __repr__(self):
        return "Unbounded()"


class Optimal:
    def __init__(self, point, value, tight):
        self.point = point
        self.value = value
        self.tight = tight

    def __repr__(self):
        return "Optimal(%s, value=%s)" % ([str(x) for x in self.point], self.value)


class LinearProgram:
    """maximize objective . x subject to the constraint rows."""

    def __init__(self, num_vars, objective=None):
        self.num_vars = num_vars
        self.objective = [Fraction(0)] * num_vars if objective is None else [
            Fraction(c) for c in objective
        ]
        self.rows = []

    def add(self, coeffs, relation, rhs):
        if relation not in ("<=", ">=", "="):
            raise ValueError("bad relation %r" % relation)
        self.rows.append(([Fraction(c) for c in coeffs], relation, Fraction(rhs)))
        return len(self.rows) - 1

    def solve(self, objective=None):
        obj = self.objective if objective is None else [Fraction(c) for c in objective]
        return _solve_lp(self.num_vars, self.rows, obj)


def _solve_lp(num_vars, rows, objective):
    # split free variables x = u - v with u, v >= 0, and normalize rows to <=
    cons = []
    for coeffs, rel, rhs in rows:
        if rel in ("<=", "="):
            cons.append(([Fraction(c) for c in coeffs], Fraction(rhs)))
        if rel in (">=", "="):
            cons.append(([-Fraction(c) for c in coeffs], -Fraction(rhs)))
    m = len(cons)
    n2 = 2 * num_vars
    table_rows = []
    for coeffs, rhs in cons:
        row = []
        for c in coeffs:
            row.append(c)
        for c in coeffs:
            row.append(-c)
        table_rows.append((row, rhs))
    obj2 = [c for c in objective] + [-c for c in objective]
    res = _simplex_standard(table_rows, obj2, n2)
    if isinstance(res, (Infeasible, Unbounded)):
        return res
    point2, value = res
    point = [point2[i] - point2[num_vars + i] for i in range(num_vars)]
    tight = set()
    for idx, (coeffs, rel, rhs) in enumerate(rows):
        lhs = sum(c * x for c, x in zip(coeffs, point))
        if lhs == rhs:
            tight.add(idx)
    return Optimal(point, value, tight)


def _simplex_standard(cons, objective, n):
    """maximize objective . x, x >= 0, rows (coeffs, rhs) meaning <= rhs."""
    m = len(cons)
    width = n + m
    art_cols = {}
    extra = 0
    for i, (_, rhs) in enumerate(cons):
        if rhs < 0:
            art_cols[i] = width + extra
            extra += 1
    total = width + extra
    T = []
    basis = []
    for i, (coeffs, rhs) in enumerate(cons):
        row = [Fraction(c) for c in coeffs] + [Fraction(0)] * (m + extra) + [Fraction(rhs)]
        row[n + i] = Fraction(1)
        if i in art_cols:
            row = [-x for x in row[:-1]] + [-row[-1]]
            row[art_cols[i]] = Fraction(1)
            basis.append(art_cols[i])
        else:
            basis.append(n + i)
        T.append(row)
    if extra:
        # phase 1: minimize the sum of artificials (stored negated for max)
        cost = [Fraction(0)] * (total + 1)
        for i in art_cols:
            for j in range(total + 1):
                cost[j] -= T[i][j]
        for col in art_cols.values():
            cost[col] += Fraction(1)
        status = _pivot_loop(T, basis, cost, total)
        if status == "unbounded":
            raise RuntimeError("phase 1 cannot be unbounded")
        if cost[-1] != 0:
            return Infeasible()
        for i, b in enumerate(basis):
            if b >= width:
                piv = next((j for j in range(width) if T[i][j]), None)
                if piv is not None:
                    _do_pivot(T, basis, i, piv)
        rows_keep = [i for i in range(len(T)) if basis[i] < width]
        T = [[T[i][j] for j in list(range(width)) + [total]] for i in rows_keep]
        basis = [basis[i] for i in rows_keep]
    total = width
    cost = [Fraction(0)] * (total + 1)
    for j in range(n):
        cost[j] = -objective[j]
    for i, b in enumerate(basis):
        if cost[b]:
            f = cost[b]
            for j in range(total + 1):
                cost[j] -= f * T[i][j]
    status = _pivot_loop(T, basis, cost, total)
    if status == "unbounded":
        return Unbounded()
    point = [Fraction(0)] * n
    for i, b in enumerate(basis):
        if b < n:
            point[b] = T[i][-1]
    return point, cost[-1]


def _pivot_loop(T, basis, cost, total, phase1_cols=None):
    guard = 0
    while True:
        guard += 1
        if guard > 50000:
            raise RuntimeError("simplex pivot runaway")
        enter = None
        for j in range(total):  # Bland: smallest index with negative reduced cost
            if cost[j] < 0:
                enter = j
                break
        if enter is None:
            return "optimal"
        leave = None
        best = None
        for i, row in enumerate(T):
            if row[enter] > 0:
                ratio = row[-1] / row[enter]
                if best is None or ratio < best or (ratio == best and basis[i] < basis[leave]):
                    best = ratio
                    leave = i
        if leave is None:
            return "unbounded"
        _do_pivot(T, basis, leave, enter)
        _refresh_cost(T, basis, cost, leave, enter)


def _do_pivot(T, basis, leave, enter):
    piv = T[leave][enter]
    T[leave] = [x / piv for x in T[leave]]
    for i in range(len(T)):
        if i != leave and T[i][enter]:
            f = T[i][enter]
            T[i] = [a - f * b for a, b in zip(T[i], T[leave])]
    basis[leave] = enter


def _refresh_cost(T, basis, cost, leave, enter):
    if cost[enter]:
        f = cost[enter]
        for j in range(len(cost)):
            cost[j] -= f * T[leave][j]


def lp_solve(program, objective=None):
    return program.solve(objective)
