"""Exact halfspace machinery: Fourier-Motzkin projection and convex hull facets.

The hull of a finite integer point set is computed by projecting the
convex-combination system { x = sum l_i p_i, sum l_i = 1, l >= 0 } onto the
x variables.  The multiplier variables are eliminated one at a time, with the
classical history-based redundancy rules keeping intermediate systems small:
a derived row is dropped when its set of originating inequalities exceeds
k+1 after k eliminations, or strictly contains the history of another row.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd

from .errors import InvariantViolation
from .vectors import Vec

# A row (coeffs, rhs, hist) encodes coeffs . v <= rhs over the current
# variable order, with hist the set of original inequality indices behind it.
Row = tuple[tuple[int, ...], int, frozenset[int]]

Inequality = tuple[Vec, int]  # normal . x <= rhs, primitive integer form


def normalize_inequality(coeffs, rhs):
    """Divide an integer inequality by the gcd of all its entries."""
    g = 0
    for c in coeffs:
        g = gcd(g, abs(c))
    g = gcd(g, abs(rhs))
    if g > 1:
        coeffs = tuple(c // g for c in coeffs)
        rhs = rhs // g
    return tuple(coeffs), rhs


def _clear_denominators(coeffs, rhs):
    """Turn a rational inequality into a primitive integer one."""
    denoms = [Fraction(c).denominator for c in coeffs] + [Fraction(rhs).denominator]
    lcm = 1
    for d in denoms:
        lcm = lcm * d // gcd(lcm, d)
    ints = [int(Fraction(c) * lcm) for c in coeffs]
    return normalize_inequality(ints, int(Fraction(rhs) * lcm))


def _prune(rows: list[Row], eliminated: int) -> list[Row]:
    """Drop redundant rows: trivial, duplicate, dominated, or history-redundant."""
    by_coeffs: dict[tuple[int, ...], Row] = {}
    for coeffs, rhs, hist in rows:
        if all(c == 0 for c in coeffs):
            if rhs < 0:
                raise InvariantViolation("inconsistent halfspace system")
            continue
        if len(hist) > eliminated + 1:
            continue
        old = by_coeffs.get(coeffs)
        if old is None or (rhs, len(hist), sorted(hist)) < (
            old[1],
            len(old[2]),
            sorted(old[2]),
        ):
            by_coeffs[coeffs] = (coeffs, rhs, hist)

    candidates = sorted(
        by_coeffs.values(), key=lambda r: (len(r[2]), sorted(r[2]), r[0], r[1])
    )
    kept: list[Row] = []
    kept_hists: list[frozenset[int]] = []
    for row in candidates:
        hist = row[2]
        if any(h < hist for h in kept_hists):
            continue
        kept.append(row)
        kept_hists.append(hist)
    return kept


def eliminate_column(rows: list[Row], col: int, eliminated: int) -> list[Row]:
    """One Fourier-Motzkin step removing variable `col`."""
    zeros: list[Row] = []
    pos: list[Row] = []
    neg: list[Row] = []
    for row in rows:
        c = row[0][col]
        if c == 0:
            zeros.append(row)
        elif c > 0:
            pos.append(row)
        else:
            neg.append(row)
    out = list(zeros)
    for pc, pr, ph in pos:
        a = pc[col]
        for nc, nr, nh in neg:
            b = -nc[col]
            coeffs = tuple(b * x + a * y for x, y in zip(pc, nc))
            rhs = b * pr + a * nr
            coeffs, rhs = normalize_inequality(coeffs, rhs)
            out.append((coeffs, rhs, ph | nh))
    return _prune(out, eliminated)


def project_out(rows: list[Row], columns: list[int]) -> list[Row]:
    """Eliminate the given columns, choosing a cheap elimination order greedily."""
    remaining = list(columns)
    eliminated = 0
    rows = _prune(rows, len(remaining) + len(rows))
    while remaining:
        best, best_cost = None, None
        for col in remaining:
            p = sum(1 for r in rows if r[0][col] > 0)
            n = sum(1 for r in rows if r[0][col] < 0)
            cost = p * n
            if best_cost is None or cost < best_cost:
                best, best_cost = col, cost
        remaining.remove(best)
        eliminated += 1
        rows = eliminate_column(rows, best, eliminated)
    return rows


def _rref(matrix: list[list[Fraction]], prefer_cols: int):
    """Reduced row echelon form, preferring pivots among the first `prefer_cols` columns.

    Returns (matrix, pivots) where pivots maps row index -> pivot column.
    """
    rows = len(matrix)
    cols = len(matrix[0]) if rows else 0
    pivots: list[int] = []
    r = 0
    order = list(range(prefer_cols)) + list(range(prefer_cols, cols))
    for j in order:
        if r == rows:
            break
        pivot_row = None
        for i in range(r, rows):
            if matrix[i][j] != 0:
                pivot_row = i
                break
        if pivot_row is None:
            continue
        matrix[r], matrix[pivot_row] = matrix[pivot_row], matrix[r]
        piv = matrix[r][j]
        matrix[r] = [x / piv for x in matrix[r]]
        for i in range(rows):
            if i != r and matrix[i][j] != 0:
                f = matrix[i][j]
                matrix[i] = [x - f * y for x, y in zip(matrix[i], matrix[r])]
        pivots.append(j)
        r += 1
    return matrix, pivots


def linear_rank(vectors: list[Vec]) -> int:
    """Rank over the rationals of a list of integer vectors."""
    mat = [list(map(Fraction, v)) for v in vectors if any(v)]
    if not mat:
        return 0
    _, pivots = _rref(mat, len(mat[0]))
    return len(pivots)


def affine_rank(points: list[Vec]) -> int:
    """One plus the dimension of the affine span (0 for an empty set)."""
    if not points:
        return 0
    base = points[0]
    diffs = [tuple(x - y for x, y in zip(p, base)) for p in points[1:]]
    return 1 + linear_rank(diffs)


def hull_facets(points: list[Vec]) -> list[Inequality]:
    """Facet inequalities of the convex hull of a full-dimensional point set.

    The convex-combination system is reduced by exact Gaussian elimination
    (solving n+1 multipliers out) and the remaining multipliers are projected
    away by Fourier-Motzkin.  The surviving inequalities are then filtered to
    facets: a valid inequality is kept exactly when the points satisfying it
    with equality affinely span a hyperplane.
    """
    pts = sorted(set(tuple(p) for p in points))
    n = len(pts[0])
    m = len(pts)
    if affine_rank(pts) != n + 1:
        raise InvariantViolation("hull_facets needs a full-dimensional point set")

    # Equality system over columns [l_0..l_{m-1}, x_0..x_{n-1} | rhs].
    eqs: list[list[Fraction]] = []
    for j in range(n):
        row = [Fraction(pts[i][j]) for i in range(m)]
        row += [Fraction(-1) if k == j else Fraction(0) for k in range(n)]
        row.append(Fraction(0))
        eqs.append(row)
    eqs.append([Fraction(1)] * m + [Fraction(0)] * n + [Fraction(1)])

    reduced, pivots = _rref(eqs, m)
    if len(pivots) != n + 1 or any(p >= m for p in pivots):
        raise InvariantViolation("degenerate convex-combination system")
    pivot_of = {col: idx for idx, col in enumerate(pivots)}
    free_lambdas = [i for i in range(m) if i not in pivot_of]
    # Variable order for the inequality system: free lambdas, then x.
    var_cols = free_lambdas + list(range(m, m + n))
    width = len(var_cols)

    rows: list[Row] = []
    for i in range(m):
        # l_i >= 0 expressed over the free variables.
        if i in pivot_of:
            rrow = reduced[pivot_of[i]]
            coeffs = [rrow[c] for c in var_cols]
            rhs = rrow[-1]
        else:
            coeffs = [Fraction(0)] * width
            coeffs[free_lambdas.index(i)] = Fraction(-1)
            rhs = Fraction(0)
        ic, ir = _clear_denominators(coeffs, rhs)
        rows.append((ic, ir, frozenset([i])))

    rows = project_out(rows, list(range(len(free_lambdas))))

    facets: list[Inequality] = []
    seen: set[Inequality] = set()
    for coeffs, rhs, _ in rows:
        if any(coeffs[: len(free_lambdas)]):
            raise InvariantViolation("projection left a multiplier variable")
        normal = tuple(coeffs[len(free_lambdas) :])
        normal, nrhs = normalize_inequality(normal, rhs)
        if (normal, nrhs) in seen:
            continue
        seen.add((normal, nrhs))
        touching = []
        for p in pts:
            v = sum(c * x for c, x in zip(normal, p))
            if v > nrhs:
                raise InvariantViolation("projected inequality cuts an input point")
            if v == nrhs:
                touching.append(p)
        if affine_rank(touching) == n:
            facets.append((normal, nrhs))
    facets.sort()
    return facets


def coordinate_bounds(inequalities: list[Inequality], n: int, k: int):
    """Exact (lo, hi) bounds of coordinate k over the halfspace system.

    Returns Fractions, or raises when the system is unbounded in that
    coordinate.
    """
    rows: list[Row] = [
        ((*c,), r, frozenset([i])) for i, (c, r) in enumerate(inequalities)
    ]
    rows = project_out(rows, [j for j in range(n) if j != k])
    lo, hi = None, None
    for coeffs, rhs, _ in rows:
        c = coeffs[k]
        if c > 0:
            bound = Fraction(rhs, c)
            hi = bound if hi is None else min(hi, bound)
        elif c < 0:
            bound = Fraction(rhs, c)
            lo = bound if lo is None else max(lo, bound)
    if lo is None or hi is None:
        raise InvariantViolation(f"halfspace system is unbounded in coordinate {k}")
    return lo, hi
