"""Independent oracles used to cross-check the package's fast paths.

Nothing here shares code with the implementation under test: hull membership
runs a phase-1 simplex over exact rationals, fibers are enumerated through
itertools, and move connectivity is a literal breadth-first search on an
explicitly built adjacency relation.
"""

from fractions import Fraction
from itertools import combinations, combinations_with_replacement


def in_convex_hull(q, points) -> bool:
    """Exact feasibility of q = sum l_i p_i, sum l_i = 1, l >= 0 (phase-1 simplex)."""
    n = len(q)
    m = len(points)
    rows = [[Fraction(p[j]) for p in points] for j in range(n)]
    rows.append([Fraction(1)] * m)
    rhs = [Fraction(x) for x in q] + [Fraction(1)]
    height = n + 1
    for i in range(height):
        if rhs[i] < 0:
            rows[i] = [-x for x in rows[i]]
            rhs[i] = -rhs[i]
    tab = [
        rows[i]
        + [Fraction(1) if r == i else Fraction(0) for r in range(height)]
        + [rhs[i]]
        for i in range(height)
    ]
    width = m + height
    cost = [Fraction(0)] * (width + 1)
    for i in range(height):
        for j in range(m):
            cost[j] -= tab[i][j]
        cost[width] -= tab[i][width]
    basis = [m + i for i in range(height)]
    while True:
        enter = next((j for j in range(width) if cost[j] < 0), None)
        if enter is None:
            break
        ratios = [
            (tab[i][width] / tab[i][enter], basis[i], i)
            for i in range(height)
            if tab[i][enter] > 0
        ]
        if not ratios:
            return False
        _, _, leave = min(ratios)
        piv = tab[leave][enter]
        tab[leave] = [x / piv for x in tab[leave]]
        for i in range(height):
            if i != leave and tab[i][enter] != 0:
                f = tab[i][enter]
                tab[i] = [x - f * y for x, y in zip(tab[i], tab[leave])]
        f = cost[enter]
        if f != 0:
            cost = [x - f * y for x, y in zip(cost, tab[leave])]
        basis[leave] = enter
    return cost[width] == 0


def brute_fiber(points, r, target):
    """All degree-r multisets over the points with the given sum, via itertools."""
    target = tuple(target)
    out = []
    for combo in combinations_with_replacement(sorted(points), r):
        total = tuple(sum(c[k] for c in combo) for k in range(len(target)))
        if total == target:
            out.append(combo)
    return out


def quad_adjacent(u, v) -> bool:
    """Whether two equal-degree multisets differ by one balanced pair exchange."""
    if u == v:
        return False
    ru = list(u)
    shared = []
    for f in v:
        if f in ru:
            ru.remove(f)
            shared.append(f)
    left = ru
    right = list(v)
    for f in shared:
        right.remove(f)
    if len(left) != 2 or len(right) != 2:
        return False
    sl = tuple(sum(c[k] for c in left) for k in range(len(left[0])))
    sr = tuple(sum(c[k] for c in right) for k in range(len(right[0])))
    return sl == sr


def bfs_components(elements, adjacent):
    """Connected components of an explicit adjacency predicate."""
    remaining = list(range(len(elements)))
    comps = []
    while remaining:
        root = remaining.pop(0)
        comp = {root}
        queue = [root]
        while queue:
            a = queue.pop()
            for b in list(remaining):
                if adjacent(elements[a], elements[b]):
                    remaining.remove(b)
                    comp.add(b)
                    queue.append(b)
        comps.append(sorted(comp))
    return comps


def decompose_as_sum(x, points, t):
    """Whether x splits into t points, by plain recursion over sorted candidates."""
    points = sorted(points)
    pts = set(points)

    def rec(y, left):
        if left == 1:
            return y in pts
        for a in points:
            z = tuple(p - q for p, q in zip(y, a))
            if rec(z, left - 1):
                return True
        return False

    return rec(tuple(x), t)
