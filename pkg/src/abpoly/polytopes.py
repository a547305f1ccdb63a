"""Anti-blocking, unconditional, and locally anti-blocking lattice polytopes.

All polytopes carry both exact lattice-point data and an exact integer
H-representation, so membership, dilation, and decomposition questions are
decided without any floating point.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from math import ceil, floor

from .errors import InvariantViolation
from .fourier_motzkin import (
    Inequality,
    coordinate_bounds,
    hull_facets,
    normalize_inequality,
)
from .vectors import Vec, all_sign_vectors, canonical_signed_point, reflect, zero


@dataclass(frozen=True)
class HRepresentation:
    """A bounded rational polyhedron as primitive integer inequalities.

    Each inequality reads normal . x <= rhs.  The bounding box is kept
    alongside so lattice scans know their ranges; it is extracted from the
    inequalities when not supplied by the builder.
    """

    dim: int
    inequalities: tuple[Inequality, ...]
    box: tuple[tuple[Fraction, Fraction], ...]

    @classmethod
    def build(cls, dim, inequalities, box=None) -> "HRepresentation":
        best: dict[Vec, int] = {}
        for normal, rhs in inequalities:
            normal, rhs = normalize_inequality(tuple(normal), rhs)
            if len(normal) != dim:
                raise InvariantViolation("inequality dimension mismatch")
            if all(c == 0 for c in normal):
                continue
            if normal not in best or rhs < best[normal]:
                best[normal] = rhs
        ineqs = tuple(sorted(best.items()))
        if box is None:
            box = tuple(coordinate_bounds(list(ineqs), dim, k) for k in range(dim))
        else:
            box = tuple((Fraction(lo), Fraction(hi)) for lo, hi in box)
        return cls(dim, ineqs, box)

    def contains(self, x) -> bool:
        """Exact membership test for a rational vector."""
        if len(x) != self.dim:
            raise InvariantViolation(f"point dimension {len(x)} != {self.dim}")
        xs = [Fraction(v) for v in x]
        return all(
            sum(c * v for c, v in zip(normal, xs)) <= rhs
            for normal, rhs in self.inequalities
        )

    def contains_scaled(self, x: Vec, t: int) -> bool:
        """Integer fast path: is x/t inside?  Stays in int arithmetic."""
        for normal, rhs in self.inequalities:
            if sum(c * v for c, v in zip(normal, x)) > rhs * t:
                return False
        return True

    def to_json_dict(self):
        return {
            "dim": self.dim,
            "inequalities": [
                {"normal": list(n), "rhs": r} for n, r in self.inequalities
            ],
        }


def contains(h: HRepresentation, x) -> bool:
    """Whether the rational vector x satisfies every inequality of h."""
    return h.contains(x)


def down_closure(generators) -> frozenset[Vec]:
    """All lattice points below some generator: { x : 0 <= x <= g }."""
    out: set[Vec] = set()
    for g in generators:
        out.update(itertools.product(*[range(c + 1) for c in g]))
    return frozenset(out)


def _maximal_points(points) -> list[Vec]:
    pts = sorted(points)
    out = []
    for p in pts:
        if not any(q != p and all(x <= y for x, y in zip(p, q)) for q in pts):
            out.append(p)
    return out


def _corner_candidates(points) -> list[Vec]:
    """Vertex candidates for the hull of a down-closed set.

    Every vertex of such a hull is a coordinate-zeroing of a maximal lattice
    point, so projecting each maximal point onto all support subsets gives a
    small superset of the vertex set.
    """
    cand: set[Vec] = set()
    for g in _maximal_points(points):
        supp = [k for k, c in enumerate(g) if c]
        for r in range(len(supp) + 1):
            for s in itertools.combinations(supp, r):
                cand.add(tuple(c if k in s else 0 for k, c in enumerate(g)))
    return sorted(cand)


def dilate_lattice_points(h: HRepresentation, t: int) -> frozenset[Vec]:
    """All lattice points of the t-th dilate { x : x/t in h }.

    The integer box of the dilate is walked coordinate by coordinate; a branch
    is abandoned as soon as some inequality cannot be satisfied by any
    completion, so only points near the polytope cost full evaluations.
    """
    if t < 1:
        raise InvariantViolation("dilation factor must be a positive integer")
    n = h.dim
    lows = [ceil(lo * t) for lo, _ in h.box]
    highs = [floor(hi * t) for _, hi in h.box]
    if any(lo > hi for lo, hi in zip(lows, highs)):
        return frozenset()
    rows = [(normal, rhs * t) for normal, rhs in h.inequalities]
    # minrest[k][i]: least possible contribution of coordinates k.. to row i
    minrest = [[0] * len(rows) for _ in range(n + 1)]
    for k in range(n - 1, -1, -1):
        for i, (normal, _) in enumerate(rows):
            c = normal[k]
            best = min(c * lows[k], c * highs[k])
            minrest[k][i] = minrest[k + 1][i] + best

    found: list[Vec] = []
    prefix = [0] * n

    def walk(k: int, partials: tuple[int, ...]) -> None:
        if k == n:
            found.append(tuple(prefix))
            return
        rest = minrest[k + 1]
        for v in range(lows[k], highs[k] + 1):
            nxt = []
            ok = True
            for i, (normal, rhs) in enumerate(rows):
                p = partials[i] + normal[k] * v
                if p + rest[i] > rhs:
                    ok = False
                    break
                nxt.append(p)
            if ok:
                prefix[k] = v
                walk(k + 1, tuple(nxt))

    walk(0, tuple(0 for _ in rows))
    return frozenset(found)


@dataclass(frozen=True)
class AntiBlockingPolytope:
    """A full-dimensional down-closed lattice polytope in the nonnegative orthant."""

    dim: int
    generators: frozenset[Vec]
    lattice_points: frozenset[Vec]
    hrep: HRepresentation

    def upper_facets(self) -> list[Inequality]:
        """The facets other than the orthant walls; their normals are nonnegative."""
        return [
            (normal, rhs)
            for normal, rhs in self.hrep.inequalities
            if any(c > 0 for c in normal)
        ]

    def to_json_dict(self):
        return {
            "dim": self.dim,
            "generators": sorted(map(list, self.generators)),
            "lattice_points": sorted(map(list, self.lattice_points)),
            "hrep": self.hrep.to_json_dict(),
        }


def build_anti_blocking(generators) -> AntiBlockingPolytope:
    """Construct the anti-blocking polytope spanned by nonnegative generators.

    The lattice points are those of the convex hull of the generators'
    down-closure, which is itself down-closed, so the result is the smallest
    anti-blocking lattice polytope containing the generators.
    """
    gens = frozenset(tuple(g) for g in generators)
    if not gens:
        raise InvariantViolation("need at least one generator")
    dims = {len(g) for g in gens}
    if len(dims) != 1:
        raise InvariantViolation("generators must share one dimension")
    n = dims.pop()
    for g in gens:
        if any(c < 0 for c in g):
            raise InvariantViolation(f"generator {g} has a negative coordinate")
    missing = [k for k in range(n) if all(g[k] == 0 for g in gens)]
    if missing:
        raise InvariantViolation(
            f"not full-dimensional: no generator is positive in coordinates {missing}"
        )

    closure = down_closure(gens)
    facets = hull_facets(_corner_candidates(closure))
    for normal, rhs in facets:
        neg = [c for c in normal if c < 0]
        if neg and (len(neg) > 1 or rhs != 0 or sorted(normal) != [-1] + [0] * (n - 1)):
            raise InvariantViolation(f"unexpected facet {normal} <= {rhs}")
    box = tuple(
        (Fraction(0), Fraction(max(g[k] for g in gens))) for k in range(n)
    )
    hrep = HRepresentation.build(n, facets, box=box)
    points = dilate_lattice_points(hrep, 1)
    if not points.issuperset(closure):
        raise InvariantViolation("hull lost part of the down-closure")
    return AntiBlockingPolytope(n, gens, points, hrep)


@dataclass(frozen=True)
class UnconditionalPolytope:
    """The reflection closure of an anti-blocking polytope across all orthants."""

    base: AntiBlockingPolytope
    lattice_points: frozenset[Vec]
    hrep: HRepresentation

    @property
    def dim(self) -> int:
        return self.base.dim

    def as_locally_anti_blocking(self) -> "LocallyAntiBlockingPolytope":
        pieces = {e: self.base for e in all_sign_vectors(self.dim)}
        return LocallyAntiBlockingPolytope(self.dim, pieces)

    def to_json_dict(self):
        return {
            "dim": self.dim,
            "lattice_points": sorted(map(list, self.lattice_points)),
            "hrep": self.hrep.to_json_dict(),
        }


def build_unconditional(p: AntiBlockingPolytope) -> UnconditionalPolytope:
    """Reflect an anti-blocking polytope through every orthant.

    The orthant-wall facets disappear; every remaining facet has a nonnegative
    normal, and its reflections through all sign patterns cut out exactly the
    reflection closure.
    """
    n = p.dim
    signs = all_sign_vectors(n)
    points = frozenset(
        reflect(a, e) for a in p.lattice_points for e in signs
    )
    ineqs = []
    for normal, rhs in p.upper_facets():
        if any(c < 0 for c in normal) or rhs <= 0:
            raise InvariantViolation(f"facet {normal} <= {rhs} is not anti-blocking")
        for e in signs:
            ineqs.append((reflect(normal, e), rhs))
    box = tuple((-hi, hi) for _, hi in p.hrep.box)
    hrep = HRepresentation.build(n, ineqs, box=box)
    nonneg = frozenset(x for x in points if all(v >= 0 for v in x))
    if nonneg != p.lattice_points:
        raise InvariantViolation("reflection closure disagrees with the base polytope")
    return UnconditionalPolytope(p, points, hrep)


@dataclass(frozen=True)
class LocallyAntiBlockingPolytope:
    """A polytope whose restriction to each orthant is a reflected anti-blocking piece."""

    dim: int
    pieces: dict[Vec, AntiBlockingPolytope] = field(compare=False)
    hull: HRepresentation | None = None

    def lattice_points(self) -> frozenset[Vec]:
        out: set[Vec] = set()
        for e, piece in self.pieces.items():
            out.update(reflect(a, e) for a in piece.lattice_points)
        return frozenset(out)

    def contains_lattice(self, x: Vec) -> bool:
        base, sign = canonical_signed_point(x)
        piece = self.pieces.get(sign)
        if piece is None:
            raise InvariantViolation(f"no piece for orthant {sign}")
        return base in piece.lattice_points

    def contains_rational(self, x) -> bool:
        xs = [Fraction(v) for v in x]
        sign = tuple(-1 if v < 0 else 1 for v in xs)
        piece = self.pieces.get(sign)
        if piece is None:
            raise InvariantViolation(f"no piece for orthant {sign}")
        return piece.hrep.contains([abs(v) for v in xs])


def validate_locally_anti_blocking(pieces) -> LocallyAntiBlockingPolytope:
    """Check that orthant pieces glue into a convex whole, at lattice scale.

    The hull of all reflected piece points is computed exactly; every lattice
    point of the hull, and every half-integral point of its 2-dilate, must lie
    in the union of the reflected pieces.  Pieces must also agree wherever
    their orthants overlap.  Failures raise with the offending point attached
    as `.witness`.
    """
    pieces = {tuple(e): p for e, p in pieces.items()}
    dims = {p.dim for p in pieces.values()}
    if len(dims) != 1:
        raise InvariantViolation("pieces must share one dimension")
    n = dims.pop()
    expected = set(all_sign_vectors(n))
    if set(pieces) != expected:
        raise InvariantViolation("need exactly one piece per sign vector")

    obj = LocallyAntiBlockingPolytope(n, pieces)

    # Boundary consistency: orthant overlaps are points with zero coordinates.
    for e, piece in sorted(pieces.items()):
        for a in piece.lattice_points:
            for e2, piece2 in sorted(pieces.items()):
                if all(s2 == s or x == 0 for s, s2, x in zip(e, e2, a)):
                    if a not in piece2.lattice_points:
                        err = InvariantViolation(
                            f"pieces {e} and {e2} disagree at {reflect(a, e)}"
                        )
                        err.witness = reflect(a, e)
                        raise err

    candidates: set[Vec] = set()
    for e, piece in pieces.items():
        for c in _corner_candidates(piece.lattice_points):
            candidates.add(reflect(c, e))
    facets = hull_facets(sorted(candidates))
    box = tuple(
        (Fraction(min(c[k] for c in candidates)), Fraction(max(c[k] for c in candidates)))
        for k in range(n)
    )
    hull = HRepresentation.build(n, facets, box=box)

    for x in sorted(dilate_lattice_points(hull, 1)):
        if not obj.contains_lattice(x):
            err = InvariantViolation(f"union of pieces is not convex at {x}")
            err.witness = x
            raise err
    for x in sorted(dilate_lattice_points(hull, 2)):
        if not obj.contains_rational([Fraction(v, 2) for v in x]):
            err = InvariantViolation(
                f"union of pieces is not convex at half-integral {x}/2"
            )
            err.witness = x
            raise err
    return LocallyAntiBlockingPolytope(n, pieces, hull)


@dataclass(frozen=True)
class IdpReport:
    """Outcome of a bounded integer-decomposition check."""

    certified_up_to: int
    failures: tuple[tuple[int, Vec], ...]

    @property
    def passed(self) -> bool:
        return not self.failures

    def to_json_dict(self):
        return {
            "certified_up_to": self.certified_up_to,
            "failures": [{"t": t, "point": list(x)} for t, x in self.failures],
        }


def _is_sign_symmetric(points: frozenset[Vec], n: int) -> bool:
    for k in range(n):
        for p in points:
            flipped = tuple(-v if i == k else v for i, v in enumerate(p))
            if flipped not in points:
                return False
    return True


def idp_check(lattice_points, h: HRepresentation, t_max: int) -> IdpReport:
    """Search every lattice point of the dilates 2..t_max for a decomposition.

    A point of the t-th dilate must split into t polytope lattice points.
    Candidate first summands are tried in order of decreasing coordinate sum,
    pruned by membership of the remainder in the (t-1)-st dilate, and
    subproblems are memoized.  For reflection-closed point sets the memo is
    shared across sign orbits.
    """
    if t_max < 2:
        raise InvariantViolation("t_max must be at least 2")
    points = frozenset(tuple(p) for p in lattice_points)
    n = h.dim
    symmetric = _is_sign_symmetric(points, n)
    candidates = sorted(points, key=lambda p: (-sum(p), p))
    memo: dict[tuple[int, Vec], bool] = {}

    def canon(x: Vec) -> Vec:
        return tuple(abs(v) for v in x) if symmetric else x

    def decompose(t: int, x: Vec) -> bool:
        if t == 1:
            return x in points
        key = (t, canon(x))
        got = memo.get(key)
        if got is not None:
            return got
        memo[key] = False  # cycle guard; overwritten below
        ok = False
        for a in candidates:
            y = tuple(v - w for v, w in zip(x, a))
            if h.contains_scaled(y, t - 1) and decompose(t - 1, y):
                ok = True
                break
        memo[key] = ok
        return ok

    failures = []
    for t in range(2, t_max + 1):
        for x in sorted(dilate_lattice_points(h, t)):
            if symmetric:
                cx = canon(x)
                if cx != x and (t, cx) in memo:
                    if not memo[(t, cx)]:
                        failures.append((t, x))
                    continue
            if not decompose(t, x):
                failures.append((t, x))
    return IdpReport(t_max, tuple(failures))


def merge_decomposition(summands, target: Vec, locally_ab: LocallyAntiBlockingPolytope):
    """Rewrite a decomposition into pairwise sign-compatible summands.

    While two summands disagree in sign at some coordinate, a unit is moved
    from the positive one to the negative one; each transfer keeps the sum and
    strictly shrinks the total absolute coordinate mass, so the loop ends with
    all summands in the target's orthant.  The first conflicting (i, j, k) in
    lexicographic order is resolved at every step, which makes runs
    reproducible.
    """
    ys = [tuple(y) for y in summands]
    n = locally_ab.dim
    if any(v < 0 for v in target):
        raise InvariantViolation("target must be componentwise nonnegative")
    total = tuple(sum(y[k] for y in ys) for k in range(n))
    if total != tuple(target):
        raise InvariantViolation(f"summands add to {total}, not {tuple(target)}")
    for y in ys:
        if not locally_ab.contains_lattice(y):
            raise InvariantViolation(f"summand {y} is outside the polytope")

    while True:
        conflict = None
        for i in range(len(ys)):
            for j in range(len(ys)):
                if i == j:
                    continue
                for k in range(n):
                    if ys[i][k] > 0 > ys[j][k]:
                        conflict = (i, j, k)
                        break
                if conflict:
                    break
            if conflict:
                break
        if conflict is None:
            break
        i, j, k = conflict
        yi = tuple(v - (1 if idx == k else 0) for idx, v in enumerate(ys[i]))
        yj = tuple(v + (1 if idx == k else 0) for idx, v in enumerate(ys[j]))
        if not locally_ab.contains_lattice(yi) or not locally_ab.contains_lattice(yj):
            raise InvariantViolation(
                f"unit transfer on coordinate {k} left the polytope; "
                "the input is not locally anti-blocking"
            )
        ys[i], ys[j] = yi, yj
    return ys
