"""Toric fibers of point configurations and bounded quadratic-generation checks.

A fiber collects every degree-r multiset of configuration points with a fixed
coordinate sum.  Two fiber elements are one quadratic move apart exactly when
they share all but two factors, so connectivity under quadratic moves can be
decided by merging elements that share a common (r-2)-factor multiset.  The
bounded certificate sweeps every achievable target of every degree up to a
cap and reports the first disconnected fiber it finds.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property

from .errors import InvariantViolation
from .vectors import BinomialMove, Monomial, Vec

IndexTuple = tuple[int, ...]


@dataclass(frozen=True)
class PointConfiguration:
    """A finite set of distinct lattice points, stored in sorted order."""

    dim: int
    points: tuple[Vec, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "points", tuple(sorted(self.points)))
        if len(set(self.points)) != len(self.points):
            raise InvariantViolation("configuration points must be pairwise distinct")
        for p in self.points:
            if len(p) != self.dim:
                raise InvariantViolation(f"point {p} has dimension {len(p)} != {self.dim}")

    @classmethod
    def of(cls, points) -> "PointConfiguration":
        pts = [tuple(p) for p in points]
        if not pts:
            raise InvariantViolation("configuration needs at least one point")
        return cls(len(pts[0]), tuple(pts))

    def index_of(self, p: Vec) -> int:
        got = self._index.get(tuple(p))
        if got is None:
            raise InvariantViolation(f"point {p} is not in the configuration")
        return got

    @cached_property
    def _index(self) -> dict[Vec, int]:
        return {p: i for i, p in enumerate(self.points)}

    @cached_property
    def _suffix_bounds(self):
        """Componentwise min/max over each tail of the sorted point list."""
        m, n = len(self.points), self.dim
        mins = [[0] * n for _ in range(m + 1)]
        maxs = [[0] * n for _ in range(m + 1)]
        big = 10**18
        mins[m] = [big] * n
        maxs[m] = [-big] * n
        for i in range(m - 1, -1, -1):
            p = self.points[i]
            mins[i] = [min(a, b) for a, b in zip(mins[i + 1], p)]
            maxs[i] = [max(a, b) for a, b in zip(maxs[i + 1], p)]
        return mins, maxs

    @cached_property
    def pairs_by_sum(self) -> dict[Vec, list[IndexTuple]]:
        """All unordered factor pairs, grouped by their coordinate sum."""
        out: dict[Vec, list[IndexTuple]] = {}
        pts = self.points
        for i in range(len(pts)):
            for j in range(i, len(pts)):
                s = tuple(x + y for x, y in zip(pts[i], pts[j]))
                out.setdefault(s, []).append((i, j))
        return out

    @cached_property
    def sign_symmetric(self) -> bool:
        pts = set(self.points)
        for k in range(self.dim):
            for p in pts:
                if tuple(-v if i == k else v for i, v in enumerate(p)) not in pts:
                    return False
        return True

    @cached_property
    def swap_closed(self) -> tuple[bool, ...]:
        """Whether swapping coordinates k, k+1 maps the configuration to itself."""
        pts = set(self.points)
        out = []
        for k in range(self.dim - 1):
            ok = True
            for p in pts:
                q = list(p)
                q[k], q[k + 1] = q[k + 1], q[k]
                if tuple(q) not in pts:
                    ok = False
                    break
            out.append(ok)
        return tuple(out)

    @cached_property
    def perm_blocks(self) -> tuple[tuple[int, int], ...]:
        """Maximal coordinate runs [i, j) freely permutable without leaving the set.

        Adjacent swaps that preserve the configuration generate the full
        symmetric group on each maximal run, so coordinates inside a block can
        be sorted when canonicalizing targets.
        """
        blocks = []
        k = 0
        while k < self.dim:
            end = k
            while end < self.dim - 1 and self.swap_closed[end]:
                end += 1
            if end > k:
                blocks.append((k, end + 1))
            k = end + 1
        return tuple(blocks)

    @cached_property
    def perm_symmetric(self) -> bool:
        return self.perm_blocks == ((0, self.dim),) if self.dim > 1 else True

    def monomial(self, indices: IndexTuple) -> Monomial:
        return Monomial(self.dim, tuple(self.points[i] for i in indices))


def reflections(config: PointConfiguration) -> PointConfiguration:
    """The sign closure of a configuration: every orthant reflection of every point."""
    out: set[Vec] = set()
    for p in config.points:
        images = [()]
        for v in p:
            vals = (v,) if v == 0 else (v, -v)
            images = [img + (w,) for img in images for w in vals]
        out.update(images)
    return PointConfiguration(config.dim, tuple(out))


def _fiber_indices(config: PointConfiguration, r: int, target: Vec) -> list[IndexTuple]:
    """All nondecreasing index tuples of length r whose points sum to target."""
    pts = config.points
    m = len(pts)
    mins, maxs = config._suffix_bounds
    n = config.dim
    coords = range(n)
    out: list[IndexTuple] = []
    path = [0] * r
    t = list(target)

    def rec(start: int, left: int) -> None:
        if left == 0:
            if not any(t):
                out.append(tuple(path))
            return
        depth = r - left
        for idx in range(start, m):
            lo, hi = mins[idx], maxs[idx]
            ok = True
            for k in coords:
                v = t[k]
                if v < left * lo[k] or v > left * hi[k]:
                    ok = False
                    break
            if not ok:
                # both bounds tighten monotonically along the tail
                break
            p = pts[idx]
            for k in coords:
                t[k] -= p[k]
            path[depth] = idx
            rec(idx, left - 1)
            for k in coords:
                t[k] += p[k]

    rec(0, r)
    return out


def _components_of(elements: list[IndexTuple], r: int) -> list[list[int]]:
    """Partition fiber elements into quadratic-move components.

    Elements sharing an (r-2)-factor multiset are one move apart, so a
    union-find over those shared cofactors yields exactly the components of
    the move graph.
    """
    parent = list(range(len(elements)))

    def find(a: int) -> int:
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    def union(a: int, b: int) -> None:
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[rb] = ra

    if r >= 2:
        owner: dict[IndexTuple, int] = {}
        positions = list(itertools.combinations(range(r), 2))
        for eid, elem in enumerate(elements):
            seen: set[IndexTuple] = set()
            for p, q in positions:
                cofactor = elem[:p] + elem[p + 1 : q] + elem[q + 1 :]
                if cofactor in seen:
                    continue
                seen.add(cofactor)
                prev = owner.setdefault(cofactor, eid)
                if prev != eid:
                    union(prev, eid)
    groups: dict[int, list[int]] = {}
    for eid in range(len(elements)):
        groups.setdefault(find(eid), []).append(eid)
    return sorted(groups.values())


@dataclass(frozen=True)
class Fiber:
    """All monomials of one degree with one coordinate sum over a configuration."""

    config: PointConfiguration
    degree: int
    target: Vec
    elements: tuple[Monomial, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "elements", tuple(sorted(self.elements, key=lambda m: m.factors)))
        for m in self.elements:
            if m.degree != self.degree:
                raise InvariantViolation(f"fiber element {m} has degree {m.degree}")
            if m.weight() != tuple(self.target):
                raise InvariantViolation(f"fiber element {m} has weight {m.weight()}")
            for f in m.factors:
                if f not in self.config._index:
                    raise InvariantViolation(f"factor {f} is outside the configuration")


def enumerate_fiber(config: PointConfiguration, r: int, target: Vec) -> Fiber:
    """Collect every degree-r multiset of configuration points summing to target."""
    if r < 1:
        raise InvariantViolation("fiber degree must be at least 1")
    elems = _fiber_indices(config, r, tuple(target))
    return Fiber(
        config, r, tuple(target), tuple(config.monomial(e) for e in elems)
    )


def fiber_connected_under_quadratic_moves(fiber: Fiber):
    """Connectivity of the fiber under two-factor exchanges, plus the partition."""
    elems = [
        tuple(fiber.config.index_of(f) for f in m.factors) for m in fiber.elements
    ]
    comps = _components_of(elems, fiber.degree)
    partition = tuple(
        tuple(fiber.elements[eid] for eid in comp) for comp in comps
    )
    return len(comps) <= 1, partition


@dataclass(frozen=True)
class FiberWitness:
    """A disconnected fiber, carried as one representative per component."""

    degree: int
    target: Vec
    components: tuple[tuple[Monomial, ...], ...]

    def to_json_dict(self):
        return {
            "degree": self.degree,
            "target": list(self.target),
            "components": [
                [sorted(map(list, m.factors)) for m in comp]
                for comp in self.components
            ],
        }


@dataclass(frozen=True)
class QuadGenCertificate:
    """Outcome of a degree-bounded quadratic-generation check."""

    config: PointConfiguration
    checked_up_to: int
    verdict: str
    witness: FiberWitness | None

    @property
    def certified(self) -> bool:
        return self.witness is None

    def to_json_dict(self):
        return {
            "checked_up_to": self.checked_up_to,
            "verdict": self.verdict,
            "witness": None if self.witness is None else self.witness.to_json_dict(),
        }


def achievable_targets(config: PointConfiguration, up_to: int) -> list[set[Vec]]:
    """targets[r] = exact set of weights of degree-r monomials, for r = 0..up_to."""
    base = set(config.points)
    targets: list[set[Vec]] = [{(0,) * config.dim}, base]
    for _ in range(2, up_to + 1):
        prev = targets[-1]
        nxt = {tuple(x + y for x, y in zip(t, p)) for t in prev for p in base}
        targets.append(nxt)
    return targets


def _canonical_targets(config: PointConfiguration, targets) -> list[Vec]:
    sign = config.sign_symmetric
    blocks = config.perm_blocks

    def canon(b: Vec) -> Vec:
        c = tuple(abs(v) for v in b) if sign else b
        if blocks:
            c = list(c)
            for lo, hi in blocks:
                c[lo:hi] = sorted(c[lo:hi], reverse=True)
            c = tuple(c)
        return c

    return sorted({canon(b) for b in targets})


def _check_one_target(args):
    config, r, target = args
    elems = _fiber_indices(config, r, target)
    if len(elems) <= 1:
        return None
    comps = _components_of(elems, r)
    if len(comps) == 1:
        return None
    reps = tuple(
        (config.monomial(min(elems[eid] for eid in comp)),) for comp in comps
    )
    return FiberWitness(r, target, reps)


def quad_generation_check(
    config: PointConfiguration, d_max: int, jobs: int = 1
) -> QuadGenCertificate:
    """Sweep all fibers of degree 3..d_max for connectivity under quadratic moves.

    Targets are enumerated exactly as iterated sumsets of the configuration,
    and reduced to orbit representatives when the configuration is closed
    under sign flips or coordinate permutations (either symmetry maps fibers
    to isomorphic fibers).  The first disconnected fiber, in sorted
    (degree, target) order, becomes the counterexample witness.
    """
    if d_max < 3:
        raise InvariantViolation("d_max must be at least 3")
    targets = achievable_targets(config, d_max)
    for r in range(3, d_max + 1):
        canonical = _canonical_targets(config, targets[r])
        work = [(config, r, b) for b in canonical]
        if jobs > 1 and len(work) > 4 * jobs:
            import multiprocessing

            with multiprocessing.get_context("fork").Pool(jobs) as pool:
                results = pool.map(_check_one_target, work, chunksize=16)
        else:
            results = map(_check_one_target, work)
        for witness in results:
            if witness is not None:
                return QuadGenCertificate(config, d_max, "counterexample", witness)
    return QuadGenCertificate(
        config, d_max, f"certified-quadratic-up-to-{d_max}", None
    )


def all_quadratic_moves(config: PointConfiguration) -> list[BinomialMove]:
    """Every weight-balanced exchange of one factor pair for another."""
    moves: list[BinomialMove] = []
    for s in sorted(config.pairs_by_sum):
        pairs = config.pairs_by_sum[s]
        for a, b in itertools.combinations(pairs, 2):
            moves.append(BinomialMove(config.monomial(a), config.monomial(b)))
    return moves


def is_generated_by(
    config: PointConfiguration, moves, d_max: int
) -> bool:
    """Whether the given moves connect every fiber of degree at most d_max.

    Neighbors are generated by substituting one side of a move for the other
    inside an element; the scan is a plain breadth-first search per fiber, so
    this stays an independent route from the cofactor-merging connectivity
    check.
    """
    subst: dict[IndexTuple, list[IndexTuple]] = {}
    degrees: set[int] = set()
    for move in moves:
        try:
            lhs = tuple(sorted(config.index_of(f) for f in move.lhs.factors))
            rhs = tuple(sorted(config.index_of(f) for f in move.rhs.factors))
        except InvariantViolation:
            raise InvariantViolation(
                f"move {move} mentions a point outside the configuration"
            )
        if lhs == rhs:
            continue
        degrees.add(move.degree)
        subst.setdefault(lhs, []).append(rhs)
        subst.setdefault(rhs, []).append(lhs)

    targets = achievable_targets(config, d_max)
    move_degrees = sorted(d for d in degrees)
    for r in range(2, d_max + 1):
        sizes = [d for d in move_degrees if d <= r]
        for target in sorted(targets[r]):
            elems = _fiber_indices(config, r, target)
            if len(elems) <= 1:
                continue
            index = {e: i for i, e in enumerate(elems)}
            seen = {0}
            queue = [elems[0]]
            while queue:
                u = queue.pop()
                for d in sizes:
                    for pos in itertools.combinations(range(r), d):
                        side = tuple(u[p] for p in pos)
                        rest = list(u)
                        for p in reversed(pos):
                            del rest[p]
                        for alt in subst.get(side, ()):
                            v = tuple(sorted(rest + list(alt)))
                            vid = index.get(v)
                            if vid is not None and vid not in seen:
                                seen.add(vid)
                                queue.append(elems[vid])
            if len(seen) != len(elems):
                return False
    return True
