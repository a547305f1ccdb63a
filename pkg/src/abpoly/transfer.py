"""Transfer of quadratic generation between a polytope and its reflection closure.

Ascending direction: a generating set of moves over the nonnegative points is
closed under sign reflections and extended by one canonical move per separable
point pair.

Descending direction: a signed ordered list with nonnegative total projects,
coordinate by coordinate, onto a list of nonnegative points with the same
total.  The projection turns any quadratic move chain over the reflected
points into a quadratic move chain over the nonnegative points, one two-slot
bridge per source move plus adjacent-transposition bridges between
consecutive source steps.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .errors import InvariantViolation, NoChainFound
from .fibers import PointConfiguration, _fiber_indices
from .vectors import (
    BinomialMove,
    Monomial,
    OrderedList,
    SignedPoint,
    Vec,
    all_sign_vectors,
    canonical_signed_point,
    ordered_list,
    reflect,
    separable,
    signed_point,
)


def signed_sum(entries: OrderedList) -> Vec:
    """Total of the signed values of an ordered list."""
    n = len(entries[0].base)
    out = [0] * n
    for sp in entries:
        for k, (a, s) in enumerate(zip(sp.base, sp.sign)):
            out[k] += s * a
    return tuple(out)


def selection_list(entries: OrderedList, coord: int) -> tuple[int, ...]:
    """The per-coordinate selection list: entry j repeated by its positive share.

    Entry j (1-based) appears base[coord] times when its sign there is +1 and
    not at all when it is -1, in ascending j order.
    """
    out: list[int] = []
    for j, sp in enumerate(entries, start=1):
        if sp.sign[coord] == 1:
            out.extend([j] * sp.base[coord])
    return tuple(out)


def nonnegative_projection(entries: OrderedList):
    """Project a signed list with nonnegative total onto nonnegative points.

    For each coordinate the first `total` entries of the selection list are
    kept and tallied per list position; the tallies assemble into points
    c_1..c_r with 0 <= c_j <= base_j, sum c_j equal to the signed total.
    Returns the points and the monomial they form.
    """
    entries = ordered_list(entries)
    total = signed_sum(entries)
    if any(v < 0 for v in total):
        raise InvariantViolation(f"signed sum {total} has a negative coordinate")
    n = len(total)
    r = len(entries)
    cs = [[0] * n for _ in range(r)]
    for k in range(n):
        remaining = total[k]
        for j, sp in enumerate(entries):
            if remaining == 0:
                break
            if sp.sign[k] == 1:
                take = min(remaining, sp.base[k])
                cs[j][k] = take
                remaining -= take
        if remaining != 0:
            raise InvariantViolation(
                f"selection list for coordinate {k} is shorter than the total"
            )
    points = tuple(tuple(c) for c in cs)
    for c, sp in zip(points, entries):
        if any(x > b for x, b in zip(c, sp.base)):
            raise InvariantViolation("projection exceeded an entry's base point")
    return points, Monomial(n, points)


@dataclass(frozen=True)
class SeparableResolution:
    """A canonical rewriting of a separable pair into nonnegative points."""

    a: Vec
    b: Vec
    eps: Vec
    p: Vec
    q: Vec


def resolve_separable(a: Vec, b: Vec, points) -> SeparableResolution:
    """Rewrite a separable pair: reflect the sum nonnegative, split it inside A.

    The sign vector is the canonical sign of a+b and p is the lexicographically
    least point of A whose complement also lies in A; both exist whenever A is
    the lattice-point set of an anti-blocking polytope.
    """
    if not separable(a, b):
        raise InvariantViolation(f"{a} and {b} are not separable")
    pts = set(map(tuple, points))
    s_base, eps = canonical_signed_point(tuple(x + y for x, y in zip(a, b)))
    for p in sorted(pts):
        q = tuple(x - y for x, y in zip(s_base, p))
        if q in pts:
            return SeparableResolution(tuple(a), tuple(b), eps, p, q)
    raise InvariantViolation(
        f"no split of {s_base} inside A; the point set is not anti-blocking"
    )


def lift_generators(moves, points) -> set[BinomialMove]:
    """Close a move set under sign reflections and add separable-pair moves.

    The result generates every weight balance over the reflection closure of
    A whenever the input generates them over A.
    """
    pts = sorted(set(map(tuple, points)))
    if not pts:
        raise InvariantViolation("empty point set")
    n = len(pts[0])
    signs = all_sign_vectors(n)
    out: set[BinomialMove] = set()
    for move in moves:
        for e in signs:
            lhs = Monomial(n, tuple(reflect(f, e) for f in move.lhs.factors))
            rhs = Monomial(n, tuple(reflect(f, e) for f in move.rhs.factors))
            if lhs != rhs:
                out.add(BinomialMove(lhs, rhs))
    reflected = sorted({reflect(p, e) for p in pts for e in signs})
    for a, b in itertools.combinations(reflected, 2):
        if not separable(a, b):
            continue
        res = resolve_separable(a, b, pts)
        lhs = Monomial(n, (a, b))
        rhs = Monomial(n, (reflect(res.p, res.eps), reflect(res.q, res.eps)))
        if lhs != rhs:
            out.add(BinomialMove(lhs, rhs))
    return out


@dataclass(frozen=True)
class ChainStep:
    """One move application: cofactor times lhs becomes cofactor times rhs."""

    lhs: Monomial
    rhs: Monomial
    cofactor: Monomial

    @property
    def move(self) -> BinomialMove:
        return BinomialMove(self.lhs, self.rhs)

    def source(self) -> Monomial:
        return self.cofactor.times(self.lhs)

    def target(self) -> Monomial:
        return self.cofactor.times(self.rhs)

    def to_json_dict(self):
        return {
            "from": sorted(map(list, self.source().factors)),
            "to": sorted(map(list, self.target().factors)),
            "move": {
                "lhs": sorted(map(list, self.lhs.factors)),
                "rhs": sorted(map(list, self.rhs.factors)),
            },
            "cofactor": sorted(map(list, self.cofactor.factors)),
        }


@dataclass(frozen=True)
class MoveChain:
    """A sequence of monomials, consecutive ones differing by a recorded move."""

    monomials: tuple[Monomial, ...]
    steps: tuple[ChainStep, ...]

    def __post_init__(self) -> None:
        if len(self.monomials) != len(self.steps) + 1:
            raise InvariantViolation("a chain needs one more monomial than steps")
        for before, step, after in zip(self.monomials, self.steps, self.monomials[1:]):
            if step.source() != before or step.target() != after:
                raise InvariantViolation(f"chain step {step} does not match its ends")

    @property
    def start(self) -> Monomial:
        return self.monomials[0]

    @property
    def end(self) -> Monomial:
        return self.monomials[-1]

    def to_json_dict(self):
        return {"steps": [s.to_json_dict() for s in self.steps]}


def verify_chain(chain: MoveChain, allowed_points=None, quadratic_only=True) -> None:
    """Re-derive every chain invariant from scratch, raising on the first failure.

    This deliberately uses only multiset bookkeeping, no projection machinery,
    so it can audit chains produced elsewhere.
    """
    monos = chain.monomials
    degree = monos[0].degree
    total = monos[0].weight()
    allowed = None if allowed_points is None else set(map(tuple, allowed_points))
    for m in monos:
        if m.degree != degree:
            raise InvariantViolation("chain changes degree")
        if m.weight() != total:
            raise InvariantViolation("chain changes weight")
        if allowed is not None:
            for f in m.factors:
                if f not in allowed:
                    raise InvariantViolation(f"factor {f} outside the allowed points")
    for before, step, after in zip(monos, chain.steps, monos[1:]):
        if quadratic_only and step.lhs.degree != 2:
            raise InvariantViolation(f"non-quadratic step of degree {step.lhs.degree}")
        if step.lhs.weight() != step.rhs.weight():
            raise InvariantViolation("step is not weight balanced")
        if not before.contains(step.lhs):
            raise InvariantViolation("step lhs is not a submonomial of its source")
        if before.without(step.lhs) != step.cofactor:
            raise InvariantViolation("step cofactor mismatch")
        if step.cofactor.times(step.rhs) != after:
            raise InvariantViolation("step does not produce the next monomial")


def find_quadratic_chain(
    config: PointConfiguration, u: Monomial, v: Monomial
) -> MoveChain:
    """Shortest chain of quadratic moves between two fiber elements, by BFS."""
    if u.weight() != v.weight() or u.degree != v.degree:
        raise InvariantViolation("endpoints are not in the same fiber")
    r = u.degree
    start = tuple(sorted(config.index_of(f) for f in u.factors))
    goal = tuple(sorted(config.index_of(f) for f in v.factors))
    if start == goal:
        return MoveChain((u,), ())
    pairs_by_sum = config.pairs_by_sum
    pts = config.points
    parents: dict[tuple[int, ...], tuple] = {start: None}
    queue = [start]
    head = 0
    while head < len(queue) and goal not in parents:
        cur = queue[head]
        head += 1
        seen_pos: set[tuple[int, int]] = set()
        for p, q in itertools.combinations(range(r), 2):
            pair = (cur[p], cur[q])
            if pair in seen_pos:
                continue
            seen_pos.add(pair)
            rest = list(cur)
            del rest[q], rest[p]
            s = tuple(x + y for x, y in zip(pts[pair[0]], pts[pair[1]]))
            for alt in pairs_by_sum.get(s, ()):
                if alt == pair:
                    continue
                nxt = tuple(sorted(rest + list(alt)))
                if nxt not in parents:
                    parents[nxt] = (cur, pair, alt, tuple(rest))
                    queue.append(nxt)
    if goal not in parents:
        raise NoChainFound(
            f"no quadratic chain connects {u.factors} to {v.factors}"
        )
    hops = []
    node = goal
    while parents[node] is not None:
        prev, pair, alt, rest = parents[node]
        hops.append((prev, pair, alt, rest))
        node = prev
    hops.reverse()
    monomials = [u]
    steps = []
    for _, pair, alt, rest in hops:
        lhs = Monomial(config.dim, (pts[pair[0]], pts[pair[1]]))
        rhs = Monomial(config.dim, (pts[alt[0]], pts[alt[1]]))
        cof = Monomial(config.dim, tuple(pts[i] for i in rest))
        steps.append(ChainStep(lhs, rhs, cof))
        monomials.append(cof.times(rhs))
    return MoveChain(tuple(monomials), tuple(steps))


def _bridge_permutation(
    current: OrderedList, desired: OrderedList, emit
) -> OrderedList:
    """Reorder one list into another by adjacent swaps, emitting each projection hop.

    Both lists must hold the same multiset of canonical signed points; they
    then differ by a permutation, realized here in bubble-sort fashion.
    """
    work = list(current)
    if sorted(work) != sorted(desired):
        raise InvariantViolation("lists do not hold the same signed points")
    for i, want in enumerate(desired):
        j = work.index(want, i)
        while j > i:
            swapped = list(work)
            swapped[j - 1], swapped[j] = swapped[j], swapped[j - 1]
            emit(tuple(work), tuple(swapped), j - 1)
            work = swapped
            j -= 1
    return tuple(work)


def descend_chain(chain: MoveChain, u: Monomial, v: Monomial) -> MoveChain:
    """Project a quadratic chain over the reflected points onto the nonnegative ones.

    Every source move contributes one two-slot hop between the projections of
    its before/after lists, and consecutive source steps are glued by
    adjacent-swap hops; the projections of the endpoints are u and v
    themselves, so the output is a quadratic chain from u to v whose factors
    all stay nonnegative.
    """
    if chain.start != u or chain.end != v:
        raise InvariantViolation("chain endpoints do not match u and v")
    for m in (u, v):
        for f in m.factors:
            if any(x < 0 for x in f):
                raise InvariantViolation(f"endpoint factor {f} is not nonnegative")
    for step in chain.steps:
        if step.lhs.degree != 2:
            raise InvariantViolation("descent needs a chain of quadratic moves")

    n = u.dim
    out_monomials: list[Monomial] = [u]
    out_steps: list[ChainStep] = []

    def emit_hop(before: OrderedList, after: OrderedList, slots) -> None:
        """Record the projected move between two lists differing in two slots."""
        cs_b, mono_b = nonnegative_projection(before)
        cs_a, mono_a = nonnegative_projection(after)
        fixed = [j for j in range(len(before)) if j not in slots]
        for j in fixed:
            if cs_b[j] != cs_a[j]:
                raise InvariantViolation("projection moved an untouched slot")
        if mono_b == mono_a:
            return
        if out_monomials[-1] != mono_b:
            raise InvariantViolation("descended chain lost its thread")
        lhs = Monomial(n, tuple(cs_b[j] for j in slots))
        rhs = Monomial(n, tuple(cs_a[j] for j in slots))
        cof = Monomial(n, tuple(cs_b[j] for j in fixed))
        out_steps.append(ChainStep(lhs, rhs, cof))
        out_monomials.append(mono_a)

    def as_signed(m: Monomial) -> list[SignedPoint]:
        return [canonical_signed_point(f) for f in m.factors]

    current: OrderedList = ordered_list(as_signed(u))

    for step in chain.steps:
        gamma = tuple(sorted(as_signed(step.cofactor)))
        pre = gamma + tuple(sorted(as_signed(step.lhs)))
        post = gamma + tuple(sorted(as_signed(step.rhs)))

        def swap_emit(before, after, pos):
            emit_hop(before, after, (pos, pos + 1))

        current = _bridge_permutation(current, pre, swap_emit)
        emit_hop(current, post, (len(current) - 2, len(current) - 1))
        current = post

    final: OrderedList = ordered_list(as_signed(v))
    current = _bridge_permutation(current, final, lambda b, a, p: emit_hop(b, a, (p, p + 1)))

    if out_monomials[-1] != v:
        raise InvariantViolation("descended chain did not reach its endpoint")
    return MoveChain(tuple(out_monomials), tuple(out_steps))
