"""Integer lattice vectors, sign vectors, signed points, monomials, and binomial moves.

Everything here is an immutable value built on plain Python ints, so all
arithmetic is exact and safe to share across threads.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, NamedTuple, Sequence

from .errors import DimensionMismatch, InvariantViolation

Vec = tuple[int, ...]


def vec(values: Iterable[int]) -> Vec:
    """Coerce an iterable of integers into a lattice vector."""
    out = tuple(values)
    for x in out:
        if not isinstance(x, int):
            raise InvariantViolation(f"lattice vectors take exact integers, got {x!r}")
    return out


def check_same_dim(a: Sequence[int], b: Sequence[int]) -> None:
    if len(a) != len(b):
        raise DimensionMismatch(f"dimension mismatch: {len(a)} vs {len(b)}")


def check_sign_vector(e: Sequence[int]) -> None:
    for s in e:
        if s not in (-1, 1):
            raise InvariantViolation(f"sign vector entries must be -1 or +1, got {s!r}")


def add(a: Vec, b: Vec) -> Vec:
    check_same_dim(a, b)
    return tuple(x + y for x, y in zip(a, b))


def sub(a: Vec, b: Vec) -> Vec:
    check_same_dim(a, b)
    return tuple(x - y for x, y in zip(a, b))


def zero(n: int) -> Vec:
    return (0,) * n


def reflect(p: Vec, e: Vec) -> Vec:
    """Apply a sign vector coordinatewise: (p, e) -> (e_1 p_1, ..., e_n p_n)."""
    check_same_dim(p, e)
    check_sign_vector(e)
    return tuple(s * x for x, s in zip(p, e))


def separable(a: Vec, b: Vec) -> bool:
    """True when some coordinate carries strictly opposite signs in a and b."""
    check_same_dim(a, b)
    return any(x * y < 0 for x, y in zip(a, b))


def all_sign_vectors(n: int) -> list[Vec]:
    """All 2^n sign vectors of length n, in a fixed order."""
    out = [()]
    for _ in range(n):
        out = [e + (s,) for e in out for s in (1, -1)]
    return [tuple(e) for e in out]


class SignedPoint(NamedTuple):
    """A nonnegative base point with a sign vector, in canonical form.

    Canonical means the sign is +1 wherever the base coordinate is 0, so each
    lattice point has exactly one signed representation.
    """

    base: Vec
    sign: Vec

    def value(self) -> Vec:
        return tuple(s * x for x, s in zip(self.base, self.sign))


def canonical_signed_point(p: Vec) -> SignedPoint:
    """Split p into (|p|, sign) with sign +1 on zero coordinates."""
    base = tuple(abs(x) for x in p)
    sign = tuple(-1 if x < 0 else 1 for x in p)
    return SignedPoint(base, sign)


def signed_point(a: Vec, e: Vec) -> SignedPoint:
    """Canonicalize an explicit (base, sign) pair; the base must be nonnegative."""
    check_same_dim(a, e)
    check_sign_vector(e)
    if any(x < 0 for x in a):
        raise InvariantViolation(f"signed point base must be nonnegative, got {a}")
    sign = tuple(1 if x == 0 else s for x, s in zip(a, e))
    return SignedPoint(tuple(a), sign)


OrderedList = tuple[SignedPoint, ...]


def ordered_list(entries: Iterable[SignedPoint]) -> OrderedList:
    """Validate a sequence of signed points as an ordered list (r >= 1, one dimension)."""
    out = tuple(entries)
    if not out:
        raise InvariantViolation("ordered lists must have at least one entry")
    n = len(out[0].base)
    for sp in out:
        if len(sp.base) != n or len(sp.sign) != n:
            raise DimensionMismatch("ordered list entries must share one dimension")
    return out


@dataclass(frozen=True)
class Monomial:
    """A multiset of lattice points from a configuration, kept in sorted order.

    Equality and hashing are structural: two monomials are equal exactly when
    they contain the same factors with the same multiplicities.
    """

    dim: int
    factors: tuple[Vec, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "factors", tuple(sorted(self.factors)))
        for f in self.factors:
            if len(f) != self.dim:
                raise DimensionMismatch(
                    f"factor {f} does not live in dimension {self.dim}"
                )

    @classmethod
    def of(cls, factors: Iterable[Vec], dim: int | None = None) -> "Monomial":
        fs = tuple(tuple(f) for f in factors)
        if dim is None:
            if not fs:
                raise InvariantViolation("empty monomial needs an explicit dimension")
            dim = len(fs[0])
        return cls(dim, fs)

    @property
    def degree(self) -> int:
        return len(self.factors)

    def weight(self) -> Vec:
        total = [0] * self.dim
        for f in self.factors:
            for k, x in enumerate(f):
                total[k] += x
        return tuple(total)

    def times(self, other: "Monomial") -> "Monomial":
        if other.dim != self.dim:
            raise DimensionMismatch("cannot multiply monomials of different dimensions")
        return Monomial(self.dim, self.factors + other.factors)

    def contains(self, other: "Monomial") -> bool:
        """Sub-multiset test."""
        remaining = list(self.factors)
        for f in other.factors:
            try:
                remaining.remove(f)
            except ValueError:
                return False
        return True

    def without(self, other: "Monomial") -> "Monomial":
        """Remove the factors of `other`, raising if one is absent."""
        remaining = list(self.factors)
        for f in other.factors:
            try:
                remaining.remove(f)
            except ValueError:
                raise InvariantViolation(f"factor {f} not present in {self.factors}")
        return Monomial(self.dim, tuple(remaining))


def weight(m: Monomial) -> Vec:
    """Componentwise sum of a monomial's factors; the empty sum is the zero vector."""
    return m.weight()


@dataclass(frozen=True)
class BinomialMove:
    """An unordered pair of monomials with equal degree and equal weight.

    Weight balance is checked at construction, so the difference of the two
    sides always lies in the toric ideal of any configuration containing the
    factors.  The sides are stored in sorted order so equal moves compare
    equal.
    """

    lhs: Monomial
    rhs: Monomial

    def __post_init__(self) -> None:
        if self.lhs.dim != self.rhs.dim:
            raise DimensionMismatch("move sides live in different dimensions")
        if self.lhs.degree != self.rhs.degree:
            raise InvariantViolation(
                f"move sides have different degrees: {self.lhs.degree} vs {self.rhs.degree}"
            )
        if self.lhs.weight() != self.rhs.weight():
            raise InvariantViolation(
                f"move is not weight balanced: {self.lhs.weight()} vs {self.rhs.weight()}"
            )
        if self.rhs.factors < self.lhs.factors:
            a, b = self.lhs, self.rhs
            object.__setattr__(self, "lhs", b)
            object.__setattr__(self, "rhs", a)

    @property
    def degree(self) -> int:
        return self.lhs.degree

    def is_trivial(self) -> bool:
        return self.lhs == self.rhs
