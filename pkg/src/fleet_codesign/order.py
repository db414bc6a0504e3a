"""Partial-order algebra: product orders, antichains, and upper sets.

Points are plain tuples of scalars (and strings for categorical
coordinates).  A :class:`ProductOrder` fixes, per coordinate, how the scalar
axis is oriented inside the poset:

* ``"asc"``  -- larger scalar sits higher in the order,
* ``"desc"`` -- larger scalar sits lower,
* ``"cat"``  -- categorical: identical values are Equal, anything else is
  Incomparable.

Antichains always store the *minimal* frontier of whatever order they are
built over; a maximal frontier is an antichain over the opposite order.
"""

from __future__ import annotations

from enum import Enum
from typing import Iterable, Sequence

ASC = "asc"
DESC = "desc"
CAT = "cat"

_VALID_DIRECTIONS = (ASC, DESC, CAT)


class OrderOutcome(Enum):
    LESS_EQ = "less_eq"
    GREATER_EQ = "greater_eq"
    EQUAL = "equal"
    INCOMPARABLE = "incomparable"


class ShapeError(ValueError):
    """Arity or direction mismatch between compared points."""


def _sort_key(point):
    # Mixed scalar/string tuples must sort deterministically.
    return tuple((1, str(v)) if isinstance(v, str) else (0, float(v)) for v in point)


class ProductOrder:
    """Componentwise order over fixed-arity tuples."""

    __slots__ = ("directions", "eps")

    def __init__(self, directions: Sequence[str], eps: float = 0.0):
        directions = tuple(directions)
        for d in directions:
            if d not in _VALID_DIRECTIONS:
                raise ValueError(f"unknown direction {d!r}")
        if eps < 0:
            raise ValueError("eps must be non-negative")
        self.directions = directions
        self.eps = eps

    @property
    def arity(self) -> int:
        return len(self.directions)

    def opposite(self) -> "ProductOrder":
        flip = {ASC: DESC, DESC: ASC, CAT: CAT}
        return ProductOrder(tuple(flip[d] for d in self.directions), self.eps)

    def compare(self, a: Sequence, b: Sequence) -> OrderOutcome:
        if len(a) != self.arity or len(b) != self.arity:
            raise ShapeError(
                f"expected arity {self.arity}, got {len(a)} and {len(b)}"
            )
        can_le = True
        can_ge = True
        for x, y, d in zip(a, b, self.directions):
            if d == CAT:
                if x != y:
                    return OrderOutcome.INCOMPARABLE
                continue
            if x == y or (self.eps > 0 and abs(x - y) <= self.eps):
                continue
            if (x < y) == (d == ASC):
                can_ge = False
            else:
                can_le = False
            if not (can_le or can_ge):
                return OrderOutcome.INCOMPARABLE
        if can_le and can_ge:
            return OrderOutcome.EQUAL
        return OrderOutcome.LESS_EQ if can_le else OrderOutcome.GREATER_EQ

    def leq(self, a, b) -> bool:
        return self.compare(a, b) in (OrderOutcome.LESS_EQ, OrderOutcome.EQUAL)

    def geq(self, a, b) -> bool:
        return self.compare(a, b) in (OrderOutcome.GREATER_EQ, OrderOutcome.EQUAL)

    def __eq__(self, other):
        return (
            isinstance(other, ProductOrder)
            and self.directions == other.directions
            and self.eps == other.eps
        )

    def __hash__(self):
        return hash((self.directions, self.eps))

    def __repr__(self):
        return f"ProductOrder({list(self.directions)!r}, eps={self.eps})"


def compare_product(a: Sequence, b: Sequence, directions: Sequence[str],
                    eps: float = 0.0) -> OrderOutcome:
    """Compare two tuples under per-coordinate goal directions.

    Directions are ``"min"``/``"max"``/``"cat"``.  Each scalar coordinate is
    oriented so that its preferred end is the bottom of the order: LessEq
    means ``a`` is weakly preferred-or-equal toward the bottom on every
    coordinate.
    """
    mapping = {"min": ASC, "max": DESC, "cat": CAT}
    try:
        low = tuple(mapping[d] for d in directions)
    except KeyError as exc:
        raise ValueError(f"unknown direction {exc.args[0]!r}") from None
    return ProductOrder(low, eps=eps).compare(a, b)


class Antichain:
    """Minimal frontier of a set of points under a :class:`ProductOrder`.

    Immutable; ``insert`` and ``merge`` return new antichains.  Elements are
    kept in lexicographic order for deterministic serialization.  Pruning
    uses the exact (strict) comparison regardless of the order's eps.
    """

    __slots__ = ("order", "_elements")

    def __init__(self, order: ProductOrder, elements: Iterable = ()):
        self.order = order
        self._elements: tuple = ()
        acc = self
        for x in elements:
            acc = acc.insert(x)
        self._elements = acc._elements

    @classmethod
    def _raw(cls, order: ProductOrder, elements: tuple) -> "Antichain":
        ac = cls.__new__(cls)
        ac.order = order
        ac._elements = elements
        return ac

    @property
    def elements(self) -> tuple:
        return self._elements

    def insert(self, x) -> "Antichain":
        x = tuple(x)
        kept = []
        for e in self._elements:
            out = self.order.compare(e, x)
            if out in (OrderOutcome.LESS_EQ, OrderOutcome.EQUAL):
                return self  # x is dominated (or duplicate): unchanged
            if out != OrderOutcome.GREATER_EQ:
                kept.append(e)
        kept.append(x)
        kept.sort(key=_sort_key)
        return Antichain._raw(self.order, tuple(kept))

    def merge(self, other: "Antichain") -> "Antichain":
        if other.order != self.order:
            raise ValueError("cannot merge antichains over different orders")
        acc = self
        for x in other._elements:
            acc = acc.insert(x)
        return acc

    def dominates(self, x) -> bool:
        """True iff some frontier element is ⪯ x."""
        return any(self.order.leq(e, x) for e in self._elements)

    def __len__(self):
        return len(self._elements)

    def __iter__(self):
        return iter(self._elements)

    def __contains__(self, x):
        return tuple(x) in self._elements

    def __eq__(self, other):
        return (
            isinstance(other, Antichain)
            and self.order == other.order
            and self._elements == other._elements
        )

    def __hash__(self):
        return hash((self.order, self._elements))

    def __repr__(self):
        return f"Antichain({list(self._elements)!r})"


def antichain_insert(ac: Antichain, x) -> Antichain:
    return ac.insert(x)


def antichain_merge(a: Antichain, b: Antichain) -> Antichain:
    return a.merge(b)


def minimal_elements(points: Iterable, order: ProductOrder) -> tuple:
    """Brute-force minimal elements (pairwise dominance filter)."""
    pts = [tuple(p) for p in points]
    out = []
    for i, p in enumerate(pts):
        dominated = False
        for j, q in enumerate(pts):
            cmp = order.compare(q, p)
            if cmp == OrderOutcome.LESS_EQ:
                dominated = True
                break
            if cmp == OrderOutcome.EQUAL and j < i:
                dominated = True  # keep a single representative of duplicates
                break
        if not dominated:
            out.append(p)
    out.sort(key=_sort_key)
    # drop exact duplicates
    dedup = [p for k, p in enumerate(out) if k == 0 or p != out[k - 1]]
    return tuple(dedup)


class UpperSet:
    """Upward closure of a minimal frontier."""

    __slots__ = ("frontier",)

    def __init__(self, frontier: Antichain):
        self.frontier = frontier

    def __contains__(self, x) -> bool:
        return self.frontier.dominates(x)

    def membership(self, x) -> bool:
        return x in self

    def __repr__(self):
        return f"UpperSet({list(self.frontier)!r})"


def upper_membership(u: UpperSet, x) -> bool:
    return u.membership(x)
