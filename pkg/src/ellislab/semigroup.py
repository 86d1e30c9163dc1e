"""Finite monoids given by multiplication tables.

Elements are indices ``0..order-1``; ``labels`` keeps a side table back to
whatever the indices stand for (partial bijections, or the adjoined zero of a
Rees quotient).  Products are read as ``mul[x][y] = x . y``.
"""
from __future__ import annotations

import functools
from dataclasses import dataclass
from typing import NamedTuple, Optional

from .errors import CapExceeded, CarrierMismatch, NotAnIdeal, NotPartialMapMonoid
from .partial import PartialBijection, compose, env_cap, invert, rank

DEFAULT_CLOSURE_CAP = 20000
DEFAULT_IDEAL_CAP = 500


class _Zero:
    """Label of a zero adjoined by a Rees quotient."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "0"

    __str__ = __repr__


ZERO = _Zero()


@dataclass(frozen=True)
class FiniteMonoid:
    labels: tuple
    mul: tuple
    identity: int
    zero: Optional[int] = None
    star: Optional[tuple] = None
    zero_adjoined: bool = False

    @property
    def order(self) -> int:
        return len(self.mul)

    def __len__(self):
        return len(self.mul)

    @functools.cached_property
    def _index(self):
        return {lab: i for i, lab in enumerate(self.labels)}

    def index(self, label) -> int:
        return self._index[label]

    def product(self, *xs) -> int:
        out = self.identity
        for x in xs:
            out = self.mul[out][x]
        return out

    def check_invariants(self) -> list[str]:
        """Exhaustively test the monoid laws; returns the violated ones."""
        n, m, e = self.order, self.mul, self.identity
        problems = []
        rng = range(n)
        if any(m[x][y] not in rng for x in rng for y in rng):
            problems.append("table not closed")
            return problems
        if any(m[m[x][y]][z] != m[x][m[y][z]] for x in rng for y in rng for z in rng):
            problems.append("associativity")
        if any(m[e][x] != x or m[x][e] != x for x in rng):
            problems.append("identity")
        z = self.zero
        if z is not None and any(m[z][x] != z or m[x][z] != z for x in rng):
            problems.append("zero")
        s = self.star
        if s is not None:
            if any(s[s[x]] != x for x in rng):
                problems.append("star is not an involution")
            if any(s[m[x][y]] != m[s[y]][s[x]] for x in rng for y in rng):
                problems.append("star does not reverse products")
        return problems

    def to_json(self) -> dict:
        return {
            "order": self.order,
            "identity": self.identity,
            "zero": self.zero,
            "mul": [list(row) for row in self.mul],
            "star": list(self.star) if self.star is not None else None,
            "labels": [str(lab) for lab in self.labels],
        }

    @classmethod
    def from_json(cls, data: dict) -> "FiniteMonoid":
        mul = tuple(tuple(int(v) for v in row) for row in data["mul"])
        if len(mul) != data["order"] or any(len(row) != len(mul) for row in mul):
            raise ValueError("mul must be an order x order table")
        star = data.get("star")
        return cls(
            labels=tuple(data.get("labels") or range(len(mul))),
            mul=mul,
            identity=int(data["identity"]),
            zero=data.get("zero"),
            star=tuple(star) if star is not None else None,
        )


def find_identity(mul) -> Optional[int]:
    rng = range(len(mul))
    for e in rng:
        if all(mul[e][x] == x == mul[x][e] for x in rng):
            return e
    return None


def find_zero(mul) -> Optional[int]:
    rng = range(len(mul))
    for z in rng:
        if all(mul[z][x] == z == mul[x][z] for x in rng):
            return z
    return None


def from_table(mul, labels=None, star=None) -> FiniteMonoid:
    mul = tuple(tuple(row) for row in mul)
    e = find_identity(mul)
    if e is None:
        raise ValueError("table has no identity element")
    return FiniteMonoid(
        labels=tuple(labels) if labels is not None else tuple(range(len(mul))),
        mul=mul, identity=e, zero=find_zero(mul),
        star=tuple(star) if star is not None else None)


def left_zero_with_identity() -> FiniteMonoid:
    """{e, a, b} with a.x = a, b.x = b for x in {a, b}: not an inverse monoid."""
    return from_table([[0, 1, 2], [1, 1, 1], [2, 2, 2]], labels=("e", "a", "b"))


def monoid_of_partial_maps(elements) -> FiniteMonoid:
    """Tabulate a composition-closed list of partial bijections containing the identity."""
    elements = list(elements)
    index = {f: i for i, f in enumerate(elements)}
    try:
        mul = tuple(tuple(index[compose(f, g)] for g in elements) for f in elements)
    except KeyError:
        raise ValueError("elements are not closed under composition") from None
    e = find_identity(mul)
    if e is None:
        raise ValueError("no identity among the elements")
    star = None
    inverses = [index.get(invert(f)) for f in elements]
    if all(i is not None for i in inverses):
        star = tuple(inverses)
    return FiniteMonoid(tuple(elements), mul, e, find_zero(mul), star)


def close_under_composition(generators, cap: int | None = None) -> FiniteMonoid:
    """The submonoid generated by a nonempty list of partial bijections."""
    if cap is None:
        cap = env_cap(DEFAULT_CLOSURE_CAP)
    generators = list(generators)
    if not generators:
        raise ValueError("need at least one generator")
    carrier = generators[0].carrier
    if any(g.carrier != carrier for g in generators):
        raise CarrierMismatch("generators live on different carriers")
    ident = PartialBijection.identity(carrier)
    elements = [ident]
    seen = {ident}
    frontier = [ident]
    while frontier:
        nxt = []
        for x in frontier:
            for g in generators:
                y = compose(x, g)
                if y not in seen:
                    seen.add(y)
                    elements.append(y)
                    nxt.append(y)
                    if len(elements) > cap:
                        raise CapExceeded(f"closure exceeds {cap} elements")
        frontier = nxt
    return monoid_of_partial_maps(elements)


class InverseReport(NamedTuple):
    ok: bool
    witnesses: list  # (element, [its generalized inverses]) for each failure


def generalized_inverses(S: FiniteMonoid, a: int) -> list[int]:
    m = S.mul
    return [b for b in range(S.order) if m[m[a][b]][a] == a and m[m[b][a]][b] == b]


def check_inverse_monoid(S: FiniteMonoid) -> InverseReport:
    bad = []
    for a in range(S.order):
        inv = generalized_inverses(S, a)
        if len(inv) != 1:
            bad.append((a, inv))
    return InverseReport(not bad, bad)


# Ideals
# ------

@dataclass(frozen=True)
class IdealSet:
    members: frozenset

    def __len__(self):
        return len(self.members)

    def __contains__(self, x):
        return x in self.members


def is_ideal(S: FiniteMonoid, members) -> bool:
    members = set(members)
    m = S.mul
    return all(m[s][i] in members and m[i][s] in members
               for i in members for s in range(S.order))


def star_image(S: FiniteMonoid, members) -> frozenset:
    if S.star is None:
        raise ValueError("monoid carries no involution")
    return frozenset(S.star[i] for i in members)


def rank_ideal(S: FiniteMonoid, n: int) -> IdealSet:
    """Elements whose domain has at most n points."""
    if not all(isinstance(lab, PartialBijection) for lab in S.labels):
        raise NotPartialMapMonoid("rank ideals need a monoid of partial bijections")
    return IdealSet(frozenset(i for i, f in enumerate(S.labels) if rank(f) <= n))


def principal_ideal(S: FiniteMonoid, x: int) -> frozenset:
    m = S.mul
    left = {m[s][x] for s in range(S.order)}
    return frozenset(m[y][t] for y in left for t in range(S.order))


def enumerate_all_ideals(S: FiniteMonoid, cap: int | None = None) -> list[IdealSet]:
    """Every two-sided ideal, the empty set and S included.

    Every ideal is a union of principal ideals SxS, so closing the principal
    ideals under union finds them all.
    """
    if cap is None:
        cap = env_cap(DEFAULT_IDEAL_CAP)
    if S.order > cap:
        raise CapExceeded(f"|S|={S.order} exceeds the ideal-enumeration cap {cap}")
    principals = {principal_ideal(S, x) for x in range(S.order)}
    ideals = {frozenset()}
    for p in sorted(principals, key=len):
        ideals |= {i | p for i in ideals}
    return [IdealSet(i) for i in sorted(ideals, key=lambda s: (len(s), sorted(s)))]


# Rees quotients
# --------------

class ReesQuotient(NamedTuple):
    monoid: FiniteMonoid
    quotient_map: tuple  # index in S -> index in S / I


def adjoin_zero(S: FiniteMonoid) -> FiniteMonoid:
    n = S.order
    mul = tuple(tuple(row) + (n,) for row in S.mul) + ((n,) * (n + 1),)
    star = S.star + (n,) if S.star is not None else None
    return FiniteMonoid(S.labels + (ZERO,), mul, S.identity, n, star, zero_adjoined=True)


def rees_quotient(S: FiniteMonoid, ideal: IdealSet) -> ReesQuotient:
    """Collapse a nonempty ideal to a single zero.

    A zero is adjoined first when S has none.  The involution, when present
    and the ideal is invariant under it, is carried over to the quotient.
    """
    members = frozenset(ideal.members)
    if not members or not members <= set(range(S.order)) or not is_ideal(S, members):
        raise NotAnIdeal("rees_quotient needs a nonempty two-sided ideal")
    base = S
    if S.zero is None:
        base = adjoin_zero(S)
        members = members | {base.zero}
    keep = [i for i in range(base.order) if i not in members]
    zero = len(keep)
    new_index = {old: k for k, old in enumerate(keep)}

    def q(i):
        return new_index.get(i, zero)

    size = zero + 1
    mul = []
    for a in range(size):
        if a == zero:
            mul.append((zero,) * size)
            continue
        row = base.mul[keep[a]]
        mul.append(tuple(q(row[keep[b]]) if b != zero else zero for b in range(size)))
    star = None
    if base.star is not None and star_image(base, members) == members:
        star = tuple(q(base.star[keep[a]]) for a in range(zero)) + (zero,)
    monoid = FiniteMonoid(
        labels=tuple(base.labels[i] for i in keep) + (ZERO,),
        mul=tuple(mul),
        identity=q(base.identity),
        zero=zero,
        star=star,
        zero_adjoined=base.zero_adjoined,
    )
    return ReesQuotient(monoid, tuple(q(i) for i in range(S.order)))


def check_homomorphism(h, S: FiniteMonoid, T: FiniteMonoid) -> bool:
    """Does the index map h: S -> T respect products, the identity and the zero?

    The zero only counts when both monoids have one.
    """
    h = list(h)
    if len(h) != S.order or any(not 0 <= v < T.order for v in h):
        return False
    if h[S.identity] != T.identity:
        return False
    if S.zero is not None and T.zero is not None and h[S.zero] != T.zero:
        return False
    sm, tm = S.mul, T.mul
    rng = range(S.order)
    return all(h[sm[x][y]] == tm[h[x]][h[y]] for x in rng for y in rng)
