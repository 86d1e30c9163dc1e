"""Finite partial bijections: the elements of I_n and of J_n (order-preserving ones)."""
from __future__ import annotations

import os
import re
from fractions import Fraction
from itertools import combinations, permutations

from .chain import format_rational
from .errors import CapExceeded, CarrierMismatch

DEFAULT_ENUM_CAP = 6


def env_cap(default: int) -> int:
    raw = os.environ.get("ELLIS_LAB_CAP")
    return int(raw) if raw else default


def carrier_n(n: int) -> frozenset:
    return frozenset(range(1, n + 1))


class PartialBijection:
    """An injective map between subsets of a finite carrier.

    Equality is extensional: two maps are equal when they have the same
    carrier, domain and values.
    """

    __slots__ = ("carrier", "_map", "_items", "_hash")

    def __init__(self, pairs, carrier):
        mapping = dict(pairs)
        carrier = frozenset(carrier)
        if len(set(mapping.values())) != len(mapping):
            raise ValueError(f"not injective: {mapping}")
        if not carrier.issuperset(mapping) or not carrier.issuperset(mapping.values()):
            raise ValueError("domain and range must lie in the carrier")
        self.carrier = carrier
        self._map = mapping
        self._items = tuple(sorted(mapping.items()))
        self._hash = hash((self._items, carrier))

    @classmethod
    def identity(cls, carrier):
        return cls(((x, x) for x in carrier), carrier)

    @classmethod
    def empty(cls, carrier):
        return cls((), carrier)

    def __call__(self, x):
        return self._map.get(x)

    def items(self):
        return self._items

    @property
    def domain(self) -> frozenset:
        return frozenset(self._map)

    @property
    def image(self) -> frozenset:
        return frozenset(self._map.values())

    def __len__(self):
        return len(self._map)

    def __eq__(self, other):
        if not isinstance(other, PartialBijection):
            return NotImplemented
        return self._items == other._items and self.carrier == other.carrier

    def __hash__(self):
        return self._hash

    def __str__(self):
        return "{" + ", ".join(f"{_fmt(x)}->{_fmt(y)}" for x, y in self._items) + "}"

    def __repr__(self):
        return f"PartialBijection({self})"

    def to_json(self):
        return [[_json(x), _json(y)] for x, y in self._items]


def _fmt(x) -> str:
    return format_rational(x) if isinstance(x, Fraction) else str(x)


def _json(x):
    return format_rational(x) if isinstance(x, Fraction) else x


_PAIR_RE = re.compile(r"\s*([^,{}>]+?)\s*->\s*([^,{}]+?)\s*$")


def parse_partial(text: str, carrier, rational: bool = False) -> PartialBijection:
    """Inverse of ``str(f)`` for the canonical ``{x1->y1, x2->y2}`` form."""
    body = text.strip()
    if not (body.startswith("{") and body.endswith("}")):
        raise ValueError(f"expected '{{...}}', got {text!r}")
    body = body[1:-1].strip()
    conv = Fraction if rational else int
    pairs = []
    for chunk in body.split(",") if body else []:
        m = _PAIR_RE.match(chunk)
        if not m:
            raise ValueError(f"bad pair {chunk!r}")
        pairs.append((conv(m.group(1)), conv(m.group(2))))
    return PartialBijection(pairs, carrier)


def compose(f: PartialBijection, g: PartialBijection) -> PartialBijection:
    """f o g (g applied first), defined on D(g) intersected with g^-1(D(f))."""
    if f.carrier != g.carrier:
        raise CarrierMismatch("partial bijections live on different carriers")
    fm = f._map
    return PartialBijection(
        ((x, fm[y]) for x, y in g._items if y in fm), f.carrier)


def invert(f: PartialBijection) -> PartialBijection:
    return PartialBijection(((y, x) for x, y in f._items), f.carrier)


def is_order_preserving(f: PartialBijection) -> bool:
    ys = [y for _, y in f._items]
    return all(a < b for a, b in zip(ys, ys[1:]))


def rank(f: PartialBijection) -> int:
    return len(f)


def enumerate_monoid(n: int, mode: str = "I", cap: int | None = None) -> list[PartialBijection]:
    """All of I_n (mode "I") or J_n (mode "J") on the carrier {1..n}.

    Sorted by rank, then domain, then image.
    """
    if cap is None:
        cap = env_cap(DEFAULT_ENUM_CAP)
    if n < 1:
        raise ValueError("n must be a positive integer")
    if n > cap:
        raise CapExceeded(f"n={n} exceeds the enumeration cap {cap}")
    if mode not in ("I", "J"):
        raise ValueError(f"mode must be 'I' or 'J', got {mode!r}")
    carrier = carrier_n(n)
    points = sorted(carrier)
    images = permutations if mode == "I" else combinations
    out = []
    for k in range(n + 1):
        for dom in combinations(points, k):
            for img in images(points, k):
                out.append(PartialBijection(zip(dom, img), carrier))
    return out
