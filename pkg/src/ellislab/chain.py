"""Exact model of the chain Q and its compactified point spaces.

Points of every space are small frozen dataclasses (``Inf``, ``Sup``,
``Infinity``, ``Tagged``, ``Plain``, ``Gap``).  Gaps of Q are restricted to
quadratic cuts ``r + s*sqrt(2)`` with ``s != 0``, which keeps every comparison
exactly decidable with rational arithmetic.

Two families of spaces live here:

* discrete-chain spaces ``BmX -> {BlrX, BudX} -> BplusX -> AlphaX``
* LOTS spaces ``CmX -> CX``

and the quotient maps between them.
"""
from __future__ import annotations

import enum
import functools
import re
from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from math import floor, isqrt
from typing import Optional, Union

from .errors import EmptySigma, IllegalPoint, NoArrow, RationalCut

LT, EQ, GT = -1, 0, 1

Rational = Fraction


def as_rational(x) -> Fraction:
    """Coerce ints, strings and Fractions; floats are refused (no rounding)."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool) or isinstance(x, float):
        raise TypeError(f"refusing inexact value {x!r}")
    if isinstance(x, (int, str)):
        return Fraction(x)
    raise TypeError(f"cannot interpret {x!r} as a rational")


def _sign(x) -> int:
    return (x > 0) - (x < 0)


def sign_a_plus_b_sqrt2(a: Fraction, b: Fraction) -> int:
    """Exact sign of ``a + b*sqrt(2)`` for rational a, b."""
    sa, sb = _sign(a), _sign(b)
    if sb == 0:
        return sa
    if sa == 0 or sa == sb:
        return sb
    # opposite signs: compare a^2 with 2 b^2 (never equal, sqrt(2) irrational)
    if a * a > 2 * b * b:
        return sa
    return sb


# Gap cuts
# --------

@dataclass(frozen=True)
class GapCut:
    """The cut of Q at the irrational number ``r + s*sqrt(2)``."""

    r: Fraction
    s: Fraction

    def __post_init__(self):
        object.__setattr__(self, "r", as_rational(self.r))
        object.__setattr__(self, "s", as_rational(self.s))
        if self.s == 0:
            raise RationalCut(f"gap({self.r},0) is a rational cut, not a gap")

    def cmp_rational(self, q) -> int:
        """Sign of ``(r + s*sqrt(2)) - q``."""
        return sign_a_plus_b_sqrt2(self.r - as_rational(q), self.s)

    def below(self, q) -> bool:
        """True iff the rational q lies in the lower class of the cut."""
        return self.cmp_rational(q) > 0

    def cmp_gap(self, other: "GapCut") -> int:
        return sign_a_plus_b_sqrt2(self.r - other.r, self.s - other.s)

    def bounds(self, k: int) -> tuple[Fraction, Fraction]:
        """Rational lo < value < hi with width |s| / 2**k."""
        d = 1 << k
        p = isqrt(2 * d * d)
        lo_root, hi_root = Fraction(p, d), Fraction(p + 1, d)
        if self.s > 0:
            return self.r + self.s * lo_root, self.r + self.s * hi_root
        return self.r + self.s * hi_root, self.r + self.s * lo_root

    def __str__(self):
        return f"gap({format_rational(self.r)},{format_rational(self.s)})"


def make_gap(r, s) -> GapCut:
    return GapCut(as_rational(r), as_rational(s))


Value = Union[Fraction, GapCut]


def cmp_values(a: Value, b: Value) -> int:
    """Compare two finite locations (rationals or gap cuts) exactly."""
    if isinstance(a, GapCut):
        if isinstance(b, GapCut):
            return a.cmp_gap(b)
        return a.cmp_rational(b)
    if isinstance(b, GapCut):
        return -b.cmp_rational(a)
    return _sign(a - b)


def rational_between(lo: Optional[Value], hi: Optional[Value]) -> Fraction:
    """A rational strictly between two locations (None = unbounded)."""
    if lo is not None and hi is not None and cmp_values(lo, hi) >= 0:
        raise ValueError(f"empty interval ({lo}, {hi})")
    if lo is None and hi is None:
        return Fraction(0)
    if lo is None:
        top = hi.bounds(4)[0] if isinstance(hi, GapCut) else hi
        return Fraction(floor(top) - 1)
    if hi is None:
        bot = lo.bounds(4)[1] if isinstance(lo, GapCut) else lo
        return Fraction(floor(bot) + 1)
    k = 4
    while True:
        a = lo.bounds(k)[1] if isinstance(lo, GapCut) else lo
        b = hi.bounds(k)[0] if isinstance(hi, GapCut) else hi
        if a < b:
            return (a + b) / 2
        k += 4


# Spaces and points
# -----------------

class Space(enum.Enum):
    BmX = "BmX"
    BlrX = "BlrX"
    BudX = "BudX"
    BplusX = "BplusX"
    AlphaX = "AlphaX"
    CmX = "CmX"
    CX = "CX"

    def __str__(self):
        return self.value


DISCRETE_SPACES = (Space.BmX, Space.BlrX, Space.BudX, Space.BplusX, Space.AlphaX)
LOTS_SPACES = (Space.CmX, Space.CX)


@dataclass(frozen=True)
class Inf:
    def __str__(self):
        return "inf"


@dataclass(frozen=True)
class Sup:
    def __str__(self):
        return "sup"


@dataclass(frozen=True)
class Infinity:
    def __str__(self):
        return "oo"


@dataclass(frozen=True)
class Tagged:
    """The point (x, j) of X (x) {-1, 0, 1}; X itself is the j = 0 layer."""

    x: Fraction
    j: int = 0

    def __post_init__(self):
        object.__setattr__(self, "x", as_rational(self.x))
        if self.j not in (-1, 0, 1):
            raise IllegalPoint(f"tag must be -1, 0 or +1, got {self.j!r}")

    def __str__(self):
        return f"{format_rational(self.x)}@{('-1', '0', '+1')[self.j + 1]}"


@dataclass(frozen=True)
class Plain:
    """A point of Q inside the LOTS spaces (no side tags)."""

    x: Fraction

    def __post_init__(self):
        object.__setattr__(self, "x", as_rational(self.x))

    def __str__(self):
        return format_rational(self.x)


@dataclass(frozen=True)
class Gap:
    c: GapCut

    def __str__(self):
        return str(self.c)


INF, SUP, INFINITY = Inf(), Sup(), Infinity()

Point = Union[Inf, Sup, Infinity, Tagged, Plain, Gap]


def is_legal(space: Space, p) -> bool:
    if isinstance(p, Gap):
        return space is not Space.AlphaX
    if isinstance(p, (Inf, Sup)):
        return space in (Space.BmX, Space.BudX, Space.CmX)
    if isinstance(p, Infinity):
        return space in (Space.BlrX, Space.BplusX, Space.AlphaX, Space.CX)
    if isinstance(p, Tagged):
        if space in (Space.BmX, Space.BlrX):
            return True
        if space in (Space.BudX, Space.BplusX):
            return p.j != 1  # the class {(x,-1),(x,+1)} is stored as (x,-1)
        return space is Space.AlphaX and p.j == 0
    if isinstance(p, Plain):
        return space in LOTS_SPACES
    return False


def check_legal(space: Space, p) -> None:
    if not is_legal(space, p):
        raise IllegalPoint(f"{p!r} is not a point of {space}")


def is_x_point(p) -> bool:
    """True for points of the chain X itself (as opposed to added points)."""
    return (isinstance(p, Tagged) and p.j == 0) or isinstance(p, Plain)


def location(p) -> tuple[int, Optional[Value]]:
    if isinstance(p, Inf):
        return (0, None)
    if isinstance(p, Sup):
        return (2, None)
    if isinstance(p, Infinity):
        return (3, None)
    if isinstance(p, (Tagged, Plain)):
        return (1, p.x)
    if isinstance(p, Gap):
        return (1, p.c)
    raise IllegalPoint(f"not a point: {p!r}")


def _tag(p) -> int:
    return p.j if isinstance(p, Tagged) else 0


def cmp_points(p, q) -> int:
    """Order shared by all spaces.

    Inf < finite points < Sup < Infinity; finite points by value, then by
    tag.  On BmX and CmX this is the natural order; on quotient spaces it is
    the order of canonical representatives, with Infinity placed last.
    """
    (rp, vp), (rq, vq) = location(p), location(q)
    if rp != rq:
        return _sign(rp - rq)
    if rp != 1:
        return EQ
    c = cmp_values(vp, vq)
    if c:
        return c
    if isinstance(p, Gap) or isinstance(q, Gap):
        return EQ
    return _sign(_tag(p) - _tag(q))


def cmp_extended(space: Space, p, q) -> int:
    check_legal(space, p)
    check_legal(space, q)
    return cmp_points(p, q)


point_key = functools.cmp_to_key(cmp_points)


# Quotient lattice
# ----------------

def _collapse_ends(p):
    return INFINITY if isinstance(p, (Inf, Sup)) else p


def _glue_sides(p):
    if isinstance(p, Tagged) and p.j == 1:
        return Tagged(p.x, -1)
    return p


def _to_alpha(p):
    return p if is_x_point(p) else INFINITY


_STEPS = {
    (Space.BmX, Space.BlrX): _collapse_ends,
    (Space.BmX, Space.BudX): _glue_sides,
    (Space.BlrX, Space.BplusX): _glue_sides,
    (Space.BudX, Space.BplusX): _collapse_ends,
    (Space.BplusX, Space.AlphaX): _to_alpha,
    (Space.CmX, Space.CX): _collapse_ends,
}

# (source, target) -> elementary?  Non-identity arrows of the two diagrams.
_ARROWS = {
    (Space.BmX, Space.BlrX): True,
    (Space.BmX, Space.BudX): False,
    (Space.BmX, Space.BplusX): False,
    (Space.BmX, Space.AlphaX): True,
    (Space.BlrX, Space.BplusX): False,
    (Space.BlrX, Space.AlphaX): True,
    (Space.BudX, Space.BplusX): True,
    (Space.BudX, Space.AlphaX): True,
    (Space.BplusX, Space.AlphaX): True,
    (Space.CmX, Space.CX): True,
}


@dataclass(frozen=True)
class Arrow:
    source: Space
    target: Space
    elementary: bool


def lattice_arrows() -> list[Arrow]:
    return [Arrow(a, b, e) for (a, b), e in _ARROWS.items()]


def elementary_steps() -> list[tuple[Space, Space]]:
    """The generating (covering) arrows of both diagrams."""
    return list(_STEPS)


def has_arrow(source: Space, target: Space) -> bool:
    return source is target or (source, target) in _ARROWS


@functools.lru_cache(maxsize=None)
def find_path(source: Space, target: Space) -> tuple[Space, ...]:
    """A chain of elementary steps from source to target (BFS order)."""
    if not has_arrow(source, target):
        raise NoArrow(f"no map of compactifications {source} -> {target}")
    seen = {source: (source,)}
    queue = deque([source])
    while queue:
        a = queue.popleft()
        if a is target:
            return seen[a]
        for (x, y) in _STEPS:
            if x is a and y not in seen:
                seen[y] = seen[a] + (y,)
                queue.append(y)
    raise NoArrow(f"no map of compactifications {source} -> {target}")


def apply_path(path, p):
    check_legal(path[0], p)
    for a, b in zip(path, path[1:]):
        p = _STEPS[(a, b)](p)
    return p


def quotient_point(source: Space, target: Space, p):
    return apply_path(find_path(source, target), p)


def base_space(space: Space) -> Space:
    """The top space (BmX or CmX) that `space` is a quotient of."""
    return Space.BmX if space in DISCRETE_SPACES else Space.CmX


def fiber_contains(arrow: tuple[Space, Space], p) -> bool:
    """Is `p` (a point of the source) in the collapsed fiber of an elementary arrow?"""
    source, target = arrow
    if not _ARROWS.get(arrow, False):
        raise NoArrow(f"{source} -> {target} is not an elementary arrow")
    check_legal(source, p)
    if target is Space.AlphaX:
        return not is_x_point(p)
    return isinstance(p, (Inf, Sup))


# Stabilizer partitions
# ---------------------

@dataclass(frozen=True)
class Cell:
    """A singleton {lo} (when `point`) or the open interval (lo, hi) of Q.

    None endpoints stand for the unbounded ends.
    """

    lo: Optional[Fraction]
    hi: Optional[Fraction]
    point: bool = False

    def contains(self, v: Value) -> bool:
        if self.point:
            return not isinstance(v, GapCut) and v == self.lo
        if self.lo is not None and cmp_values(v, self.lo) <= 0:
            return False
        if self.hi is not None and cmp_values(v, self.hi) >= 0:
            return False
        return True

    def within(self, other: "Cell") -> bool:
        if self.point:
            return other.contains(self.lo)
        if other.point:
            return False
        lo_ok = other.lo is None or (self.lo is not None and other.lo <= self.lo)
        hi_ok = other.hi is None or (self.hi is not None and self.hi <= other.hi)
        return lo_ok and hi_ok

    def __str__(self):
        if self.point:
            return "{" + format_rational(self.lo) + "}"
        lo = "<-" if self.lo is None else format_rational(self.lo)
        hi = "->" if self.hi is None else format_rational(self.hi)
        return f"({lo},{hi})"


def stabilizer_partition(sigma) -> tuple[Cell, ...]:
    """Orbits of the pointwise stabilizer of sigma acting on the chain Q."""
    pts = sorted({as_rational(x) for x in sigma})
    if not pts:
        raise EmptySigma("sigma must be a nonempty finite set")
    cells = [Cell(None, pts[0])]
    for a, b in zip(pts, pts[1:]):
        cells += [Cell(a, a, True), Cell(a, b)]
    cells += [Cell(pts[-1], pts[-1], True), Cell(pts[-1], None)]
    return tuple(cells)


def cell_index(cells, v: Value) -> int:
    for i, c in enumerate(cells):
        if c.contains(v):
            return i
    raise ValueError(f"{v} is not covered")


def refines(fine, coarse) -> bool:
    return all(any(c.within(d) for d in coarse) for c in fine)


# Canonical text form
# -------------------

def format_rational(q: Fraction) -> str:
    return f"{q.numerator}/{q.denominator}"


_RAT = r"-?\d+(?:/\d+)?"
_TAGGED_RE = re.compile(rf"^({_RAT})@([-+]?[01])$")
_GAP_RE = re.compile(rf"^gap\(({_RAT}),({_RAT})\)$")
_RAT_RE = re.compile(rf"^{_RAT}$")


def parse_rational(s: str) -> Fraction:
    s = s.strip()
    if not _RAT_RE.match(s):
        raise ValueError(f"not a rational 'p/q': {s!r}")
    return Fraction(s)


def format_point(p) -> str:
    return str(p)


def parse_point(s: str):
    s = s.strip()
    if s == "inf":
        return INF
    if s == "sup":
        return SUP
    if s == "oo":
        return INFINITY
    m = _TAGGED_RE.match(s)
    if m:
        j = int(m.group(2))
        return Tagged(parse_rational(m.group(1)), j)
    m = _GAP_RE.match(s)
    if m:
        return Gap(make_gap(parse_rational(m.group(1)), parse_rational(m.group(2))))
    if _RAT_RE.match(s):
        return Plain(parse_rational(s))
    raise ValueError(f"unrecognised point {s!r}")


def canonical_text(space: Space, p) -> str:
    check_legal(space, p)
    return format_point(p)
