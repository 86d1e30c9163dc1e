"""Witnesses: genuine group elements that realize finite data.

* ``PLAutomorphism``: order automorphisms of Q given by finitely many exact
  breakpoints, slope 1 beyond the outermost ones.
* ``pl_witness``: ultrahomogeneity of Q made constructive.
* ``permutation_witness``: a finitely supported permutation meeting an
  AlphaX observation (the symmetric-group case).
* ``ellis_witness``: a PL automorphism whose canonical extension meets an
  observation over BmX, CmX, CX or AlphaX (order-preserving case).
* ``star_star_witness``: the re-alignment g' in g.St_sigma that stays close
  to h everywhere.
"""
from __future__ import annotations

import functools
from bisect import bisect_right
from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple, Optional

from .chain import (
    INFINITY, Cell, Gap, GapCut, Inf, Infinity, Plain, Space, Sup, Tagged,
    as_rational, cell_index, cmp_values, format_rational, is_x_point, location,
    point_key, rational_between,
)
from .ellis import (
    Cofinite, Exactly, InInterval, Observation, check_alpha_membership,
    check_membership, forced_x_value, target_contains,
)
from .errors import (
    Inconsistent, NotMonotonePairs, PreconditionViolated, UnwitnessableTarget,
)


_value_key = functools.cmp_to_key(cmp_values)


# PL automorphisms of Q
# ---------------------

class PLAutomorphism:
    """Piecewise-linear increasing bijection of Q.

    Breakpoints are kept in normal form (no breakpoint where the slope does
    not change), so equality of objects is equality of maps.
    """

    __slots__ = ("xs", "ys")

    def __init__(self, breakpoints=()):
        pts = sorted((as_rational(x), as_rational(y)) for x, y in breakpoints)
        for (x0, y0), (x1, y1) in zip(pts, pts[1:]):
            if not (x0 < x1 and y0 < y1):
                raise NotMonotonePairs(f"({x0},{y0}) and ({x1},{y1}) are not increasing")
        self.xs, self.ys = _normalize(pts)

    @property
    def breakpoints(self):
        return tuple(zip(self.xs, self.ys))

    def slope_at(self, i: int) -> Fraction:
        """Slope of the segment right after breakpoint i (i = -1: left tail)."""
        if i < 0 or i >= len(self.xs) - 1:
            return Fraction(1)
        return (self.ys[i + 1] - self.ys[i]) / (self.xs[i + 1] - self.xs[i])

    def __call__(self, t):
        t = as_rational(t)
        xs, ys = self.xs, self.ys
        if not xs:
            return t
        i = bisect_right(xs, t) - 1
        if i < 0:
            return t + ys[0] - xs[0]
        return ys[i] + self.slope_at(i) * (t - xs[i])

    def image_gap(self, c: GapCut) -> GapCut:
        """Exact image of the cut at r + s*sqrt(2)."""
        xs, ys = self.xs, self.ys
        if not xs:
            return c
        i = sum(1 for x in xs if c.cmp_rational(x) > 0) - 1
        if i < 0:
            return GapCut(c.r + ys[0] - xs[0], c.s)
        a = self.slope_at(i)
        return GapCut(ys[i] + a * (c.r - xs[i]), a * c.s)

    def inverse(self) -> "PLAutomorphism":
        return PLAutomorphism(zip(self.ys, self.xs))

    def compose(self, other: "PLAutomorphism") -> "PLAutomorphism":
        """self after other."""
        inv = other.inverse()
        ts = set(other.xs) | {inv(x) for x in self.xs}
        return PLAutomorphism((t, self(other(t))) for t in ts)

    def __eq__(self, other):
        if not isinstance(other, PLAutomorphism):
            return NotImplemented
        return self.xs == other.xs and self.ys == other.ys

    def __hash__(self):
        return hash((self.xs, self.ys))

    def __repr__(self):
        return f"PLAutomorphism({self.to_json()})"

    def to_json(self):
        return [[format_rational(x), format_rational(y)] for x, y in zip(self.xs, self.ys)]

    @classmethod
    def from_json(cls, data):
        return cls((Fraction(x), Fraction(y)) for x, y in data)


def _normalize(pts):
    n = len(pts)

    def slope(i):  # slope between pts[i] and pts[i+1]; tails have slope 1
        if i < 0 or i >= n - 1:
            return Fraction(1)
        return (pts[i + 1][1] - pts[i][1]) / (pts[i + 1][0] - pts[i][0])

    keep = [p for i, p in enumerate(pts) if slope(i - 1) != slope(i)]
    if not keep and pts:
        # a pure translation still needs one breakpoint
        x, y = pts[0]
        if x != y:
            keep = [(x, y)]
    return tuple(p[0] for p in keep), tuple(p[1] for p in keep)


IDENTITY = PLAutomorphism()


def pl_witness(pairs) -> PLAutomorphism:
    """An increasing PL bijection with g(x_k) = y_k for every given pair."""
    pts = sorted((as_rational(x), as_rational(y)) for x, y in pairs)
    xs = [x for x, _ in pts]
    if len(set(xs)) != len(xs):
        raise NotMonotonePairs("repeated x-coordinate")
    return PLAutomorphism(pts)


class Extension:
    """Canonical extension of g to the points of a compactified space."""

    __slots__ = ("g", "space")

    def __init__(self, g, space: Space):
        self.g = g
        self.space = space

    def __call__(self, p):
        g = self.g
        if isinstance(p, (Inf, Sup, Infinity)):
            return p
        if isinstance(p, Tagged):
            return Tagged(g(p.x), p.j)
        if isinstance(p, Plain):
            return Plain(g(p.x))
        if isinstance(p, Gap):
            return Gap(g.image_gap(p.c))
        raise TypeError(f"not a point: {p!r}")


def extension(g, space: Space) -> Extension:
    return Extension(g, space)


def recheck(obs: Observation, element) -> bool:
    """Does the element meet every constraint of the observation?"""
    return all(target_contains(obs.space, t, element(p)) for p, t in obs.entries)


# Symmetric-group witnesses
# -------------------------

class FinitePermutationWitness:
    """A finite injective assignment, extendable to a permutation of Q."""

    def __init__(self, pairs):
        self.pairs = dict(pairs)
        if len(set(self.pairs.values())) != len(self.pairs):
            raise Inconsistent("assignment is not injective")

    def complete(self) -> dict:
        """A permutation of domain | image extending the assignment."""
        dom, img = set(self.pairs), set(self.pairs.values())
        perm = dict(self.pairs)
        perm.update(zip(sorted(img - dom), sorted(dom - img)))
        return perm

    def __call__(self, p):
        if isinstance(p, Infinity):
            return INFINITY
        perm = self.complete()
        return Tagged(perm.get(p.x, p.x), 0)

    def to_json(self):
        return [[format_rational(x), format_rational(y)] for x, y in sorted(self.pairs.items())]


def _interval_x_candidates(t: InInterval):
    """Rationals y with (y, 0) inside the interval, nearest the middle first."""
    lo = None if t.lo is None else location(t.lo)[1]
    hi = None if t.hi is None else location(t.hi)[1]
    v = rational_between(lo, hi)
    while True:
        yield v
        v = rational_between(lo, v)


def permutation_witness(obs: Observation) -> FinitePermutationWitness:
    verdict = check_alpha_membership(obs, "S")
    if not verdict.consistent:
        raise Inconsistent(f"refuted by clause {verdict.clause}: {verdict.reason}")
    pairs, used = {}, set()
    loose = []
    for p, t in obs.entries:
        if isinstance(p, Infinity):
            continue
        if isinstance(t, Exactly) and isinstance(t.point, Infinity):
            raise UnwitnessableTarget(f"no permutation sends {p} to infinity")
        v = forced_x_value(Space.AlphaX, t)
        if v is not None:
            pairs[p.x] = v.x
            used.add(v.x)
        else:
            loose.append((p, t))
    for p, t in sorted(loose, key=lambda e: point_key(e[0])):
        if isinstance(t, Cofinite):
            banned = {e.x for e in t.excluded} | used
            v = Fraction(1)
            while v in banned:
                v += 1
        else:
            v = next(c for c in _interval_x_candidates(t) if c not in used)
        pairs[p.x] = v
        used.add(v)
    w = FinitePermutationWitness(pairs)
    if not recheck(obs, w):
        raise Inconsistent("internal: permutation witness failed its recheck")
    return w


# Order-preserving witnesses
# --------------------------

class _Bound(NamedTuple):
    value: object  # Fraction or GapCut
    inclusive: bool


def _max_lo(a, b):
    if a is None:
        return b
    if b is None:
        return a
    c = cmp_values(a.value, b.value)
    if c:
        return a if c > 0 else b
    return a if not a.inclusive else b


def _min_hi(a, b):
    if a is None:
        return b
    if b is None:
        return a
    c = cmp_values(a.value, b.value)
    if c:
        return a if c < 0 else b
    return a if not a.inclusive else b


def _ok_lo(v, lo):
    if lo is None:
        return True
    c = cmp_values(v, lo.value)
    return c > 0 or (c == 0 and lo.inclusive)


def _ok_hi(v, hi):
    if hi is None:
        return True
    c = cmp_values(v, hi.value)
    return c < 0 or (c == 0 and hi.inclusive)


class _Anchor:
    __slots__ = ("lo", "hi", "eq", "excl")

    def __init__(self):
        self.lo = self.hi = self.eq = None
        self.excl = set()

    def add_eq(self, y):
        if self.eq is not None and self.eq != y:
            raise Inconsistent("one point pinned to two values")
        self.eq = y
        self.lo = _max_lo(self.lo, _Bound(y, True))
        self.hi = _min_hi(self.hi, _Bound(y, True))


def _endpoint_bounds(t: InInterval, tag: Optional[int]):
    """Bounds on v so that the point (v, tag) (or Plain(v), or a gap image) lies in t."""
    lo = hi = None
    if t.lo is not None:
        a = location(t.lo)[1]
        incl = isinstance(t.lo, Tagged) and tag is not None and tag > t.lo.j
        lo = _Bound(a, incl)
    if t.hi is not None:
        b = location(t.hi)[1]
        incl = isinstance(t.hi, Tagged) and tag is not None and tag < t.hi.j
        hi = _Bound(b, incl)
    return lo, hi


def _point_constraint(anchor: _Anchor, p, t, space: Space):
    tag = p.j if isinstance(p, Tagged) else None
    if isinstance(t, Exactly):
        q = t.point
        same_kind = (isinstance(q, Tagged) and isinstance(p, Tagged) and q.j == p.j) or (
            isinstance(q, Plain) and isinstance(p, Plain))
        if not same_kind:
            raise UnwitnessableTarget(f"only a limit element sends {p} to {q}")
        anchor.add_eq(q.x)
    elif isinstance(t, InInterval):
        lo, hi = _endpoint_bounds(t, tag)
        anchor.lo = _max_lo(anchor.lo, lo)
        anchor.hi = _min_hi(anchor.hi, hi)
    else:
        anchor.excl |= {e.x for e in t.excluded}


def _choose(lo, hi, excl):
    if lo is not None and hi is not None:
        c = cmp_values(lo.value, hi.value)
        if c > 0 or (c == 0 and not (lo.inclusive and hi.inclusive)):
            return None
        if c == 0:
            v = lo.value
            return None if v in excl else v
    a = None if lo is None else lo.value
    b = None if hi is None else hi.value
    v = rational_between(a, b)
    while v in excl:
        v = rational_between(a, v)
    return v


def ellis_witness(obs: Observation, mode: Optional[str] = None) -> PLAutomorphism:
    """A PL automorphism whose extension meets every constraint of obs.

    Works left to right through the constrained locations, keeping each
    chosen value below every later upper bound; that choice never blocks a
    later location, so failure means no single automorphism fits.
    """
    space = obs.space
    if space not in (Space.BmX, Space.CmX, Space.CX, Space.AlphaX):
        raise ValueError(f"no witness construction for {space}")
    if space is Space.AlphaX:
        mode = "Aut"
    verdict = check_membership(obs, mode)
    if not verdict.consistent:
        raise Inconsistent(f"refuted by clause {verdict.clause}: {verdict.reason}")

    anchors: dict = {}
    gap_entries = []
    for p, t in obs.entries:
        if isinstance(p, (Inf, Sup, Infinity)):
            continue
        if isinstance(p, Gap):
            if isinstance(t, Exactly):
                raise UnwitnessableTarget("hitting a prescribed gap exactly is out of reach")
            gap_entries.append((p, t))
            continue
        if isinstance(t, Exactly) and not is_x_point(t.point) and space is Space.AlphaX:
            raise UnwitnessableTarget(f"only a limit element sends {p} to infinity")
        _point_constraint(anchors.setdefault(p.x, _Anchor()), p, t, space)

    if gap_entries:
        # bracket each gap by rationals that no other location separates from it
        locs = []
        for v in sorted((location(p)[1] for p, _ in obs.entries if location(p)[0] == 1),
                        key=_value_key):
            if not locs or cmp_values(locs[-1], v) != 0:
                locs.append(v)
        mids = [rational_between(a, b) for a, b in zip(locs, locs[1:])]
        for p, t in gap_entries:
            i = next(k for k, v in enumerate(locs) if cmp_values(v, p.c) == 0)
            left = mids[i - 1] if i > 0 else None
            right = mids[i] if i < len(mids) else None
            lo, hi = _endpoint_bounds(t, None)
            for t_ in (rational_between(left, p.c), rational_between(p.c, right)):
                a = anchors.setdefault(t_, _Anchor())
                a.lo = _max_lo(a.lo, lo)
                a.hi = _min_hi(a.hi, hi)

    ts = sorted(anchors)
    suffix = [None] * (len(ts) + 1)
    for k in range(len(ts) - 1, -1, -1):
        h = anchors[ts[k]].hi
        strict = None if h is None else _Bound(h.value, False)
        suffix[k] = _min_hi(strict, suffix[k + 1])
    pairs = []
    prev = None
    for k, t_ in enumerate(ts):
        a = anchors[t_]
        lo = _max_lo(a.lo, None if prev is None else _Bound(prev, False))
        hi = _min_hi(a.hi, suffix[k + 1])
        if a.eq is not None:
            v = a.eq if _ok_lo(a.eq, lo) and _ok_hi(a.eq, hi) and a.eq not in a.excl else None
        else:
            v = _choose(lo, hi, a.excl)
        if v is None:
            raise UnwitnessableTarget(
                "the observation is met only by limit elements, not by an automorphism")
        pairs.append((t_, v))
        prev = v
    g = pl_witness(pairs)
    if not recheck(obs, extension(g, space)):
        raise Inconsistent("internal: witness failed its recheck")
    return g


# The (**) re-alignment
# ---------------------

@dataclass(frozen=True)
class Cover:
    """Open intervals of Q covering it in order; only neighbours overlap.

    ``intervals[i] = (lo, hi)`` with None for an unbounded end.  Two points
    are V-close when one interval holds both, and 2V-close when two adjacent
    intervals together hold both.
    """

    intervals: tuple

    def __post_init__(self):
        iv = tuple((None if lo is None else as_rational(lo), None if hi is None else as_rational(hi))
                   for lo, hi in self.intervals)
        object.__setattr__(self, "intervals", iv)
        if not iv or iv[0][0] is not None or iv[-1][1] is not None:
            raise ValueError("a cover must reach both ends of Q")
        for k, (lo, hi) in enumerate(iv):
            if lo is not None and hi is not None and not lo < hi:
                raise ValueError(f"empty interval ({lo}, {hi})")
            if k + 1 < len(iv):
                nlo, nhi = iv[k + 1]
                if hi is None or nlo is None or not nlo < hi:
                    raise ValueError("consecutive intervals must overlap")
                if lo is not None and not lo < nlo:
                    raise ValueError("intervals must move strictly right")
                if nhi is not None and not hi < nhi:
                    raise ValueError("intervals must move strictly right")
            if k + 2 < len(iv) and iv[k + 2][0] < hi:
                raise ValueError("only neighbouring intervals may overlap")

    def holds(self, k, v) -> bool:
        lo, hi = self.intervals[k]
        return (lo is None or lo < v) and (hi is None or v < hi)

    def common(self, u, v) -> list[int]:
        return [k for k in range(len(self.intervals)) if self.holds(k, u) and self.holds(k, v)]

    def close(self, u, v) -> bool:
        return bool(self.common(u, v))

    def doubly_close(self, u, v) -> bool:
        n = len(self.intervals)
        for k in range(n):
            pair = [k] + ([k + 1] if k + 1 < n else [])
            if any(self.holds(i, u) for i in pair) and any(self.holds(i, v) for i in pair):
                return True
        return False


def _is_partition(entourage) -> bool:
    return isinstance(entourage, (tuple, list)) and all(isinstance(c, Cell) for c in entourage)


def _close(entourage, u, v) -> bool:
    if _is_partition(entourage):
        return cell_index(entourage, u) == cell_index(entourage, v)
    return entourage.close(u, v)


def _doubly_close(entourage, u, v) -> bool:
    if _is_partition(entourage):
        return abs(cell_index(entourage, u) - cell_index(entourage, v)) <= 1
    return entourage.doubly_close(u, v)


def star_star_witness(g: PLAutomorphism, h: PLAutomorphism, sigma, entourage) -> PLAutomorphism:
    """g' with g' = g on sigma and h(x) doubly close to g'(x) for every x.

    ``entourage`` is either a stabilizer partition (tuple of cells) or a
    ``Cover``.  Precondition: g(x) and h(x) are close for x in sigma.
    """
    sigma = sorted({as_rational(x) for x in sigma})
    for x in sigma:
        if not _close(entourage, g(x), h(x)):
            raise PreconditionViolated(f"g({x}) and h({x}) are not close")
    if not sigma or g == h:
        return h if not sigma else g
    if _is_partition(entourage):
        return _realign_partition(g, h, sigma, entourage)
    return _realign_cover(g, h, sigma, entourage)


def _realign_partition(g, h, sigma, cells):
    # f fixes every singleton cell and moves g(x) to h(x) inside its cell;
    # then g' = f^-1 h agrees with g on sigma and h = f g' stays cell-wise put.
    fixed = [c.lo for c in cells if c.point]
    pairs = {p: p for p in fixed}
    for x in sigma:
        if g(x) not in pairs:
            pairs[g(x)] = h(x)
    f = pl_witness(pairs.items())
    return f.inverse().compose(h)


def _realign_cover(g, h, sigma, cover: Cover):
    """Splice g (next to sigma) and h (far from it) segment by segment.

    Around each x in sigma the cover holds g(x) and h(x) in a common
    interval C.  Between two such points g' follows g, bends linearly onto h
    at a level b inside C, follows h, and bends back onto g at a level a
    inside the next common interval.  Each stretch keeps g' and h inside one
    interval of the cover, except when the two common intervals overlap and
    g' is simply g; then the pair is doubly close.
    """
    ginv, hinv = g.inverse(), h.inverse()
    pts = {}

    def follow(src, a, b):
        # g' = src on [a, b]; None stands for a tail (slope 1 beyond src's breakpoints)
        xs = list(src.xs)
        if a is None:
            a = min(xs + [b]) - 1
        if b is None:
            b = max(xs + [a]) + 1
        pts[a] = src(a)
        pts.update((t, src(t)) for t in xs if a < t < b)
        pts[b] = src(b)

    def common(x):
        return cover.intervals[cover.common(g(x), h(x))[0]]

    x1 = sigma[0]
    lo1, _ = common(x1)
    if lo1 is None:
        follow(g, None, x1)
    else:
        a = rational_between(lo1, min(g(x1), h(x1)))
        y_minus = hinv(a)
        follow(h, None, y_minus)
        follow(g, rational_between(max(y_minus, ginv(a)), x1), x1)

    for s, t in zip(sigma, sigma[1:]):
        max_s, min_t = max(g(s), h(s)), min(g(t), h(t))
        low, high = min(g(s), h(s)), max(g(t), h(t))
        if max_s >= min_t or any(cover.holds(k, low) and cover.holds(k, high)
                                 for k in range(len(cover.intervals))):
            follow(g, s, t)
            continue
        _, hi_s = common(s)
        lo_t, _ = common(t)
        mid = rational_between(max_s, min_t)
        b = rational_between(max_s, mid if hi_s is None else min(mid, hi_s))
        a = rational_between(mid if lo_t is None else max(mid, lo_t), min_t)
        y_plus, y_minus = hinv(b), hinv(a)
        follow(g, s, rational_between(s, min(y_plus, ginv(b))))
        follow(h, y_plus, y_minus)
        follow(g, rational_between(max(y_minus, ginv(a)), t), t)

    xn = sigma[-1]
    _, hin = common(xn)
    if hin is None:
        follow(g, xn, None)
    else:
        b = rational_between(max(g(xn), h(xn)), hin)
        y_plus = hinv(b)
        follow(g, xn, rational_between(xn, min(y_plus, ginv(b))))
        follow(h, y_plus, None)
    return pl_witness(pts.items())


def verification_grid(sigma, *maps):
    """Breakpoints of the maps, sigma, their midpoints and two outer points."""
    pts = set(as_rational(x) for x in sigma)
    for m in maps:
        pts |= set(m.xs)
    pts = sorted(pts)
    if not pts:
        return [Fraction(0)]
    out = [pts[0] - 1] + pts + [(a + b) / 2 for a, b in zip(pts, pts[1:])] + [pts[-1] + 1]
    return sorted(out)


def verify_star_star(g, h, sigma, entourage, g2) -> bool:
    """g2 agrees with g on sigma and is doubly close to h on the grid."""
    if any(g2(x) != g(x) for x in sigma):
        return False
    return all(_doubly_close(entourage, h(t), g2(t))
               for t in verification_grid(sigma, g, h, g2))
