"""Exhaustive membership oracles for small observations.

Each oracle lists every assignment of values from a finite grid to a finite
domain closed under the relevant structure, then checks the defining
conditions literally on the resulting point map.  No greedy choice is made,
so they are an independent check on the candidate-set reasoning in
``ellislab.ellis``.
"""
import functools
import itertools
from fractions import Fraction

from ellislab.chain import (
    INF, INFINITY, SUP, Gap, GapCut, Inf, Infinity, Plain, Sup, Tagged, cmp_points,
    cmp_values, is_x_point, location, rational_between,
)
from ellislab.ellis import Exactly, InInterval, target_contains


def _grid_locations(obs, spare):
    marks = []
    for _, t in obs.entries:
        for p in ([t.point] if isinstance(t, Exactly) else
                  [t.lo, t.hi] if isinstance(t, InInterval) else []):
            if p is not None and location(p)[0] == 1 and all(
                    cmp_values(location(p)[1], m) for m in marks):
                marks.append(location(p)[1])
    marks.sort(key=functools.cmp_to_key(cmp_values))
    rats = [m for m in marks if not isinstance(m, GapCut)]
    bounds = [None] + marks + [None]
    for lo, hi in zip(bounds, bounds[1:]):
        top = hi
        for _ in range(spare):
            top = rational_between(lo, top)
            rats.append(top)
    return sorted(set(rats)), [m for m in marks if isinstance(m, GapCut)]


def _monotone(items):
    """items: (point, value) pairs; non-decreasing in the point order."""
    for (p, u), (q, v) in itertools.combinations(items, 2):
        if cmp_points(p, q) * cmp_points(u, v) < 0:
            return False
    return True


def bm_oracle(obs) -> bool:
    """Conditions (i)-(v) on the closure of the observed points under triples."""
    xs = sorted({p.x for p, _ in obs.entries if isinstance(p, Tagged)})
    singles = [p for p, _ in obs.entries if isinstance(p, Gap)] + [INF, SUP]
    rats, gaps = _grid_locations(obs, spare=len(xs) + 2)
    tagged = [Tagged(y, j) for y in rats for j in (-1, 0, 1)]
    non_x = [v for v in tagged if v.j != 0] + [Gap(c) for c in gaps] + [INF, SUP]
    targets = dict(obs.entries)

    def ok(p, v):
        return p not in targets or target_contains(obs.space, targets[p], v)

    blocks = []
    for x in xs:
        triple = [Tagged(x, j) for j in (-1, 0, 1)]
        opts = [dict(zip(triple, (Tagged(y, -1), Tagged(y, 0), Tagged(y, 1)))) for y in rats]
        opts += [dict.fromkeys(triple, v) for v in non_x]
        blocks.append([o for o in opts if all(ok(p, v) for p, v in o.items())])
    for p in singles:
        vals = [p] if isinstance(p, (Inf, Sup)) else non_x + [v for v in tagged if v.j == 0]
        blocks.append([{p: v} for v in vals if ok(p, v)])
    for choice in itertools.product(*blocks):
        f = {}
        for part in choice:
            f.update(part)
        items = list(f.items())
        if not _monotone(items):                                         # (i)
            continue
        if any(not is_x_point(p) and is_x_point(v) for p, v in items):   # (ii)
            continue
        values = [v for v in f.values() if is_x_point(v)]
        if len(values) != len(set(values)):                              # (iii)
            continue
        if f[INF] != INF or f[SUP] != SUP:                               # (v)
            continue
        return True
    return False


def br_oracle(obs) -> bool:
    """(i') monotone and (ii') collisions only off X, for maps X -> BmX."""
    rats, gaps = _grid_locations(obs, spare=len(obs.entries) + 2)
    values = [Tagged(y, j) for y in rats for j in (-1, 0, 1)] + [Gap(c) for c in gaps] + [INF, SUP]
    per_point = [[(p, v) for v in values if target_contains(obs.space, t, v)]
                 for p, t in obs.entries]
    for choice in itertools.product(*per_point):
        xs = [v for _, v in choice if is_x_point(v)]
        if _monotone(choice) and len(xs) == len(set(xs)):
            return True
    return False


def cm_oracle(obs) -> bool:
    """Non-decreasing self-maps of CmX fixing both ends."""
    rats, gaps = _grid_locations(obs, spare=len(obs.entries) + 2)
    values = [Plain(y) for y in rats] + [Gap(c) for c in gaps] + [INF, SUP]
    per_point = []
    for p, t in obs.entries:
        vals = [p] if isinstance(p, (Inf, Sup)) else values
        per_point.append([(p, v) for v in vals if target_contains(obs.space, t, v)])
    return any(_monotone(choice) for choice in itertools.product(*per_point))


def cx_oracle(obs) -> bool:
    """Infinity fixed; non-decreasing where the value is finite."""
    rats, gaps = _grid_locations(obs, spare=len(obs.entries) + 2)
    values = [Plain(y) for y in rats] + [Gap(c) for c in gaps] + [INFINITY]
    per_point = []
    for p, t in obs.entries:
        vals = [INFINITY] if isinstance(p, Infinity) else values
        per_point.append([(p, v) for v in vals if target_contains(obs.space, t, v)])
    for choice in itertools.product(*per_point):
        if _monotone([(p, v) for p, v in choice if not isinstance(v, Infinity)]):
            return True
    return False


# Small random observations, biased towards collisions and shared bases
# ---------------------------------------------------------------------

SMALL_GAPS = [GapCut(0, Fraction(1, 2)), GapCut(1, Fraction(1, 2)), GapCut(3, -1)]


def small_bm_point(rng, x_only=False):
    if x_only:
        return Tagged(rng.randint(0, 3), 0)
    r = rng.random()
    if r < 0.08:
        return INF
    if r < 0.16:
        return SUP
    if r < 0.3:
        return Gap(rng.choice(SMALL_GAPS))
    return Tagged(rng.randint(0, 3), rng.choice((-1, 0, 0, 1)))


def small_cm_point(rng, ends=True):
    r = rng.random()
    if ends and r < 0.1:
        return INF
    if ends and r < 0.2:
        return SUP
    if r < 0.35:
        return Gap(rng.choice(SMALL_GAPS))
    return Plain(rng.randint(0, 3))


def small_target(rng, make_point, make_finite, legal):
    while True:
        if rng.random() < 0.5:
            p = make_point()
            if legal(p):
                return Exactly(p)
            continue
        lo = None if rng.random() < 0.25 else make_finite()
        hi = None if rng.random() < 0.25 else make_finite()
        if lo is not None and hi is not None and cmp_points(lo, hi) > 0:
            lo, hi = hi, lo
        if lo is not None and hi is not None:
            a, b = location(lo)[1], location(hi)[1]
            c = cmp_values(a, b)
            if c == 0 and not (isinstance(lo, Tagged) and hi.j - lo.j >= 2):
                continue
        return InInterval(lo, hi)

