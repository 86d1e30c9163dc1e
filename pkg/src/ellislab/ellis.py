"""Finite faces of Ellis semigroup elements.

Two representations live here.  ``Observation`` is a finite list of
constraints "the point p is sent into the set T"; membership checks decide
whether some element of the relevant Ellis compactification meets all of
them.  ``EllisElementFin`` is a finite core plus an absorbing default (the
point at infinity), used for the algebra of the one-point compactification.

Membership decisions are exact.  Every constraint only talks about finitely
many landmark locations, so a solution can always be moved onto a finite
candidate set: the landmarks themselves plus enough fresh rationals in each
region between them.  Over that set the monotone-chain problem is solved
greedily (keep the running maximum as small as possible).
"""
from __future__ import annotations

import functools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, NamedTuple, Optional

from .chain import (
    INF, INFINITY, SUP, GapCut, Gap, Inf, Infinity, Plain, Space, Sup, Tagged,
    base_space, cmp_points, cmp_values, fiber_contains, format_point,
    has_arrow, is_legal, is_x_point, lattice_arrows, location, parse_point, point_key,
    quotient_point, rational_between,
)
from .errors import (
    IllegalObservation, IllegalPoint, NoArrow, NotElementary, SpaceMismatch,
)
from .partial import PartialBijection, is_order_preserving


# Targets
# -------

@dataclass(frozen=True)
class Exactly:
    point: object


@dataclass(frozen=True)
class InInterval:
    """Open interval of the base space (BmX or CmX); None means unbounded.

    In a quotient space the target is the image of that interval.
    """

    lo: object = None
    hi: object = None


@dataclass(frozen=True)
class Cofinite:
    """Complement of finitely many X-points; only meaningful in AlphaX."""

    excluded: frozenset = field(default_factory=frozenset)


def _preimages(space: Space, v):
    """Base-space points identified with v (None: every non-X point)."""
    if space in (Space.BmX, Space.CmX):
        return [v]
    if isinstance(v, Infinity):
        return None if space is Space.AlphaX else [INF, SUP]
    if isinstance(v, Tagged) and v.j == -1 and space in (Space.BudX, Space.BplusX):
        return [v, Tagged(v.x, 1)]
    return [v]


def _in_open(lo, hi, b) -> bool:
    return (lo is None or cmp_points(lo, b) < 0) and (hi is None or cmp_points(b, hi) < 0)


def interval_has_non_x(lo, hi) -> bool:
    if lo is None or hi is None:
        return True
    return cmp_values(location(lo)[1], location(hi)[1]) < 0


def target_contains(space: Space, target, v) -> bool:
    if isinstance(target, Exactly):
        return target.point == v
    if isinstance(target, Cofinite):
        return v not in target.excluded
    pre = _preimages(space, v)
    if pre is None:
        return interval_has_non_x(target.lo, target.hi)
    return any(_in_open(target.lo, target.hi, b) for b in pre)


def _interval_nonempty(lo, hi) -> bool:
    if lo is None or hi is None:
        return True
    (_, a), (_, b) = location(lo), location(hi)
    c = cmp_values(a, b)
    if c != 0:
        return c < 0
    # same rational location: only tags can leave room
    return isinstance(lo, Tagged) and isinstance(hi, Tagged) and hi.j - lo.j >= 2


# Observations
# ------------

@dataclass(frozen=True)
class Observation:
    space: Space
    entries: tuple

    def __post_init__(self):
        object.__setattr__(self, "entries", tuple((p, t) for p, t in self.entries))
        seen = set()
        for p, t in self.entries:
            if not is_legal(self.space, p):
                raise IllegalObservation(f"{p} is not a point of {self.space}")
            if p in seen:
                raise IllegalObservation(f"point {p} observed twice")
            seen.add(p)
            _check_target(self.space, t)

    def points(self):
        return [p for p, _ in self.entries]

    def to_json(self) -> dict:
        return {"space": self.space.value,
                "entries": [{"point": format_point(p), "target": target_to_json(t)}
                            for p, t in self.entries]}


def _check_target(space: Space, t) -> None:
    if isinstance(t, Exactly):
        if not is_legal(space, t.point):
            raise IllegalObservation(f"target {t.point} is not a point of {space}")
    elif isinstance(t, InInterval):
        base = base_space(space)
        for e in (t.lo, t.hi):
            if e is None:
                continue
            if isinstance(e, (Inf, Sup, Infinity)) or not is_legal(base, e):
                raise IllegalObservation(f"interval endpoint {e} must be a finite point of {base}")
        if not _interval_nonempty(t.lo, t.hi):
            raise IllegalObservation(f"empty interval ({t.lo}, {t.hi})")
    elif isinstance(t, Cofinite):
        if space is not Space.AlphaX:
            raise IllegalObservation("cofinite targets only exist in AlphaX")
        if any(not (isinstance(e, Tagged) and e.j == 0) for e in t.excluded):
            raise IllegalObservation("cofinite exclusions must be X-points")
    else:
        raise IllegalObservation(f"unknown target {t!r}")


def target_to_json(t) -> dict:
    if isinstance(t, Exactly):
        return {"kind": "exactly", "point": format_point(t.point)}
    if isinstance(t, InInterval):
        return {"kind": "interval",
                "lo": None if t.lo is None else format_point(t.lo),
                "hi": None if t.hi is None else format_point(t.hi)}
    return {"kind": "cofinite",
            "excluded": [format_point(p) for p in sorted(t.excluded, key=point_key)]}


def target_from_json(d):
    kind = d.get("kind")
    if kind == "exactly":
        return Exactly(parse_point(d["point"]))
    if kind == "interval":
        lo, hi = d.get("lo"), d.get("hi")
        return InInterval(None if lo is None else parse_point(lo),
                          None if hi is None else parse_point(hi))
    if kind == "cofinite":
        return Cofinite(frozenset(parse_point(s) for s in d.get("excluded", [])))
    raise IllegalObservation(f"unknown target kind {kind!r}")


def observation_from_json(d: dict) -> Observation:
    try:
        space = Space(d["space"])
        entries = [(parse_point(e["point"]), target_from_json(e["target"]))
                   for e in d["entries"]]
    except (KeyError, TypeError, ValueError, IllegalPoint) as exc:
        raise IllegalObservation(f"malformed observation: {exc}") from exc
    return Observation(space, entries)


# Verdicts
# --------

class Verdict(NamedTuple):
    consistent: bool
    clause: Optional[str] = None
    reason: str = ""

    def to_json(self) -> dict:
        out = {"verdict": "consistent" if self.consistent else "refuted"}
        if not self.consistent:
            out["clause"] = self.clause
            out["reason"] = self.reason
        return out


CONSISTENT = Verdict(True)


def _refuted(clause, reason):
    return Verdict(False, clause, reason)


def _require(obs: Observation, space: Space):
    if obs.space is not space:
        raise IllegalObservation(f"expected a {space} observation, got {obs.space}")


# Candidate values
# ----------------

def _landmarks(obs: Observation):
    locs = []
    for _, t in obs.entries:
        pts = [t.point] if isinstance(t, Exactly) else (
            [t.lo, t.hi] if isinstance(t, InInterval) else [])
        for p in pts:
            if p is not None and location(p)[0] == 1:
                locs.append(location(p)[1])
    out = []
    for v in sorted(locs, key=_value_key):
        if not out or cmp_values(out[-1], v) != 0:
            out.append(v)
    return out


_value_key = functools.cmp_to_key(cmp_values)


def _fresh(lo, hi, k):
    """k distinct rationals strictly inside (lo, hi), descending."""
    out = []
    top = hi
    for _ in range(k):
        top = rational_between(lo, top)
        out.append(top)
    return out


def _candidate_locations(obs: Observation):
    marks = _landmarks(obs)
    k = len(obs.entries) + 1
    rationals = [m for m in marks if not isinstance(m, GapCut)]
    gaps = [m for m in marks if isinstance(m, GapCut)]
    bounds = [None] + marks + [None]
    for lo, hi in zip(bounds, bounds[1:]):
        rationals += _fresh(lo, hi, k)
    return sorted(set(rationals)), gaps


def _candidates(obs: Observation, base: Space):
    rationals, gaps = _candidate_locations(obs)
    if base is Space.BmX:
        pts = [Tagged(y, j) for y in rationals for j in (-1, 0, 1)]
    else:
        pts = [Plain(y) for y in rationals]
    pts += [Gap(c) for c in gaps] + [INF, SUP]
    pts.sort(key=point_key)
    return pts, rationals


# Greedy monotone chain
# ---------------------

class _Transparent:
    """Option that leaves the running bound unchanged (CX infinity)."""

    def __repr__(self):
        return "TRANSPARENT"


TRANSPARENT = _Transparent()


def _chain_feasible(units, x_flags, allow_x_equal: bool) -> bool:
    """Each unit is a list of (lo, hi) candidate indices (or TRANSPARENT).

    Consecutive chosen units need prev_hi <= lo, with equality forbidden at
    X-values unless allow_x_equal.  Picking the smallest feasible hi is
    optimal since later units only see that bound.
    """
    prev = -1
    prev_strict = False
    for options in units:
        best = None
        for opt in options:
            if opt is TRANSPARENT:
                best = opt
                break
            lo, hi = opt
            if lo < prev or (lo == prev and prev_strict):
                continue
            if best is None or hi < best[1]:
                best = opt
        if best is TRANSPARENT:
            continue
        if best is None:
            return False
        prev = best[1]
        prev_strict = x_flags[prev] and not allow_x_equal
    return True


def _contains_table(space, entries, cands):
    return [[target_contains(space, t, c) for c in cands] for _, t in entries]


# BmX: conditions (i)-(v)
# -----------------------

def _exact_x(t):
    return isinstance(t, Exactly) and is_x_point(t.point)


def _bm_pairwise(entries, couple=True):
    exact = [(p, t.point) for p, t in entries if isinstance(t, Exactly)]
    for a in range(len(exact)):
        for b in range(a + 1, len(exact)):
            (p, u), (q, v) = exact[a], exact[b]
            if u == v and is_x_point(u):
                return _refuted("(iii)", f"{p} and {q} both sent to the X-point {u}")
    if couple:
        for a in range(len(exact)):
            for b in range(a + 1, len(exact)):
                (p, u), (q, v) = exact[a], exact[b]
                if isinstance(p, Tagged) and isinstance(q, Tagged) and p.x == q.x:
                    same_const = u == v and not is_x_point(u)
                    same_layer = (isinstance(u, Tagged) and isinstance(v, Tagged)
                                  and u.x == v.x and u.j == p.j and v.j == q.j)
                    if not (same_const or same_layer):
                        return _refuted("(iv)", f"{p} -> {u} and {q} -> {v} split a triple")
    for a in range(len(exact)):
        for b in range(a + 1, len(exact)):
            (p, u), (q, v) = exact[a], exact[b]
            if cmp_points(p, q) * cmp_points(u, v) < 0:
                return _refuted("(i)", f"{p}, {q} sent to {u}, {v} in reverse order")
    return None


def _bm_units(entries, cands, contains, x_flags, couple):
    index = {c: i for i, c in enumerate(cands)}
    non_x = [i for i in range(len(cands)) if not x_flags[i]]
    rows = {p: row for (p, _), row in zip(entries, contains)}
    groups = {}
    singles = []
    for p, _ in entries:
        if couple and isinstance(p, Tagged):
            groups.setdefault(p.x, []).append(p)
        else:
            singles.append([p])
    blocks = singles + list(groups.values())
    blocks.sort(key=lambda ps: point_key(min(ps, key=point_key)))
    units = []
    for ps in blocks:
        opts = []
        if len(ps) == 1 and not (couple and isinstance(ps[0], Tagged)):
            p = ps[0]
            row = rows[p]
            if isinstance(p, Inf):
                allowed = [index[INF]]
            elif isinstance(p, Sup):
                allowed = [index[SUP]]
            elif is_x_point(p):
                allowed = range(len(cands))
            else:
                allowed = non_x
            opts = [(i, i) for i in allowed if row[i]]
        else:
            # type A: (x, j) -> (y, j) for one rational y
            ys = {c.x for c in cands if isinstance(c, Tagged)}
            for y in sorted(ys):
                if all(rows[p][index[Tagged(y, p.j)]] for p in ps):
                    opts.append((index[Tagged(y, -1)], index[Tagged(y, 1)]))
            # type B: the whole triple collapses to one non-X value
            opts += [(i, i) for i in non_x if all(rows[p][i] for p in ps)]
        units.append(opts)
    return units


def check_bm_membership(obs: Observation) -> Verdict:
    _require(obs, Space.BmX)
    entries = obs.entries
    for p, t in entries:
        if isinstance(p, (Inf, Sup)) and not target_contains(Space.BmX, t, p):
            return _refuted("(v)", f"{p} must stay fixed")
    for p, t in entries:
        if not is_x_point(p) and not isinstance(p, (Inf, Sup)):
            if isinstance(t, Exactly) and is_x_point(t.point):
                return _refuted("(ii)", f"non-X point {p} sent into X")
            if isinstance(t, InInterval) and not interval_has_non_x(t.lo, t.hi):
                return _refuted("(ii)", f"non-X point {p} sent into X")
    bad = _bm_pairwise(entries)
    if bad:
        return bad
    cands, _ = _candidates(obs, Space.BmX)
    contains = _contains_table(Space.BmX, entries, cands)
    x_flags = [is_x_point(c) for c in cands]
    if _chain_feasible(_bm_units(entries, cands, contains, x_flags, True), x_flags, False):
        return CONSISTENT
    loose = _bm_units(entries, cands, contains, x_flags, False)
    if _chain_feasible(loose, x_flags, False):
        return _refuted("(iv)", "no consistent choice for a triple (x,-1),(x,0),(x,+1)")
    if _chain_feasible(loose, x_flags, True):
        return _refuted("(iii)", "two points are forced onto a common X-value")
    return _refuted("(i)", "no monotone assignment meets the targets")


# b_r: maps X -> BmX, conditions (i') and (ii')
# --------------------------------------------

def check_br_membership(obs: Observation) -> Verdict:
    _require(obs, Space.BmX)
    entries = obs.entries
    if any(not (isinstance(p, Tagged) and p.j == 0) for p, _ in entries):
        raise IllegalObservation("b_r observations only constrain points of X")
    exact = [(p, t.point) for p, t in entries if isinstance(t, Exactly)]
    for a in range(len(exact)):
        for b in range(a + 1, len(exact)):
            (p, u), (q, v) = exact[a], exact[b]
            if u == v and is_x_point(u):
                return _refuted("(ii')", f"{p} and {q} both sent to the X-point {u}")
    for a in range(len(exact)):
        for b in range(a + 1, len(exact)):
            (p, u), (q, v) = exact[a], exact[b]
            if cmp_points(p, q) * cmp_points(u, v) < 0:
                return _refuted("(i')", f"{p}, {q} sent to {u}, {v} in reverse order")
    cands, _ = _candidates(obs, Space.BmX)
    contains = _contains_table(Space.BmX, entries, cands)
    x_flags = [is_x_point(c) for c in cands]
    order = sorted(range(len(entries)), key=lambda i: point_key(entries[i][0]))
    units = [[(i, i) for i in range(len(cands)) if contains[k][i]] for k in order]
    if _chain_feasible(units, x_flags, False):
        return CONSISTENT
    if _chain_feasible(units, x_flags, True):
        return _refuted("(ii')", "two points are forced onto a common X-value")
    return _refuted("(i')", "no monotone assignment meets the targets")


# CmX and CX
# ----------

def _exact_order(entries, label, skip=()):
    exact = [(p, t.point) for p, t in entries
             if isinstance(t, Exactly) and t.point not in skip and p not in skip]
    for a in range(len(exact)):
        for b in range(a + 1, len(exact)):
            (p, u), (q, v) = exact[a], exact[b]
            if cmp_points(p, q) * cmp_points(u, v) < 0:
                return _refuted(label, f"{p}, {q} sent to {u}, {v} in reverse order")
    return None


def check_cm_membership(obs: Observation) -> Verdict:
    _require(obs, Space.CmX)
    entries = obs.entries
    for p, t in entries:
        if isinstance(p, (Inf, Sup)) and not target_contains(Space.CmX, t, p):
            return _refuted("endpoint", f"{p} must stay fixed")
    bad = _exact_order(entries, "monotone")
    if bad:
        return bad
    cands, _ = _candidates(obs, Space.CmX)
    contains = _contains_table(Space.CmX, entries, cands)
    index = {c: i for i, c in enumerate(cands)}
    order = sorted(range(len(entries)), key=lambda i: point_key(entries[i][0]))
    units = []
    for k in order:
        p = entries[k][0]
        allowed = [index[p]] if isinstance(p, (Inf, Sup)) else range(len(cands))
        units.append([(i, i) for i in allowed if contains[k][i]])
    if _chain_feasible(units, [False] * len(cands), True):
        return CONSISTENT
    return _refuted("monotone", "no monotone assignment meets the targets")


def check_cX_membership(obs: Observation) -> Verdict:
    _require(obs, Space.CX)
    entries = obs.entries
    for p, t in entries:
        if isinstance(p, Infinity) and not target_contains(Space.CX, t, INFINITY):
            return _refuted("infinity", "the point at infinity must stay fixed")
    bad = _exact_order(entries, "monotone", skip=(INFINITY,))
    if bad:
        return bad
    cands, _ = _candidates(obs, Space.CmX)
    cands = [c for c in cands if not isinstance(c, (Inf, Sup))]
    contains = _contains_table(Space.CX, entries, cands)
    finite = [k for k in range(len(entries)) if not isinstance(entries[k][0], Infinity)]
    finite.sort(key=lambda k: point_key(entries[k][0]))
    units = []
    for k in finite:
        if target_contains(Space.CX, entries[k][1], INFINITY):
            units.append([TRANSPARENT])
        else:
            units.append([(i, i) for i in range(len(cands)) if contains[k][i]])
    if _chain_feasible(units, [False] * len(cands), True):
        return CONSISTENT
    return _refuted("monotone", "no monotone assignment of the finite values meets the targets")


# AlphaX
# ------

def forced_x_value(space: Space, t):
    """The X-point a target pins down, when it allows nothing else."""
    if isinstance(t, Exactly):
        return t.point if is_x_point(t.point) else None
    if isinstance(t, InInterval) and not interval_has_non_x(t.lo, t.hi):
        return Tagged(location(t.lo)[1], 0)
    return None


def check_alpha_membership(obs: Observation, group: str = "S") -> Verdict:
    _require(obs, Space.AlphaX)
    if group not in ("S", "Aut"):
        raise ValueError(f"group must be 'S' or 'Aut', got {group!r}")
    forced = []
    for p, t in obs.entries:
        if isinstance(p, Infinity):
            if not target_contains(Space.AlphaX, t, INFINITY):
                return _refuted("infinity", "the point at infinity must stay fixed")
            continue
        if target_contains(Space.AlphaX, t, INFINITY):
            continue
        v = forced_x_value(Space.AlphaX, t)
        if v is None:
            return _refuted("collision", f"no admissible value for {p}")
        forced.append((p, v))
    for a in range(len(forced)):
        for b in range(a + 1, len(forced)):
            (p, u), (q, v) = forced[a], forced[b]
            if u == v:
                return _refuted("collision", f"{p} and {q} both sent to {u}")
    if group == "Aut":
        for a in range(len(forced)):
            for b in range(a + 1, len(forced)):
                (p, u), (q, v) = forced[a], forced[b]
                if cmp_points(p, q) * cmp_points(u, v) < 0:
                    return _refuted("monotone", f"{p}, {q} sent to {u}, {v} in reverse order")
    return CONSISTENT


def check_membership(obs: Observation, mode: Optional[str] = None) -> Verdict:
    """Dispatch on the observation's space; mode is "S"/"Aut" (AlphaX) or "br" (BmX)."""
    if obs.space is Space.AlphaX:
        return check_alpha_membership(obs, mode or "S")
    if obs.space is Space.BmX:
        return check_br_membership(obs) if mode == "br" else check_bm_membership(obs)
    if obs.space is Space.CmX:
        return check_cm_membership(obs)
    if obs.space is Space.CX:
        return check_cX_membership(obs)
    raise IllegalObservation(f"no membership test for {obs.space}")


# Finite elements of the one-point compactification
# --------------------------------------------------

@dataclass(frozen=True)
class EllisElementFin:
    """core on its domain, the point at infinity everywhere else."""

    core: PartialBijection
    mode: str = "S"
    space: Space = Space.AlphaX

    def __post_init__(self):
        if self.space is not Space.AlphaX:
            raise SpaceMismatch("finite elements are only modelled over AlphaX")
        if self.mode not in ("S", "Aut"):
            raise ValueError(f"mode must be 'S' or 'Aut', got {self.mode!r}")
        if self.mode == "Aut" and not is_order_preserving(self.core):
            raise ValueError("an Aut-mode core must be order-preserving")

    @property
    def default(self):
        return INFINITY

    @property
    def carrier(self):
        return self.core.carrier

    def __call__(self, p):
        if isinstance(p, Tagged) and p.j == 0:
            x = p.x
            key = x.numerator if x.denominator == 1 else x
            y = self.core(key)
            return INFINITY if y is None else Tagged(Fraction(y), 0)
        if isinstance(p, Infinity):
            return INFINITY
        raise IllegalPoint(f"{p} is not a point of AlphaX")

    @classmethod
    def identity(cls, carrier, mode="S"):
        return cls(PartialBijection.identity(carrier), mode)


def xi_restrict(e: EllisElementFin) -> PartialBijection:
    return e.core


def ellis_compose(e: EllisElementFin, e2: EllisElementFin) -> EllisElementFin:
    """e after e2, evaluated point by point on the carrier."""
    if e.space is not e2.space or e.carrier != e2.carrier:
        raise SpaceMismatch("elements live on different spaces or carriers")
    pairs = []
    for x in sorted(e.carrier):
        mid = e2(Tagged(Fraction(x), 0))
        if isinstance(mid, Infinity):
            continue
        out = e(mid)
        if not isinstance(out, Infinity):
            pairs.append((x, _unfrac(out.x)))
    mode = "Aut" if e.mode == e2.mode == "Aut" else "S"
    return EllisElementFin(PartialBijection(pairs, e.carrier), mode)


def _unfrac(x: Fraction):
    return x.numerator if x.denominator == 1 else x


# Induced maps between compactifications
# --------------------------------------

def sample(element: Callable, space: Space, points) -> Observation:
    """The Exactly-observation of an element (any callable on points)."""
    return Observation(space, [(p, Exactly(element(p))) for p in points])


def induce_quotient_obs(obs: Observation, source: Space, target: Space) -> Observation:
    """Push points and targets through the quotient map source -> target.

    Interval targets keep their base-space endpoints; in the target space they
    denote the image of that interval.  Entries whose points get identified
    must carry equal targets.
    """
    if obs.space is not source:
        raise SpaceMismatch(f"observation lives in {obs.space}, not {source}")
    if not has_arrow(source, target):
        raise NoArrow(f"no map of compactifications {source} -> {target}")
    merged = {}
    for p, t in obs.entries:
        q = quotient_point(source, target, p)
        if isinstance(t, Exactly):
            t = Exactly(quotient_point(source, target, t.point))
        if q in merged and merged[q] != t:
            raise IllegalObservation(f"identified points {q} carry different targets")
        merged[q] = t
    return Observation(target, list(merged.items()))


# Ideals of elementary quotients and condition (EF)
# -------------------------------------------------

@dataclass(frozen=True)
class FiberChecks:
    source: Space
    target: Space

    def in_fiber(self, p) -> bool:
        return fiber_contains((self.source, self.target), p)

    def ideal_predicate(self, e: Callable, sample_points) -> bool:
        """Does e send every sampled X-point into the collapsed fiber?"""
        return all(self.in_fiber(e(p)) for p in sample_points if is_x_point(p))

    def ef_check(self, e: Callable, e2: Callable, points) -> bool:
        """Agreement off the fiber forces agreement on it (on these points)."""
        off = [p for p in points if not self.in_fiber(p)]
        on = [p for p in points if self.in_fiber(p)]
        if any(e(p) != e2(p) for p in off):
            return True
        return all(e(p) == e2(p) for p in on)


def check_EF_ideal(source: Space, target: Space) -> FiberChecks:
    for a in lattice_arrows():
        if a.source is source and a.target is target:
            if not a.elementary:
                break
            return FiberChecks(source, target)
    raise NotElementary(f"{source} -> {target} is not an elementary arrow")
