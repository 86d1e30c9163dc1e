"""Random generators shared by the property and acceptance tests.

Consistent observations are built by sampling a genuine group element and
loosening its images into neighbourhoods, so they are consistent by
construction and independent of the membership code.
"""
from fractions import Fraction

from ellislab.approx import Cover, extension, pl_witness
from ellislab.chain import (
    INF, INFINITY, SUP, Gap, Plain, Space, Tagged, make_gap,
)
from ellislab.ellis import Cofinite, Exactly, InInterval, Observation


def rational(rng, span=20, den=6):
    return Fraction(rng.randint(-span * den, span * den), rng.randint(1, den))


def gap_cut(rng):
    return make_gap(rational(rng, 10, 4), Fraction(rng.choice((-1, 1)) * rng.randint(1, 6),
                                                  rng.randint(1, 4)))


def random_pl(rng, k=None):
    k = rng.randint(0, 4) if k is None else k
    xs = sorted({rational(rng) for _ in range(k)})
    ys = sorted({rational(rng) for _ in range(len(xs))})
    if len(ys) < len(xs):
        xs = xs[:len(ys)]
    return pl_witness(zip(xs, ys))


def random_bm_point(rng, allow_ends=True):
    kind = rng.randrange(10)
    if allow_ends and kind == 0:
        return INF
    if allow_ends and kind == 1:
        return SUP
    if kind == 2:
        return Gap(gap_cut(rng))
    return Tagged(rational(rng), rng.choice((-1, 0, 0, 1)))


def _fresh_points(rng, make, k):
    pts = []
    while len(pts) < k:
        p = make()
        if p not in pts:
            pts.append(p)
    return pts


def _bm_interval(rng, q):
    """An open BmX interval around the finite point q."""
    if isinstance(q, Tagged) and q.j == 0 and rng.random() < 0.2:
        return InInterval(Tagged(q.x, -1), Tagged(q.x, 1))
    c = q.x if isinstance(q, Tagged) else q.c.bounds(3)[0]
    d = q.x if isinstance(q, Tagged) else q.c.bounds(3)[1]
    lo = None if rng.random() < 0.2 else Tagged(c - Fraction(rng.randint(1, 8), rng.randint(1, 4)),
                                                 rng.choice((-1, 0, 1)))
    hi = None if rng.random() < 0.2 else Tagged(d + Fraction(rng.randint(1, 8), rng.randint(1, 4)),
                                                rng.choice((-1, 0, 1)))
    return InInterval(lo, hi)


def _cm_interval(rng, q, bounded=False):
    c = q.x if isinstance(q, Plain) else q.c.bounds(3)[0]
    d = q.x if isinstance(q, Plain) else q.c.bounds(3)[1]
    lo = Plain(c - Fraction(rng.randint(1, 8), rng.randint(1, 4)))
    hi = Plain(d + Fraction(rng.randint(1, 8), rng.randint(1, 4)))
    if not bounded:
        lo = None if rng.random() < 0.2 else lo
        hi = None if rng.random() < 0.2 else hi
    return InInterval(lo, hi)


def consistent_bm(rng, k=None, br=False):
    g = random_pl(rng)
    e = extension(g, Space.BmX)
    k = rng.randint(0, 6) if k is None else k
    if br:
        pts = _fresh_points(rng, lambda: Tagged(rational(rng), 0), k)
    else:
        pts = _fresh_points(rng, lambda: random_bm_point(rng), k)
    entries = []
    for p in pts:
        q = e(p)
        if isinstance(q, (type(INF), type(SUP))) or (isinstance(q, Tagged) and rng.random() < 0.5):
            entries.append((p, Exactly(q)))
        else:
            entries.append((p, _bm_interval(rng, q)))
    return Observation(Space.BmX, entries)


def random_cm_point(rng, allow_ends=True):
    kind = rng.randrange(8)
    if allow_ends and kind == 0:
        return INF
    if allow_ends and kind == 1:
        return SUP
    if kind == 2:
        return Gap(gap_cut(rng))
    return Plain(rational(rng))


def consistent_cm(rng, k=None):
    g = random_pl(rng)
    e = extension(g, Space.CmX)
    k = rng.randint(0, 6) if k is None else k
    entries = []
    for p in _fresh_points(rng, lambda: random_cm_point(rng), k):
        q = e(p)
        if isinstance(q, (type(INF), type(SUP))) or (isinstance(q, Plain) and rng.random() < 0.5):
            entries.append((p, Exactly(q)))
        else:
            entries.append((p, _cm_interval(rng, q)))
    return Observation(Space.CmX, entries)


def consistent_cx(rng, k=None):
    g = random_pl(rng)
    e = extension(g, Space.CX)
    k = rng.randint(0, 6) if k is None else k

    def make():
        return INFINITY if rng.random() < 0.1 else random_cm_point(rng, allow_ends=False)

    entries = []
    for p in _fresh_points(rng, make, k):
        q = e(p)
        if isinstance(q, type(INFINITY)) or (isinstance(q, Plain) and rng.random() < 0.5):
            entries.append((p, Exactly(q)))
        else:
            entries.append((p, _cm_interval(rng, q, bounded=True)))
    return Observation(Space.CX, entries)


def _alpha_points(rng, k):
    return _fresh_points(
        rng, lambda: INFINITY if rng.random() < 0.1 else Tagged(rng.randint(-12, 12), 0), k)


def consistent_alpha(rng, group, k=None):
    k = rng.randint(0, 6) if k is None else k
    pts = _alpha_points(rng, k)
    if group == "Aut":
        g = random_pl(rng)
        image = {p.x: g(p.x) for p in pts if isinstance(p, Tagged)}
    else:
        xs = [p.x for p in pts if isinstance(p, Tagged)]
        ys = rng.sample(range(-15, 16), len(xs))
        image = {x: Fraction(y) for x, y in zip(xs, ys)}
    entries = []
    for p in pts:
        if isinstance(p, type(INFINITY)):
            entries.append((p, Exactly(INFINITY)))
            continue
        y = image[p.x]
        r = rng.random()
        if r < 0.5:
            entries.append((p, Exactly(Tagged(y, 0))))
        elif r < 0.8 or group == "S":
            banned = {Fraction(rng.randint(-15, 15)) for _ in range(rng.randint(0, 4))} - {y}
            entries.append((p, Cofinite(frozenset(Tagged(b, 0) for b in banned))))
        else:
            entries.append((p, _bm_interval(rng, Tagged(y, 0))))
    return Observation(Space.AlphaX, entries)


def consistent(rng, mode):
    """mode: BmX, br, CmX, CX, AlphaS, AlphaAut."""
    return {
        "BmX": lambda: consistent_bm(rng),
        "br": lambda: consistent_bm(rng, br=True),
        "CmX": lambda: consistent_cm(rng),
        "CX": lambda: consistent_cx(rng),
        "AlphaS": lambda: consistent_alpha(rng, "S"),
        "AlphaAut": lambda: consistent_alpha(rng, "Aut"),
    }[mode]()


WITNESS_MODE = {"BmX": None, "br": "br", "CmX": None, "CX": None, "AlphaS": "S", "AlphaAut": "Aut"}


# Single-clause mutations
# -----------------------

def _fresh_x(rng, used):
    while True:
        v = rational(rng, 40, 3)
        if v not in used:
            return v


def _used(obs):
    out = set()
    for p, t in obs.entries:
        for q in (p, getattr(t, "point", None), getattr(t, "lo", None), getattr(t, "hi", None)):
            x = getattr(q, "x", None)
            if x is not None:
                out.add(x)
    return out


def _reverse_pair(rng, obs, kind):
    """Add two fresh points x < x' sent to y > y' (fresh values, no siblings)."""
    used = _used(obs)
    a, b = sorted((_fresh_x(rng, used), _fresh_x(rng, used | {Fraction(10 ** 6)})))
    while a == b:
        b = _fresh_x(rng, used | {a})
        a, b = sorted((a, b))
    u = used | {a, b}
    y1 = _fresh_x(rng, u)
    y2 = _fresh_x(rng, u | {y1})
    lo, hi = sorted((y1, y2))
    return list(obs.entries) + [(kind(a), Exactly(kind(hi))), (kind(b), Exactly(kind(lo)))]


def mutate(rng, mode, obs):
    """A refuted observation and the clause label it must be refuted with."""
    entries = list(obs.entries)
    used = _used(obs)
    if mode == "BmX":
        clause = rng.choice(["(i)", "(ii)", "(iii)", "(iv)", "(v)"])
        if clause == "(i)":
            entries = _reverse_pair(rng, obs, Tagged)
        elif clause == "(ii)":
            x = _fresh_x(rng, used)
            entries.append((Tagged(x, rng.choice((-1, 1))), Exactly(Tagged(_fresh_x(rng, used), 0))))
        elif clause == "(iii)":
            x1 = _fresh_x(rng, used)
            x2 = _fresh_x(rng, used | {x1})
            y = Tagged(_fresh_x(rng, used | {x1, x2}), 0)
            entries += [(Tagged(x1, 0), Exactly(y)), (Tagged(x2, 0), Exactly(y))]
        elif clause == "(iv)":
            x = _fresh_x(rng, used)
            y = _fresh_x(rng, used | {x})
            y2 = _fresh_x(rng, used | {x, y})
            if y2 < y:
                y, y2 = y2, y
            entries += [(Tagged(x, -1), Exactly(Tagged(y, -1))), (Tagged(x, 0), Exactly(Tagged(y2, 0)))]
        else:
            entries = [(p, t) for p, t in entries if p != INF]
            entries.append((INF, Exactly(rng.choice([SUP, Tagged(_fresh_x(rng, used), 0)]))))
        return Observation(Space.BmX, entries), clause
    if mode == "br":
        clause = rng.choice(["(i')", "(ii')"])
        if clause == "(i')":
            entries = _reverse_pair(rng, obs, Tagged)
        else:
            x1 = _fresh_x(rng, used)
            x2 = _fresh_x(rng, used | {x1})
            y = Tagged(_fresh_x(rng, used | {x1, x2}), 0)
            entries += [(Tagged(x1, 0), Exactly(y)), (Tagged(x2, 0), Exactly(y))]
        return Observation(Space.BmX, entries), clause
    if mode == "CmX":
        clause = rng.choice(["endpoint", "monotone"])
        if clause == "monotone":
            entries = _reverse_pair(rng, obs, Plain)
        else:
            entries = [(p, t) for p, t in entries if p != SUP]
            entries.append((SUP, Exactly(Plain(_fresh_x(rng, used)))))
        return Observation(Space.CmX, entries), clause
    if mode == "CX":
        clause = rng.choice(["infinity", "monotone"])
        if clause == "monotone":
            entries = _reverse_pair(rng, obs, Plain)
        else:
            entries = [(p, t) for p, t in entries if p != INFINITY]
            entries.append((INFINITY, Exactly(Plain(_fresh_x(rng, used)))))
        return Observation(Space.CX, entries), clause
    group = "S" if mode == "AlphaS" else "Aut"
    choices = ["collision", "infinity"] + (["monotone"] if group == "Aut" else [])
    clause = rng.choice(choices)
    ints = {Fraction(v) for v in range(-40, 41)} - used
    if clause == "infinity":
        entries = [(p, t) for p, t in entries if p != INFINITY]
        entries.append((INFINITY, Exactly(Tagged(min(ints), 0))))
    elif clause == "collision":
        x1, x2, y = sorted(ints)[:3]
        entries += [(Tagged(x1, 0), Exactly(Tagged(y, 0))), (Tagged(x2, 0), Exactly(Tagged(y, 0)))]
    else:
        x1, x2, y1, y2 = sorted(ints)[-4:]
        entries += [(Tagged(x1, 0), Exactly(Tagged(y2, 0))), (Tagged(x2, 0), Exactly(Tagged(y1, 0)))]
    return Observation(Space.AlphaX, entries), clause


# (**) instances
# --------------

def random_cover(rng):
    cuts = sorted({rational(rng, 15, 3) for _ in range(rng.randint(1, 6))})
    # interval k spans (cuts[k-1] - e, cuts[k] + e) with overlaps smaller than gaps
    gaps = [b - a for a, b in zip(cuts, cuts[1:])]
    eps = min(gaps) / 3 if gaps else Fraction(1)
    ivs = []
    bounds = [None] + cuts + [None]
    for a, b in zip(bounds, bounds[1:]):
        ivs.append((None if a is None else a - eps, None if b is None else b + eps))
    return Cover(tuple(ivs))


def _value_in(rng, lo, hi, anchor):
    lo = anchor - 10 if lo is None else lo
    hi = anchor + 10 if hi is None else hi
    return lo + (hi - lo) * Fraction(rng.randint(1, 99), 100)


def star_star_case(rng):
    """A random (g, h, sigma, entourage) meeting the precondition."""
    from ellislab.chain import stabilizer_partition
    while True:
        g = random_pl(rng)
        sigma = sorted({rational(rng, 10, 3) for _ in range(rng.randint(1, 4))})
        if rng.random() < 0.5:
            tau = sorted({rational(rng, 15, 3) for _ in range(rng.randint(1, 5))} |
                         ({g(sigma[0])} if rng.random() < 0.3 else set()))
            ent = stabilizer_partition(tau)
            spans = []
            for x in sigma:
                cell = next(c for c in ent if c.contains(g(x)))
                spans.append((cell.lo, cell.lo) if cell.point else (cell.lo, cell.hi))
        else:
            ent = random_cover(rng)
            spans = []
            for x in sigma:
                ks = ent.common(g(x), g(x))
                spans.append(ent.intervals[rng.choice(ks)])
        vals = []
        for x, (lo, hi) in zip(sigma, spans):
            vals.append(lo if lo is not None and lo == hi else _value_in(rng, lo, hi, g(x)))
        if all(a < b for a, b in zip(vals, vals[1:])):
            extra = []
            if rng.random() < 0.5:
                extra = [(sigma[-1] + rng.randint(1, 5), vals[-1] + rng.randint(1, 9))]
            h = pl_witness(list(zip(sigma, vals)) + extra)
            return g, h, sigma, ent
