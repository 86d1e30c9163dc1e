"""Command line front end.

    ellislab enumerate --n 3 --mode I
    ellislab verify --suite ideals --n 3
    ellislab witness --in obs.json
    ellislab lattice

Exit codes: 0 success, 1 bad input, 2 resource cap, 3 a verified property failed.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import random
import sys
from fractions import Fraction

from . import chain
from .approx import ellis_witness, extension, permutation_witness, recheck
from .chain import Space, Tagged, lattice_arrows, make_gap
from .ellis import (
    EllisElementFin, check_membership, ellis_compose, observation_from_json, xi_restrict,
)
from .errors import CapExceeded, EllisLabError, IllegalObservation, UnwitnessableTarget
from .partial import compose, enumerate_monoid, env_cap, rank
from .semigroup import (
    DEFAULT_CLOSURE_CAP, FiniteMonoid, check_homomorphism, check_inverse_monoid,
    enumerate_all_ideals, is_ideal, left_zero_with_identity, monoid_of_partial_maps,
    rank_ideal, rees_quotient, star_image,
)

EXIT_OK, EXIT_INPUT, EXIT_CAP, EXIT_FAIL = 0, 1, 2, 3

SUITES = ("inverse-axioms", "ideals", "rees", "xi", "lattice")


class InputError(Exception):
    pass


def _emit(text: str, out_path):
    if out_path:
        with open(out_path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _dump(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def _cap(args, default):
    return args.cap if args.cap is not None else env_cap(default)


def _require_n(args):
    if args.n is None or args.n < 1:
        raise InputError("--n must be a positive integer")
    return args.n


# enumerate
# ---------

def enumeration_table(n: int, mode: str, cap=None) -> dict:
    elements = enumerate_monoid(n, mode, cap=cap)
    ranks = [rank(f) for f in elements]
    sizes = [sum(1 for r in ranks if r <= k) for k in range(n + 1)]
    order = len(elements)
    return {
        "n": n,
        "mode": mode,
        "order": order,
        "elements": [str(f) for f in elements],
        "rank_ideal_sizes": sizes,
        # (S \ I) together with the zero class
        "quotient_orders": [order - s + 1 for s in sizes],
    }


def cmd_enumerate(args) -> int:
    n = _require_n(args)
    table = enumeration_table(n, args.mode, cap=_cap(args, 6))
    if args.format == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["n", "mode", "order", "rank_ideal_sizes", "quotient_orders"])
        w.writerow([n, args.mode, table["order"],
                    ";".join(map(str, table["rank_ideal_sizes"])),
                    ";".join(map(str, table["quotient_orders"]))])
        _emit(buf.getvalue(), args.out)
    else:
        _emit(_dump(table), args.out)
    return EXIT_OK


# verify
# ------

def _monoid(args) -> FiniteMonoid:
    if args.inp:
        try:
            with open(args.inp, encoding="utf-8") as fh:
                return FiniteMonoid.from_json(json.load(fh))
        except (OSError, ValueError, KeyError, TypeError) as exc:
            raise InputError(f"cannot read monoid from {args.inp}: {exc}") from exc
    n = _require_n(args)
    elements = enumerate_monoid(n, args.mode, cap=_cap(args, 6))
    if len(elements) > _cap(args, DEFAULT_CLOSURE_CAP):
        raise CapExceeded(f"|S|={len(elements)} exceeds the closure cap")
    return monoid_of_partial_maps(elements)


def _check(name, ok, **detail):
    return {"name": name, "pass": bool(ok), **detail}


def suite_inverse_axioms(args):
    S = _monoid(args)
    report = check_inverse_monoid(S)
    checks = [
        _check("monoid laws", not S.check_invariants()),
        _check("unique generalized inverses", report.ok,
               witnesses=[[a, inv] for a, inv in report.witnesses[:5]]),
    ]
    control = check_inverse_monoid(left_zero_with_identity())
    checks.append(_check("control monoid is rejected", not control.ok))
    return checks


def suite_ideals(args):
    S = _monoid(args)
    ideals = enumerate_all_ideals(S, cap=_cap(args, 500))
    checks = [_check("every listed set is an ideal",
                     all(is_ideal(S, i.members) for i in ideals),
                     sizes=[len(i) for i in ideals])]
    if not args.inp:
        expected = {frozenset()} | {rank_ideal(S, k).members for k in range(args.n + 1)}
        checks.append(_check("ideals are exactly the rank ideals and the empty set",
                             {i.members for i in ideals} == expected))
    return checks


def suite_rees(args):
    S = _monoid(args)
    checks = []
    for ideal in enumerate_all_ideals(S, cap=_cap(args, 500)):
        if not ideal.members:
            continue
        Q, q = rees_quotient(S, ideal)
        inside = S.zero is not None and S.zero in ideal
        ok = not Q.check_invariants() and check_homomorphism(q, S, Q)
        if inside:
            ok = ok and Q.order == S.order - len(ideal) + 1
        if S.star is not None and star_image(S, ideal.members) == ideal.members:
            ok = ok and Q.star is not None
        checks.append(_check(f"ideal of size {len(ideal)}", ok, order=Q.order))
    return checks


def suite_xi(args):
    n = _require_n(args)
    elements = enumerate_monoid(n, args.mode, cap=_cap(args, 6))
    mode = "Aut" if args.mode == "J" else "S"
    fins = [EllisElementFin(f, mode) for f in elements]
    cores = [xi_restrict(e) for e in fins]
    bijective = len(set(cores)) == len(fins) and set(cores) == set(elements)
    mismatches = sum(1 for e in fins for e2 in fins
                     if xi_restrict(ellis_compose(e, e2)) != compose(xi_restrict(e), xi_restrict(e2)))
    return [_check("xi is a bijection", bijective),
            _check("xi respects composition", mismatches == 0,
                   pairs=len(fins) ** 2, mismatches=mismatches)]


def random_bm_point(rng: random.Random):
    kind = rng.randrange(8)
    if kind == 0:
        return chain.INF
    if kind == 1:
        return chain.SUP
    x = Fraction(rng.randint(-50, 50), rng.randint(1, 12))
    if kind == 2:
        return chain.Gap(make_gap(x, Fraction(rng.choice([-1, 1]) * rng.randint(1, 9),
                                              rng.randint(1, 9))))
    return Tagged(x, rng.choice((-1, 0, 1)))


def suite_lattice(args):
    rng = random.Random(args.seed)
    up = (Space.BmX, Space.BlrX, Space.BplusX, Space.AlphaX)
    down = (Space.BmX, Space.BudX, Space.BplusX, Space.AlphaX)
    count = 10 ** 4
    bad = 0
    for _ in range(count):
        p = random_bm_point(rng)
        if chain.apply_path(up, p) != chain.apply_path(down, p):
            bad += 1
    arrows = {(a.source, a.target) for a in lattice_arrows()}
    return [_check("both paths BmX -> AlphaX agree", bad == 0, points=count, mismatches=bad),
            _check("BlrX and BudX are incomparable",
                   (Space.BlrX, Space.BudX) not in arrows and (Space.BudX, Space.BlrX) not in arrows)]


def cmd_verify(args) -> int:
    runner = {
        "inverse-axioms": suite_inverse_axioms,
        "ideals": suite_ideals,
        "rees": suite_rees,
        "xi": suite_xi,
        "lattice": suite_lattice,
    }[args.suite]
    checks = runner(args)
    ok = all(c["pass"] for c in checks)
    _emit(_dump({"suite": args.suite, "pass": ok, "checks": checks}), args.out)
    return EXIT_OK if ok else EXIT_FAIL


# witness
# -------

def cmd_witness(args) -> int:
    if not args.inp:
        raise InputError("witness needs --in <observation.json>")
    try:
        with open(args.inp, encoding="utf-8") as fh:
            data = json.load(fh)
    except OSError as exc:
        raise InputError(f"cannot read {args.inp}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise InputError(f"{args.inp}: line {exc.lineno} column {exc.colno}: {exc.msg}") from exc
    if not isinstance(data, dict):
        raise InputError("an observation must be a JSON object")
    try:
        obs = observation_from_json(data)
    except IllegalObservation as exc:
        raise InputError(str(exc)) from exc
    mode = args.mode_override or data.get("mode")
    if obs.space is Space.AlphaX and mode not in (None, "S", "Aut"):
        raise InputError("AlphaX observations take mode S or Aut")
    verdict = check_membership(obs, mode)
    out = verdict.to_json()
    if verdict.consistent:
        try:
            if obs.space is Space.AlphaX and (mode or "S") == "S":
                w = permutation_witness(obs)
                out["witness"] = {"kind": "permutation", "pairs": w.to_json()}
                out["recheck"] = "pass" if recheck(obs, w) else "fail"
            else:
                g = ellis_witness(obs, mode)
                out["witness"] = {"kind": "pl", "breakpoints": g.to_json()}
                out["recheck"] = "pass" if recheck(obs, extension(g, obs.space)) else "fail"
        except UnwitnessableTarget as exc:
            out["witness"] = None
            out["note"] = str(exc)
    _emit(_dump(out), args.out)
    return EXIT_FAIL if out.get("recheck") == "fail" else EXIT_OK


# lattice
# -------

def cmd_lattice(args) -> int:
    arrows = [{"source": a.source.value, "target": a.target.value, "elementary": a.elementary}
              for a in lattice_arrows()]
    paths = {f"{a['source']}->{a['target']}":
             [s.value for s in chain.find_path(Space(a["source"]), Space(a["target"]))]
             for a in arrows}
    _emit(_dump({"arrows": arrows, "paths": paths}), args.out)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="ellislab", description=__doc__.split("\n")[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--out", help="write output here instead of stdout")
        p.add_argument("--cap", type=int, help="override the size cap")
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--format", choices=("json", "csv"), default="json")

    p = sub.add_parser("enumerate", help="list I_n or J_n with rank-ideal data")
    p.add_argument("--n", type=int)
    p.add_argument("--mode", choices=("I", "J"), default="I")
    common(p)

    p = sub.add_parser("verify", help="run one property suite")
    p.add_argument("--suite", choices=SUITES, required=True)
    p.add_argument("--n", type=int, default=3)
    p.add_argument("--mode", choices=("I", "J"), default="I")
    p.add_argument("--in", dest="inp", help="FiniteMonoid JSON instead of I_n/J_n")
    common(p)

    p = sub.add_parser("witness", help="check an observation and build a witness")
    p.add_argument("--in", dest="inp")
    p.add_argument("--mode", dest="mode_override", choices=("S", "Aut", "br"))
    common(p)

    p = sub.add_parser("lattice", help="report the quotient lattice")
    common(p)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_INPUT
    if args.format == "csv" and args.command != "enumerate":
        print("error: --format csv is only available for enumerate", file=sys.stderr)
        return EXIT_INPUT
    handler = {"enumerate": cmd_enumerate, "verify": cmd_verify,
               "witness": cmd_witness, "lattice": cmd_lattice}[args.command]
    try:
        return handler(args)
    except CapExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CAP
    except (InputError, ValueError, EllisLabError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
