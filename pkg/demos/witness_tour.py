"""Check a few observations in BmX and build exact piecewise-linear witnesses."""
from fractions import Fraction as F

from ellislab.approx import ellis_witness, extension, recheck
from ellislab.chain import Space, Tagged
from ellislab.ellis import Exactly, InInterval, Observation, check_membership


def T(x, j=0):
    return Tagged(F(x), j)


cases = {
    "shift a triple": [(T(0, -1), Exactly(T(1, -1))), (T(0), Exactly(T(1)))],
    "split a triple": [(T(0, -1), Exactly(T(1, -1))), (T(0), Exactly(T(2)))],
    "order reversal": [(T(0), Exactly(T(2))), (T(1), Exactly(T(1)))],
    "land in a window": [(T(0), Exactly(T(5))), (T(2), InInterval(T(6), T(7)))],
}

for name, entries in cases.items():
    obs = Observation(Space.BmX, entries)
    verdict = check_membership(obs)
    line = f"{name:18s} {'consistent' if verdict.consistent else 'refuted ' + verdict.clause}"
    if verdict.consistent:
        g = ellis_witness(obs)
        ok = recheck(obs, extension(g, Space.BmX))
        line += f"  witness breakpoints {g.to_json()}  recheck {'pass' if ok else 'fail'}"
    print(line)
