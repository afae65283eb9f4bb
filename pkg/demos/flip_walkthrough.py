"""The flip relation: composition, suitability, orbits and the iterate table."""

from fractions import Fraction

from relcalc import compose, orbit, pair_table, suitability_report, suitable_compose
from relcalc import library as lib

F = lib.flip()
print("F      =", F)
print("F o F  =", compose(F, F))
print("F • F  =", suitable_compose(F, F))
print()
print("report:", suitability_report(F).as_dict())
print()
for x in (Fraction(1, 3), Fraction(1, 2), Fraction(1, 8)):
    res = orbit(F, x, 10)
    print(f"orbit of {x}: {[str(p) for p in res.points]}  {res.status}")
print()
for row in pair_table(F, -4, 4).rows:
    print(f"n={row.n:+d}  plain cells={len(row.iterate.cells)}  suitable cells={len(row.suitable.cells)}  gap={row.gap}")
