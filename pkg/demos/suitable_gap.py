"""Plain composition can pick up stray points that suitable composition drops."""

from relcalc import closure_of_difference, compose, graph, map_analysis, suitable_compose, unique_minimal
from relcalc import library as lib
from relcalc.errors import NonUniqueMinimal

h = lib.split_map()
print("h maps", h.src, "onto", h.dst)
print("analysis:", map_analysis(h))

plain = compose(lib.flip(), graph(h))
suit = suitable_compose(lib.flip(), graph(h))
print()
print("plain    :", plain)
print("suitable :", suit)
print("gap      :", closure_of_difference(plain, suit))

print()
sq = compose(lib.extended_flip(), lib.extended_flip())
try:
    unique_minimal(sq)
except NonUniqueMinimal as e:
    print("extended flip squared has no unique minimal part; thick fibres over", e.witness)
