"""Box covers of a composite shrink toward the exact composite as the level grows."""

import random

from relcalc import compose, graph, grid_compose, hausdorff, rasterize
from relcalc import generators as gen
from relcalc import library as lib

rng = random.Random(1)
f = lib.flip()
g = graph(gen.random_homeomorphism(rng))
exact = compose(g, f)
ref = rasterize(exact, 9)

print(" k   boxes   d(cover)*2^k   d(grid composite)*2^k")
for k in range(1, 9):
    cover = rasterize(exact, k)
    approx = grid_compose(rasterize(g, k), rasterize(f, k))
    assert cover <= approx
    scale = 1 << k
    print(f"{k:2d} {approx.count():7d} {float(hausdorff(cover, ref) * scale):14.3f} {float(hausdorff(approx, ref) * scale):23.3f}")
