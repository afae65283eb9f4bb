"""Random instances for property tests and demos.

All coordinates are drawn from small-denominator lattices so that
composites routinely hit jump points and shared endpoints.
"""

from __future__ import annotations

import random
from fractions import Fraction
from typing import List, Optional

from .relation import Cell, Fun, Piece, Rel, graph
from .semilinear import FSet, Interval, Space


def random_space(rng: random.Random, isolated: bool = False) -> Space:
    """[0,1], two intervals, or (optionally) an interval plus isolated points."""
    choice = rng.randrange(3 if isolated else 2)
    if choice == 0:
        return Space.unit()
    if choice == 1:
        return Space([(0, Fraction(1, 2)), (Fraction(3, 4), Fraction(5, 4))])
    return Space([(0, 1), Fraction(3, 2), 2])


def _cuts(rng: random.Random, lo: Fraction, hi: Fraction, den: int, max_pieces: int) -> List[Fraction]:
    steps = int((hi - lo) * den)
    inner = set()
    if steps > 1:
        for _ in range(rng.randint(0, max_pieces - 1)):
            inner.add(lo + Fraction(rng.randint(1, steps - 1), den))
    return [lo] + sorted(inner) + [hi]


def _endpoint_value(rng: random.Random, comp: Interval, den: int) -> Fraction:
    return comp.lo + Fraction(rng.randint(0, int((comp.hi - comp.lo) * den)), den)


def random_suitable_map(
    rng: random.Random,
    src: Space,
    dst: Space,
    den: int = 4,
    max_pieces: int = 3,
    jumps: bool = True,
) -> Fun:
    """Piecewise-affine map with nonzero slopes; pieces may jump at their ends.

    The closure of its graph is a suitable relation: singleton fibres off
    finitely many jump points, and no horizontal pieces.  Isolated points of
    ``src`` go to isolated points of ``dst`` (or to interval components when
    ``dst`` has none, which breaks almost-openness; avoid that pairing).
    """
    iso_dst = [c for c in dst.components if c.is_point]
    ivs_dst = [c for c in dst.components if not c.is_point]
    pieces, points = [], []
    for comp in src.components:
        if comp.is_point:
            pool = iso_dst or ivs_dst
            target = rng.choice(pool)
            points.append((comp.lo, target.lo))
            continue
        cuts = _cuts(rng, comp.lo, comp.hi, den, max_pieces)
        prev_end: Optional[Fraction] = None
        prev_comp = None
        for t, (a, b) in enumerate(zip(cuts, cuts[1:])):
            target = rng.choice(ivs_dst)
            if prev_end is not None and (not jumps or rng.random() < 0.5) and prev_comp is target:
                ya = prev_end
            else:
                ya = _endpoint_value(rng, target, den)
            yb = _endpoint_value(rng, target, den)
            while yb == ya:
                yb = _endpoint_value(rng, target, den)
            m = (yb - ya) / (b - a)
            pieces.append(Piece(Interval(a, b), m, ya - m * a))
            prev_end, prev_comp = yb, target
    # make piece domains disjoint: each piece owns its left end, the last owns both
    fixed = []
    for i, p in enumerate(pieces):
        nxt = pieces[i + 1] if i + 1 < len(pieces) else None
        owns_right = nxt is None or nxt.interval.lo != p.interval.hi
        fixed.append(Piece(Interval(p.interval.lo, p.interval.hi, True, owns_right), p.slope, p.intercept))
    return Fun(src, dst, fixed, points)


def random_suitable(rng: random.Random, src: Optional[Space] = None, dst: Optional[Space] = None, **kw) -> Rel:
    src = src or Space.unit()
    dst = dst or src
    return graph(random_suitable_map(rng, src, dst, **kw)).simplified()


def random_interval_exchange(rng: random.Random, space: Optional[Space] = None, den: int = 4, max_pieces: int = 3) -> Rel:
    """Permute and possibly reverse the pieces of a partition of each component.

    The closed graph and its inverse are both suitable, so this is a
    suitable isomorphism.
    """
    space = space or Space.unit()
    cells = []
    for comp in space.components:
        if comp.is_point:
            cells.append(((comp.lo, comp.lo),))
            continue
        cuts = _cuts(rng, comp.lo, comp.hi, den, max_pieces)
        lengths = [b - a for a, b in zip(cuts, cuts[1:])]
        order = list(range(len(lengths)))
        rng.shuffle(order)
        starts, pos = {}, comp.lo
        for i in order:
            starts[i] = pos
            pos += lengths[i]
        for i, (a, b) in enumerate(zip(cuts, cuts[1:])):
            c, d = starts[i], starts[i] + lengths[i]
            if rng.random() < 0.5:
                c, d = d, c
            cells.append(((a, c), (b, d)))
    return Rel(space, space, cells).simplified()


def random_continuous_map(
    rng: random.Random,
    space: Optional[Space] = None,
    den: int = 8,
    max_pieces: int = 4,
    lipschitz: Optional[Fraction] = None,
    surjective: bool = False,
) -> Fun:
    """Continuous piecewise-affine self-map of a space, joining random node values.

    ``lipschitz`` bounds every slope; ``surjective`` pins two nodes of each
    interval component to its ends (ignored when ``lipschitz`` is given).
    """
    space = space or Space.unit()
    pieces = []
    for comp in space.components:
        if comp.is_point:
            continue
        cuts = _cuts(rng, comp.lo, comp.hi, den, max_pieces)
        fine = den * 4
        ys = [_endpoint_value(rng, comp, den)]
        for a, b in zip(cuts, cuts[1:]):
            lo, hi = comp.lo, comp.hi
            if lipschitz is not None:
                lo = max(lo, ys[-1] - lipschitz * (b - a))
                hi = min(hi, ys[-1] + lipschitz * (b - a))
            ys.append(lo + Fraction(rng.randint(0, int((hi - lo) * fine)), fine))
        if surjective and lipschitz is None:
            i, j = rng.sample(range(len(ys)), 2)
            ys[i], ys[j] = comp.lo, comp.hi
        for t, (a, b) in enumerate(zip(cuts, cuts[1:])):
            m = (ys[t + 1] - ys[t]) / (b - a)
            pieces.append(Piece(Interval(a, b, True, t == len(cuts) - 2), m, ys[t] - m * a))
    points = [(c.lo, c.lo) for c in space.components if c.is_point]
    return Fun(space, space, pieces, points)


def random_homeomorphism(rng: random.Random, space: Optional[Space] = None, den: int = 8, max_pieces: int = 4) -> Fun:
    """Strictly monotone piecewise-affine bijection of each interval component onto itself."""
    space = space or Space.unit()
    pieces = []
    for comp in space.components:
        if comp.is_point:
            continue
        cuts = _cuts(rng, comp.lo, comp.hi, den, max_pieces)
        fine = den * 4
        steps = int((comp.hi - comp.lo) * fine)
        inner = sorted(rng.sample(range(1, steps), len(cuts) - 2))
        ys = [comp.lo] + [comp.lo + Fraction(i, fine) for i in inner] + [comp.hi]
        if rng.random() < 0.5:
            ys = [comp.lo + comp.hi - y for y in ys]
        for t, (a, b) in enumerate(zip(cuts, cuts[1:])):
            m = (ys[t + 1] - ys[t]) / (b - a)
            pieces.append(Piece(Interval(a, b, True, t == len(cuts) - 2), m, ys[t] - m * a))
    points = [(c.lo, c.lo) for c in space.components if c.is_point]
    return Fun(space, space, pieces, points)


def random_cell(rng: random.Random, src: Space, dst: Space, den: int = 8) -> Cell:
    cx = rng.choice([c for c in src.components])
    cy = rng.choice([c for c in dst.components])
    k = rng.choice((1, 2, 2, 3, 3, 4))
    pts = [(_endpoint_value(rng, cx, den), _endpoint_value(rng, cy, den)) for _ in range(k)]
    return Cell(pts)


def random_relation(rng: random.Random, src: Optional[Space] = None, dst: Optional[Space] = None, max_cells: int = 4, den: int = 8) -> Rel:
    """Union of a few random points, segments and convex polygons."""
    src = src or Space.unit()
    dst = dst or src
    return Rel(src, dst, [random_cell(rng, src, dst, den) for _ in range(rng.randint(1, max_cells))])


def random_full_domain_relation(rng: random.Random, src: Optional[Space] = None, dst: Optional[Space] = None, **kw) -> Rel:
    """A random relation together with a random continuous graph, so every fibre is nonempty."""
    src = src or Space.unit()
    dst = dst or src
    base = random_relation(rng, src, dst, **kw)
    g = random_suitable_map(rng, src, dst, jumps=False)
    return Rel(src, dst, base.cells + graph(g).cells)


def random_closed_set(rng: random.Random, space: Space, den: int = 8, max_parts: int = 3) -> FSet:
    parts = []
    for _ in range(rng.randint(1, max_parts)):
        comp = rng.choice(space.components)
        a, b = sorted((_endpoint_value(rng, comp, den), _endpoint_value(rng, comp, den)))
        parts.append(Interval(a, b))
    return FSet(space, parts)


def random_flagged_set(rng: random.Random, space: Space, den: int = 8, max_parts: int = 3) -> FSet:
    parts = []
    for _ in range(rng.randint(0, max_parts)):
        comp = rng.choice(space.components)
        a, b = sorted((_endpoint_value(rng, comp, den), _endpoint_value(rng, comp, den)))
        parts.append(Interval(a, b, rng.random() < 0.5, rng.random() < 0.5))
    return FSet(space, parts)


def random_open_interval_set(rng: random.Random, space: Space, den: int = 8) -> FSet:
    comp = rng.choice([c for c in space.components if not c.is_point] or list(space.components))
    if comp.is_point:
        return FSet(space, [comp])
    a, b = sorted((_endpoint_value(rng, comp, den), _endpoint_value(rng, comp, den)))
    if a == b:
        b = a + Fraction(1, den) if a < comp.hi else a
        a = a - Fraction(1, den) if a == b else a
    return FSet.clipped(space, [Interval(a, b, False, False)])
