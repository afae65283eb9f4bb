"""Closed piecewise-linear relations and their operator calculus.

A ``Rel`` is a finite union of closed convex rational cells inside
``src x dst``.  All operators are exact.  Equality is decided on the
canonical vertical decomposition, so ``Rel.__eq__`` is semantic.
"""

from __future__ import annotations

import os
from bisect import bisect_right
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional, Sequence

from . import decomposition as dec
from .errors import (
    CellLimitExceeded,
    InputError,
    NegativeEpsilon,
    NonClosedRestriction,
    PointOutsideSpace,
    SpaceMismatch,
    Unreachable,
)
from .geometry import clip_box, clip_halfplane, compose_cells, hull, swap, x_range, y_range
from .semilinear import FSet, Interval, Space, as_rat, fmt_rat, normalize

DEFAULT_MAX_CELLS = 100_000


def max_cells() -> int:
    raw = os.environ.get("RELCALC_MAX_CELLS")
    if not raw:
        return DEFAULT_MAX_CELLS
    try:
        return int(raw)
    except ValueError:
        raise InputError(f"RELCALC_MAX_CELLS must be an integer, got {raw!r}") from None


class Cell(tuple):
    """Vertices of a closed convex cell in normal form."""

    __slots__ = ()

    def __new__(cls, vertices: Iterable):
        pts = [(as_rat(v[0]), as_rat(v[1])) for v in vertices]
        return super().__new__(cls, hull(pts))

    @classmethod
    def _raw(cls, normal: tuple) -> "Cell":
        return super().__new__(cls, normal)

    @classmethod
    def point(cls, x, y) -> "Cell":
        return cls([(x, y)])

    @classmethod
    def segment(cls, a, b) -> "Cell":
        return cls([a, b])

    @classmethod
    def box(cls, x0, x1, y0, y1) -> "Cell":
        return cls([(x0, y0), (x1, y0), (x1, y1), (x0, y1)])

    @property
    def kind(self) -> str:
        return {1: "point", 2: "segment"}.get(len(self), "polygon")

    @property
    def vertices(self) -> tuple:
        return tuple(self)

    def __repr__(self):
        pts = ", ".join(f"({fmt_rat(x)}, {fmt_rat(y)})" for x, y in self)
        return f"Cell[{self.kind}]({pts})"


def _fits(space: Space, lo, hi) -> bool:
    c = space.component_of(lo)
    return c is not None and hi <= c.hi


class Rel:
    """A closed relation ``src -> dst`` given by convex cells."""

    __slots__ = ("src", "dst", "cells", "_vd", "_inv", "_simple")

    def __init__(self, src: Space, dst: Space, cells: Iterable = (), *, _trusted: bool = False):
        if _trusted:
            normal = tuple(Cell._raw(c) for c in cells if c)
        else:
            normal = []
            for c in cells:
                cell = c if isinstance(c, Cell) else Cell(c)
                if not cell:
                    continue
                x0, x1 = x_range(cell)
                y0, y1 = y_range(cell)
                if not _fits(src, x0, x1) or not _fits(dst, y0, y1):
                    raise PointOutsideSpace(f"{cell!r} does not lie in ({src}) x ({dst})")
                normal.append(cell)
            normal = tuple(normal)
        self.src = src
        self.dst = dst
        self.cells = normal
        self._vd = None
        self._inv = None
        self._simple = None

    def canonical(self) -> dec.Decomposition:
        if self._vd is None:
            self._vd = dec.decompose(self.cells)
        return self._vd

    def simplified(self) -> "Rel":
        """Same point set, rebuilt from the canonical form (usually fewer cells)."""
        if self._simple is None:
            r = Rel(self.src, self.dst, dec.to_cells(self.canonical()), _trusted=True)
            r._vd = self._vd
            r._simple = r
            self._simple = r
        return self._simple

    @property
    def is_empty(self) -> bool:
        return not self.cells

    def __eq__(self, other):
        if not isinstance(other, Rel):
            return NotImplemented
        return self.src == other.src and self.dst == other.dst and self.canonical() == other.canonical()

    def __hash__(self):
        return hash((self.src, self.dst, self.canonical()))

    def __repr__(self):
        return f"Rel({self.src} -> {self.dst}, {len(self.cells)} cells)"

    def __str__(self):
        body = "; ".join(repr(c) for c in self.simplified().cells) or "∅"
        return f"Rel[{self.src} -> {self.dst}]: {body}"


# constructors


def identity(space: Space) -> Rel:
    return Rel(space, space, [hull(((c.lo, c.lo), (c.hi, c.hi))) for c in space.components], _trusted=True)


def product(a: FSet, b: FSet) -> Rel:
    """``A x B`` for closed sets ``A`` and ``B``."""
    if not a.is_closed or not b.is_closed:
        raise NonClosedRestriction("a product relation needs closed factors")
    cells = [Cell.box(p.lo, p.hi, q.lo, q.hi) for p in a.parts for q in b.parts]
    return Rel(a.space, b.space, cells, _trusted=True)


def constant(src: Space, dst: Space, y) -> Rel:
    y = dst.check_point(y)
    return product(src.full(), FSet.of(dst, y))


def union(a: Rel, b: Rel) -> Rel:
    _same_spaces(a, b)
    return Rel(a.src, a.dst, a.cells + b.cells, _trusted=True)


# core calculus


def _same_spaces(a: Rel, b: Rel):
    if a.src != b.src or a.dst != b.dst:
        raise SpaceMismatch("relations have different source or destination spaces")


def _check_limit(n: int):
    limit = max_cells()
    if n > limit:
        raise CellLimitExceeded(f"cell count {n} exceeds RELCALC_MAX_CELLS={limit}")


def compose(g: Rel, f: Rel) -> Rel:
    """``G o F = {(x, z) : (x, y) in F, (y, z) in G for some y}``."""
    if f.dst != g.src:
        raise SpaceMismatch(f"cannot compose: {f.dst} is not {g.src}")
    fc = f.simplified().cells
    gc = sorted(g.simplified().cells, key=lambda c: x_range(c)[0])
    g_lo = [x_range(c)[0] for c in gc]
    g_hi = [x_range(c)[1] for c in gc]
    out = []
    for a in fc:
        y0, y1 = y_range(a)
        for j in range(bisect_right(g_lo, y1)):
            if g_hi[j] >= y0:
                c = compose_cells(a, gc[j])
                if c:
                    out.append(c)
        _check_limit(len(out))
    r = Rel(f.src, g.dst, out, _trusted=True).simplified()
    _check_limit(len(r.cells))
    return r


def inverse(f: Rel) -> Rel:
    if f._inv is None:
        inv = Rel(f.dst, f.src, [swap(c) for c in f.cells], _trusted=True)
        inv._inv = f
        f._inv = inv
    return f._inv


def image(f: Rel, a: FSet) -> FSet:
    if a.space != f.src:
        raise SpaceMismatch(f"set lives in {a.space}, relation source is {f.src}")
    return FSet(f.dst, dec.image_parts(f.canonical(), a.parts), _trusted=True)


def preimage(f: Rel, b: FSet) -> FSet:
    if b.space != f.dst:
        raise SpaceMismatch(f"set lives in {b.space}, relation destination is {f.dst}")
    return image(inverse(f), b)


def costar(f: Rel, b: FSet) -> FSet:
    """``F*(B) = {x : F(x) is a subset of B}``."""
    return preimage(f, b.complement()).complement()


def domain(f: Rel) -> FSet:
    return FSet(f.src, dec.domain_parts(f.canonical()), _trusted=True)


def fiber(f: Rel, x) -> FSet:
    x = f.src.check_point(x)
    ivs = dec.fiber_at(f.canonical(), x)
    return FSet(f.dst, tuple(Interval(lo, hi, True, True) for lo, hi in ivs), _trusted=True)


def iterate(f: Rel, n: int) -> Rel:
    if f.src != f.dst:
        raise SpaceMismatch("iterates need a relation from a space to itself")
    if n == 0:
        return identity(f.src)
    base = inverse(f) if n < 0 else f
    out = base.simplified()
    for _ in range(abs(n) - 1):
        out = compose(base, out)
    return out


def restrict(f: Rel, a: FSet, b: FSet) -> Rel:
    """``F`` intersected with ``A x B`` (both closed)."""
    if a.space != f.src or b.space != f.dst:
        raise SpaceMismatch("restriction sets must live in the relation's spaces")
    if not a.is_closed or not b.is_closed:
        raise NonClosedRestriction("restriction needs closed sets")
    out = []
    for c in f.cells:
        for p in a.parts:
            for q in b.parts:
                r = clip_box(c, p.lo, p.hi, q.lo, q.hi)
                if r:
                    out.append(r)
    return Rel(f.src, f.dst, out, _trusted=True)


def equals(a: Rel, b: Rel) -> bool:
    _same_spaces(a, b)
    return a.canonical() == b.canonical()


def closure_of_difference(a: Rel, b: Rel) -> Rel:
    """The closure of the point set ``A minus B``."""
    _same_spaces(a, b)
    cells = dec.closure_of_difference(a.canonical(), b.canonical())
    return Rel(a.src, a.dst, cells, _trusted=True).simplified()


def is_subset(a: Rel, b: Rel) -> bool:
    _same_spaces(a, b)
    return not dec.closure_of_difference(a.canonical(), b.canonical())


def v_epsilon(space: Space, eps, closed: bool = True) -> Rel:
    """The band ``|x - y| <= eps`` in ``space x space``.

    With ``closed=False`` the band is strict; being open it is returned as its
    closure, which is the closed band for ``eps > 0`` and empty for ``eps = 0``.
    """
    eps = as_rat(eps)
    if eps < 0:
        raise NegativeEpsilon(f"epsilon must be nonnegative, got {fmt_rat(eps)}")
    if not closed and eps == 0:
        return Rel(space, space, (), _trusted=True)
    cells = []
    for p in space.components:
        for q in space.components:
            box = hull(((p.lo, q.lo), (p.hi, q.lo), (p.hi, q.hi), (p.lo, q.hi)))
            c = clip_halfplane(box, -1, 1, eps)
            if c:
                c = clip_halfplane(c, 1, -1, eps)
            if c:
                cells.append(c)
    return Rel(space, space, cells, _trusted=True)


MODULUS_STEPS = 200


def modulus(f: Rel, a: FSet, eps) -> Fraction:
    """A verified ``delta > 0`` with ``F(V_delta(A))`` inside ``V_eps(F(A))``."""
    eps = as_rat(eps)
    if eps < 0:
        raise NegativeEpsilon(f"epsilon must be nonnegative, got {fmt_rat(eps)}")
    if eps == 0:
        raise InputError("modulus needs a positive epsilon")
    if a.space != f.src:
        raise SpaceMismatch(f"set lives in {a.space}, relation source is {f.src}")
    if a.is_empty or not a.is_closed:
        raise InputError("modulus needs a closed nonempty set")
    target = image(f, a).thicken(eps)
    delta = eps
    for _ in range(MODULUS_STEPS):
        if image(f, a.thicken(delta)).issubset(target):
            return delta
        delta /= 2
    raise Unreachable(f"no delta found after {MODULUS_STEPS} halvings")


# piecewise-affine functions


@dataclass(frozen=True)
class Piece:
    interval: Interval
    slope: Fraction
    intercept: Fraction

    def at(self, x) -> Fraction:
        return self.slope * x + self.intercept


class Fun:
    """A piecewise-affine partial function ``src -> dst``."""

    __slots__ = ("src", "dst", "pieces", "points")

    def __init__(self, src: Space, dst: Space, pieces: Iterable = (), points: Iterable = ()):
        ps = []
        for p in pieces:
            if not isinstance(p, Piece):
                iv, m, c = p
                p = Piece(iv, as_rat(m), as_rat(c))
            if p.interval.is_empty:
                continue
            if not _fits(src, p.interval.lo, p.interval.hi):
                raise PointOutsideSpace(f"piece domain {p.interval} is not inside {src}")
            ya, yb = sorted((p.at(p.interval.lo), p.at(p.interval.hi)))
            if not _fits(dst, ya, yb):
                raise PointOutsideSpace(f"piece over {p.interval} leaves {dst}")
            ps.append(p)
        pts = []
        for x, y in points:
            x, y = src.check_point(x), dst.check_point(y)
            pts.append((x, y))
        ps.sort(key=lambda p: (p.interval.lo, not p.interval.lo_closed))
        pts.sort()
        doms = [p.interval for p in ps] + [Interval(x, x, True, True) for x, _ in pts]
        doms.sort(key=lambda iv: (iv.lo, not iv.lo_closed))
        for u, v in zip(doms, doms[1:]):
            if not u.intersect(v).is_empty:
                raise InputError(f"function pieces overlap: {u} and {v}")
        self.src = src
        self.dst = dst
        self.pieces = tuple(ps)
        self.points = tuple(pts)

    @classmethod
    def affine(cls, src: Space, dst: Space, slope, intercept) -> "Fun":
        """One affine rule on every component of ``src``."""
        m, c = as_rat(slope), as_rat(intercept)
        pieces, points = [], []
        for comp in src.components:
            if comp.is_point:
                points.append((comp.lo, m * comp.lo + c))
            else:
                pieces.append(Piece(comp, m, c))
        return cls(src, dst, pieces, points)

    @classmethod
    def identity(cls, space: Space) -> "Fun":
        return cls.affine(space, space, 1, 0)

    def __call__(self, x) -> Optional[Fraction]:
        x = as_rat(x)
        for p in self.pieces:
            if p.interval.contains(x):
                return p.at(x)
        for px, py in self.points:
            if px == x:
                return py
        return None

    def domain(self) -> FSet:
        parts = [p.interval for p in self.pieces] + [Interval(x, x, True, True) for x, _ in self.points]
        return FSet(self.src, normalize(parts), _trusted=True)

    @property
    def is_total(self) -> bool:
        return self.domain() == self.src.full()

    def breakpoints(self) -> list:
        out = set()
        for p in self.pieces:
            out.add(p.interval.lo)
            out.add(p.interval.hi)
        out.update(x for x, _ in self.points)
        return sorted(out)

    def one_sided_slope(self, x, side: int) -> Optional[Fraction]:
        """Slope of the piece just left (``side=-1``) or right (``+1``) of ``x``."""
        for p in self.pieces:
            iv = p.interval
            if side < 0 and iv.lo < x <= iv.hi:
                return p.slope
            if side > 0 and iv.lo <= x < iv.hi:
                return p.slope
        return None

    def __eq__(self, other):
        return (
            isinstance(other, Fun)
            and (self.src, self.dst, self.pieces, self.points) == (other.src, other.dst, other.pieces, other.points)
        )

    def __hash__(self):
        return hash((self.src, self.dst, self.pieces, self.points))

    def __repr__(self):
        body = [f"{p.interval} ↦ {fmt_rat(p.slope)}x + {fmt_rat(p.intercept)}" for p in self.pieces]
        body += [f"{fmt_rat(x)} ↦ {fmt_rat(y)}" for x, y in self.points]
        return "Fun(" + "; ".join(body) + ")"


def graph(g: Fun) -> Rel:
    """The closure of the graph of ``g`` (its graph when ``g`` is total and continuous)."""
    cells = []
    for p in g.pieces:
        lo, hi = p.interval.lo, p.interval.hi
        cells.append(hull(((lo, p.at(lo)), (hi, p.at(hi)))))
    cells += [((x, y),) for x, y in g.points]
    return Rel(g.src, g.dst, cells, _trusted=True)


def fun_from_singletons(f: Rel) -> Fun:
    """The map ``x -> y`` on the set where the fibre of ``f`` is ``{y}``."""
    slabs, points = dec.singleton_pieces(f.canonical())
    pieces = [Piece(Interval(a, b, False, False), m, c) for a, b, m, c in slabs]
    return Fun(f.src, f.dst, _join_pieces(pieces, points), [])


def _join_pieces(pieces: Sequence[Piece], points: Sequence) -> list:
    """Absorb isolated assignments and glue neighbouring pieces of one affine rule."""
    items = list(pieces) + [Piece(Interval(x, x, True, True), Fraction(0), y) for x, y in points]
    items.sort(key=lambda p: (p.interval.lo, not p.interval.lo_closed))
    out: list = []
    for p in items:
        if out:
            q = out[-1]
            touching = q.interval.hi == p.interval.lo and (q.interval.hi_closed or p.interval.lo_closed)
            if touching:
                x = p.interval.lo
                if p.interval.is_point and q.at(x) == p.intercept:
                    out[-1] = Piece(Interval(q.interval.lo, x, q.interval.lo_closed, True), q.slope, q.intercept)
                    continue
                if q.interval.is_point and p.at(x) == q.intercept:
                    out[-1] = Piece(Interval(x, p.interval.hi, True, p.interval.hi_closed), p.slope, p.intercept)
                    continue
                if (q.slope, q.intercept) == (p.slope, p.intercept):
                    out[-1] = Piece(Interval(q.interval.lo, p.interval.hi, q.interval.lo_closed, p.interval.hi_closed), q.slope, q.intercept)
                    continue
        out.append(p)
    return [Piece(p.interval, Fraction(0), p.intercept) if p.interval.is_point else p for p in out]
