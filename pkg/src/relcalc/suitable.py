"""Singleton fibres, minimal subrelations and suitable composition.

``one_set`` and ``singleton_map`` read the set where fibres are single
points straight off the canonical decomposition.  Irreducibility for the
first projection is decided by comparing a relation with the closure of its
singleton map; almost-openness for the second projection by checking that
the cells whose projections have interior are dense in the relation.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import NamedTuple

from . import decomposition as dec
from .errors import (
    DomainNotDense,
    NonUniqueMinimal,
    NotContinuous,
    NotFullDomain,
    NotIsomorphism,
    NotSuitable,
    NotTotal,
    SpaceMismatch,
    Unreachable,
)
from .geometry import clip_halfplane, compose_cells, hull
from .relation import (
    Fun,
    Rel,
    compose,
    closure_of_difference,
    domain,
    fun_from_singletons,
    graph,
    identity,
    image,
    inverse,
    is_subset,
    preimage,
    restrict,
)
from .semilinear import FSet, Interval


def one_set(f: Rel) -> FSet:
    """Points whose fibre is a single point."""
    slabs, points = dec.singleton_pieces(f.canonical())
    parts = [Interval(a, b, False, False) for a, b, _, _ in slabs] + [Interval(x, x, True, True) for x, _ in points]
    return FSet(f.src, parts)


def singleton_map(f: Rel) -> Fun:
    """The densely defined map carried by ``f`` on its singleton-fibre set."""
    return fun_from_singletons(f)


def closure_of_function(g: Fun) -> Rel:
    if not g.domain().is_dense():
        raise DomainNotDense(f"domain {g.domain()} is not dense in {g.src}")
    return graph(g).simplified()


def unique_minimal(f: Rel) -> Rel:
    """The unique closed full-domain subrelation that is minimal, or a refusal."""
    missing = f.src.full().difference(domain(f))
    if missing:
        raise NotFullDomain(f"empty fibres over {missing}", witness=missing.parts[0])
    one = one_set(f)
    thin = one.closure().complement()
    if thin:
        raise NonUniqueMinimal(f"fibres are not single points anywhere on {thin}", witness=thin.parts[0])
    return graph(singleton_map(f)).simplified()


def is_pi1_irreducible(f: Rel) -> bool:
    if domain(f) != f.src.full():
        return False
    if not one_set(f).is_dense():
        return False
    return graph(singleton_map(f)) == f


def _open_projection_part(f: Rel) -> Rel:
    """Closure of the part of ``f`` whose open pieces project onto sets with interior."""
    good = []
    for c in dec.to_cells(f.canonical()):
        if len(c) >= 3 or (len(c) == 2 and c[0][1] != c[1][1]):
            good.append(c)
    for p in f.dst.isolated_points():
        good.extend(restrict(f, f.src.full(), FSet.of(f.dst, p)).cells)
    return Rel(f.src, f.dst, good, _trusted=True)


def is_pi2_almost_open(f: Rel) -> bool:
    """Every nonempty relatively open piece of ``f`` has a second projection with interior."""
    return _open_projection_part(f) == f


def projection_density_test(f: Rel) -> bool:
    """Density of the x-shadow of cells with open second projections.

    Agrees with ``is_pi2_almost_open`` whenever ``f`` is irreducible for the
    first projection; kept as an independent cross-check.
    """
    shadow = []
    for c in dec.to_cells(f.canonical()):
        xs = [v[0] for v in c]
        if len(c) >= 3 or (len(c) == 2 and c[0][1] != c[1][1]):
            shadow.append(Interval(min(xs), max(xs), True, True))
    for p in f.dst.isolated_points():
        shadow.extend(domain(restrict(f, f.src.full(), FSet.of(f.dst, p))).parts)
    return FSet(f.src, shadow).is_dense()


def open_image_probe(f: Rel, u: FSet) -> bool:
    """Does ``F(U)`` have nonempty interior?"""
    return not image(f, u).interior().is_empty


def random_open_set(space, rng: random.Random) -> FSet:
    """A small nonempty open subset: an interval around a random point, or an isolated point."""
    comp = rng.choice(space.components)
    if comp.is_point:
        return FSet(space, [comp])
    t = Fraction(rng.randint(0, 64), 64)
    centre = comp.lo + t * (comp.hi - comp.lo)
    radius = (comp.hi - comp.lo) / (2 ** rng.randint(2, 7))
    return FSet.clipped(space, [Interval(centre - radius, centre + radius, False, False)])


def sampled_almost_open(f: Rel, probes: int = 100, seed: int = 0) -> bool:
    """Random-probe oracle: images of open sets have interior."""
    rng = random.Random(seed)
    return all(open_image_probe(f, random_open_set(f.src, rng)) for _ in range(probes))


@dataclass(frozen=True)
class Report:
    full_domain: bool
    one_dense: bool
    pi1_irreducible: bool
    pi2_almost_open: bool
    suitable: bool
    surjective: bool
    iso: bool
    witnesses: dict = field(default_factory=dict, compare=False)

    FLAGS = ("full_domain", "one_dense", "pi1_irreducible", "pi2_almost_open", "suitable", "surjective", "iso")

    def as_dict(self) -> dict:
        return {k: getattr(self, k) for k in self.FLAGS}


def _is_suitable(f: Rel) -> bool:
    return is_pi1_irreducible(f) and is_pi2_almost_open(f)


def suitability_report(f: Rel) -> Report:
    w: dict = {}
    missing = f.src.full().difference(domain(f))
    full = missing.is_empty
    if not full:
        w["full_domain"] = missing.parts[0]
    thin = one_set(f).closure().complement()
    dense = thin.is_empty
    if not dense:
        w["one_dense"] = thin.parts[0]
    pi1 = full and dense and graph(singleton_map(f)) == f
    if full and dense and not pi1:
        extra = closure_of_difference(f, graph(singleton_map(f)))
        w["pi1_irreducible"] = extra.cells[0] if extra.cells else None
    good = _open_projection_part(f)
    pi2 = good == f
    if not pi2:
        w["pi2_almost_open"] = closure_of_difference(f, good).cells[0]
    uncovered = f.dst.full().difference(image(f, f.src.full()))
    surjective = full and uncovered.is_empty
    if not uncovered.is_empty:
        w["surjective"] = uncovered.parts[0]
    suitable = pi1 and pi2
    iso = suitable and _is_suitable(inverse(f))
    return Report(full, dense, pi1, pi2, suitable, surjective, iso, w)


def _require_suitable(f: Rel, which: str):
    if not _is_suitable(f):
        raise NotSuitable(f"{which} relation is not suitable", which=which)


def _suitable_compose(g: Rel, f: Rel) -> Rel:
    return unique_minimal(compose(g, f))


def suitable_compose(g: Rel, f: Rel, verify: bool = True) -> Rel:
    """``G • F``: the minimal full-domain closed part of ``G o F``."""
    if f.dst != g.src:
        raise SpaceMismatch(f"cannot compose: {f.dst} is not {g.src}")
    _require_suitable(g, "first")
    _require_suitable(f, "second")
    out = _suitable_compose(g, f)
    if verify and not _is_suitable(out):
        raise Unreachable("suitable composition produced a relation that is not suitable")
    return out


def suitable_compose_by_closure(g: Rel, f: Rel) -> Rel:
    """``G • F`` built directly as the projected closure over the singleton set of ``G``."""
    if f.dst != g.src:
        raise SpaceMismatch(f"cannot compose: {f.dst} is not {g.src}")
    slabs, points = dec.singleton_pieces(g.canonical())
    fcells = f.simplified().cells
    out = []
    for a, b, m, c in slabs:
        seg = hull(((a, m * a + c), (b, m * b + c)))
        for cell in fcells:
            part = clip_halfplane(cell, 0, 1, b)
            if part:
                part = clip_halfplane(part, 0, -1, -a)
            if not part:
                continue
            ys = [v[1] for v in part]
            if min(ys) == max(ys) and not (a < ys[0] < b):
                continue
            r = compose_cells(part, seg)
            if r:
                out.append(r)
    for y0, z0 in points:
        pt = ((y0, z0),)
        for cell in fcells:
            r = compose_cells(cell, pt)
            if r:
                out.append(r)
    return Rel(f.src, g.dst, out, _trusted=True).simplified()


def suitable_iterate(f: Rel, n: int) -> Rel:
    if f.src != f.dst:
        raise SpaceMismatch("iterates need a relation from a space to itself")
    _require_suitable(f, "argument")
    if n == 0:
        return identity(f.src)
    if n < 0:
        if not _is_suitable(inverse(f)):
            raise NotIsomorphism("negative suitable iterates need a suitable isomorphism")
        a = inverse(_power(f, -n))
        b = _power(inverse(f), -n)
        if a != b:
            raise Unreachable("inverse of the suitable iterate differs from the iterate of the inverse")
        return a
    return _power(f, n)


def _power(f: Rel, n: int) -> Rel:
    out = f.simplified()
    for _ in range(n - 1):
        out = _suitable_compose(f, out)
    return out


def suitable_inverse(f: Rel) -> Rel:
    if not suitability_report(f).iso:
        raise NotIsomorphism("relation is not a suitable isomorphism")
    inv = inverse(f)
    if _suitable_compose(inv, f) != identity(f.src) or _suitable_compose(f, inv) != identity(f.dst):
        raise Unreachable("suitable composites with the inverse are not identities")
    return inv


def selection_check(g: Fun, f: Rel):
    """``(graph of g lies in F, closure of g is irreducible for the first projection)``."""
    if g.src != f.src or g.dst != f.dst:
        raise SpaceMismatch("function and relation live on different spaces")
    if not g.is_total:
        raise NotTotal(f"function is undefined on {g.src.full().difference(g.domain())}")
    gr = graph(g)
    return is_subset(gr, f), is_pi1_irreducible(gr)


class MapAnalysis(NamedTuple):
    IN: FSet
    OPEN: FSet
    almost_one_to_one: bool
    irreducible: bool
    almost_open: bool


def check_continuous_total(g: Fun) -> Rel:
    """The graph of ``g`` after checking totality and continuity."""
    if not g.is_total:
        raise NotTotal(f"function is undefined on {g.src.full().difference(g.domain())}")
    gr = graph(g)
    jumps = g.src.full().difference(one_set(gr))
    if jumps:
        raise NotContinuous(f"function jumps on {jumps}")
    return gr


def _open_at(g: Fun, x) -> bool:
    y = g(x)
    comp = g.dst.component_of(y)
    if comp.is_point:
        return True
    need_up, need_down = y < comp.hi, y > comp.lo
    up = down = False
    sl = g.one_sided_slope(x, -1)
    sr = g.one_sided_slope(x, +1)
    if sr is not None:
        up |= sr > 0
        down |= sr < 0
    if sl is not None:
        up |= sl < 0
        down |= sl > 0
    return (up or not need_up) and (down or not need_down)


def map_analysis(g: Fun) -> MapAnalysis:
    gr = check_continuous_total(g)
    inj = preimage(gr, one_set(inverse(gr)))
    opens = FSet.from_pointwise(g.src, g.breakpoints(), lambda x: _open_at(g, x))
    a121 = inj.is_dense()
    surjective = image(gr, g.src.full()) == g.dst.full()
    return MapAnalysis(inj, opens, a121, surjective and a121, opens.is_dense())
