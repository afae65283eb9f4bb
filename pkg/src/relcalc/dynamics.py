"""Orbits, sample-path prefixes, iterate tables and conjugacy transport."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence, Union

from .errors import NotIsomorphism, NotSuitable, SpaceMismatch, Unreachable
from .relation import (
    Fun,
    Rel,
    closure_of_difference,
    compose,
    fiber,
    graph,
    identity,
    inverse,
    is_subset,
)
from .semilinear import fmt_rat
from .suitable import (
    _is_suitable,
    _suitable_compose,
    check_continuous_total,
    singleton_map,
    suitable_compose,
)


@dataclass(frozen=True)
class Completed:
    steps: int

    def __str__(self):
        return f"Completed({self.steps})"


@dataclass(frozen=True)
class Escaped:
    step: int

    def __str__(self):
        return f"Escaped({self.step})"


@dataclass(frozen=True)
class Periodic:
    preperiod: int
    period: int

    def __str__(self):
        return f"Periodic({self.preperiod}, {self.period})"


Status = Union[Completed, Escaped, Periodic]


@dataclass(frozen=True)
class OrbitResult:
    start: Fraction
    points: tuple
    status: Status

    def as_dict(self) -> dict:
        return {"start": fmt_rat(self.start), "points": [fmt_rat(p) for p in self.points], "status": str(self.status)}


def _require_suitable(f: Rel):
    if not _is_suitable(f):
        raise NotSuitable("relation is not suitable", which="argument")


def _require_iso(f: Rel):
    if not _is_suitable(inverse(f)):
        raise NotIsomorphism("relation is not a suitable isomorphism")


def orbit(f: Rel, x, n_max: int, direction: str = "forward") -> OrbitResult:
    """Follow the singleton-fibre map from ``x`` for at most ``n_max`` steps."""
    if f.src != f.dst:
        raise SpaceMismatch("orbits need a relation from a space to itself")
    x = f.src.check_point(x)
    _require_suitable(f)
    if direction == "backward":
        _require_iso(f)
        step = singleton_map(inverse(f))
    elif direction == "forward":
        step = singleton_map(f)
    else:
        raise ValueError(f"direction must be 'forward' or 'backward', not {direction!r}")
    points = [x]
    seen = {x: 0}
    for k in range(n_max):
        y = step(points[-1])
        if y is None:
            return OrbitResult(x, tuple(points), Escaped(k))
        points.append(y)
        if y in seen:
            return OrbitResult(x, tuple(points), Periodic(seen[y], k + 1 - seen[y]))
        seen[y] = k + 1
    return OrbitResult(x, tuple(points), Completed(n_max))


def path_check(f: Rel, prefix: Sequence) -> bool:
    """Does every consecutive pair of ``prefix`` lie in ``f``?"""
    pts = [f.src.check_point(p) for p in prefix]
    for p in pts[1:]:
        f.dst.check_point(p)
    return all(fiber(f, a).contains(b) for a, b in zip(pts, pts[1:]))


@dataclass(frozen=True)
class PairRow:
    n: int
    iterate: Rel
    suitable: Rel
    gap: Rel


@dataclass(frozen=True)
class PairTable:
    rows: tuple

    def row(self, n: int) -> PairRow:
        for r in self.rows:
            if r.n == n:
                return r
        raise KeyError(n)


def pair_table(f: Rel, n_min: int, n_max: int) -> PairTable:
    """Rows ``(n, F^n, F^{•n}, closure(F^n minus F^{•n}))`` for ``n_min <= n <= n_max``."""
    if f.src != f.dst:
        raise SpaceMismatch("iterates need a relation from a space to itself")
    if n_min > n_max:
        raise ValueError("n_min must not exceed n_max")
    _require_suitable(f)
    if n_min < 0:
        _require_iso(f)
    ident = identity(f.src)
    plain = {0: ident}
    suit = {0: ident}
    for sign in (1, -1):
        bound = n_max if sign > 0 else -n_min
        if bound <= 0:
            continue
        base = f if sign > 0 else inverse(f)
        p = s = base.simplified()
        plain[sign], suit[sign] = p, s
        for k in range(2, bound + 1):
            p = compose(base, p)
            s = _suitable_compose(base, s)
            plain[sign * k], suit[sign * k] = p, s
    rows = []
    for n in range(n_min, n_max + 1):
        rows.append(PairRow(n, plain[n], suit[n], closure_of_difference(plain[n], suit[n])))
    return PairTable(tuple(rows))


def push_forward(h: Fun, g: Rel) -> Rel:
    """``(h x h)(G)``, the image of ``g`` under ``h`` applied to both coordinates."""
    if h.src != g.src or g.src != g.dst:
        raise SpaceMismatch("push-forward needs h defined on the space of g")
    gh = check_continuous_total(h)
    return compose(gh, compose(g, inverse(gh)))


def maps_relation(h: Fun, g: Rel, f: Rel) -> bool:
    """Does ``h`` carry ``g`` into ``f``?  Two equivalent tests, checked to agree."""
    if h.dst != f.src or f.src != f.dst:
        raise SpaceMismatch("h must map into the space of f")
    pushed = is_subset(push_forward(h, g), f)
    gh = graph(h)
    intertwined = is_subset(compose(gh, g), compose(f, gh))
    if pushed != intertwined:
        raise Unreachable("push-forward and intertwining tests disagree")
    return pushed


def commuting_check(h: Fun, g: Rel, f: Rel) -> bool:
    """``h • G == F • h``, cross-checked against ``maps_relation``."""
    _require_suitable(g)
    _require_suitable(f)
    gh = check_continuous_total(h)
    if not _is_suitable(gh):
        raise NotSuitable("graph of h is not suitable (h is not almost open)", which="h")
    left = suitable_compose(gh, g, verify=False)
    right = suitable_compose(f, gh, verify=False)
    commutes = left == right
    if commutes != maps_relation(h, g, f):
        raise Unreachable("commuting square and maps_relation disagree")
    return commutes
