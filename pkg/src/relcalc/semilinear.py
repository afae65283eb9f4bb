"""Exact rationals and flagged one-dimensional sets.

A ``Space`` is a compact subset of the rational line made of finitely many
closed intervals and isolated points.  An ``FSet`` is a finite union of
intervals with per-endpoint open/closed flags, always paired with the
``Space`` it lives in: closure, interior and density are relative to it.

Every ``FSet`` is kept in canonical form (sorted, disjoint, non-adjacent
parts), so two sets are equal as point sets iff they compare equal.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Sequence

from .errors import InputError, NegativeEpsilon, PointOutsideSpace, SpaceMismatch

Rat = Fraction

_RAT_RE = re.compile(r"^\s*(-?\d+)(?:\s*/\s*(\d+))?\s*$")
_INF = float("inf")


def parse_rat(text) -> Fraction:
    """Parse ``"p/q"`` or ``"p"`` exactly; ints and Fractions pass through."""
    if isinstance(text, Fraction):
        return text
    if isinstance(text, int) and not isinstance(text, bool):
        return Fraction(text)
    if not isinstance(text, str):
        raise InputError(f"expected a rational string 'p/q', got {text!r}")
    m = _RAT_RE.match(text)
    if m is None:
        raise InputError(f"malformed rational {text!r}")
    den = int(m.group(2)) if m.group(2) is not None else 1
    if den == 0:
        raise InputError(f"zero denominator in {text!r}")
    return Fraction(int(m.group(1)), den)


def fmt_rat(q) -> str:
    q = Fraction(q)
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def as_rat(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, float):
        raise InputError(f"floating point value {x!r} is not accepted; use a rational")
    return parse_rat(x)


@dataclass(frozen=True)
class Interval:
    lo: Fraction
    hi: Fraction
    lo_closed: bool = True
    hi_closed: bool = True

    @classmethod
    def point(cls, p) -> "Interval":
        p = as_rat(p)
        return cls(p, p, True, True)

    @classmethod
    def closed(cls, lo, hi) -> "Interval":
        return cls(as_rat(lo), as_rat(hi), True, True)

    @classmethod
    def open(cls, lo, hi) -> "Interval":
        return cls(as_rat(lo), as_rat(hi), False, False)

    @property
    def is_point(self) -> bool:
        return self.lo == self.hi

    @property
    def is_empty(self) -> bool:
        if self.lo > self.hi:
            return True
        return self.lo == self.hi and not (self.lo_closed and self.hi_closed)

    @property
    def is_closed(self) -> bool:
        return self.lo_closed and self.hi_closed

    def contains(self, x) -> bool:
        if x < self.lo or x > self.hi:
            return False
        if x == self.lo and not self.lo_closed:
            return False
        if x == self.hi and not self.hi_closed:
            return False
        return True

    def closure(self) -> "Interval":
        return Interval(self.lo, self.hi, True, True)

    def intersect(self, other: "Interval") -> "Interval":
        if self.lo > other.lo:
            lo, lc = self.lo, self.lo_closed
        elif self.lo < other.lo:
            lo, lc = other.lo, other.lo_closed
        else:
            lo, lc = self.lo, self.lo_closed and other.lo_closed
        if self.hi < other.hi:
            hi, hc = self.hi, self.hi_closed
        elif self.hi > other.hi:
            hi, hc = other.hi, other.hi_closed
        else:
            hi, hc = self.hi, self.hi_closed and other.hi_closed
        return Interval(lo, hi, lc, hc)

    def sample(self) -> Fraction:
        """Some point of the (nonempty) interval."""
        return self.lo if self.is_point else (self.lo + self.hi) / 2

    def __str__(self) -> str:
        if self.is_point and self.is_closed:
            return "{" + fmt_rat(self.lo) + "}"
        left = "[" if self.lo_closed else "("
        right = "]" if self.hi_closed else ")"
        return f"{left}{fmt_rat(self.lo)}, {fmt_rat(self.hi)}{right}"


def normalize(parts: Iterable[Interval]) -> tuple:
    """Sort and merge intervals into canonical form."""
    items = [p for p in parts if not p.is_empty]
    items.sort(key=lambda p: (p.lo, not p.lo_closed))
    out: list = []
    for p in items:
        if out:
            q = out[-1]
            if p.lo < q.hi or (p.lo == q.hi and (q.hi_closed or p.lo_closed)):
                if p.hi > q.hi:
                    hi, hc = p.hi, p.hi_closed
                elif p.hi == q.hi:
                    hi, hc = q.hi, q.hi_closed or p.hi_closed
                else:
                    hi, hc = q.hi, q.hi_closed
                out[-1] = Interval(q.lo, hi, q.lo_closed, hc)
                continue
        out.append(p)
    return tuple(out)


def _intersect_lists(a: Sequence[Interval], b: Sequence[Interval]) -> tuple:
    out = []
    j0 = 0
    for p in a:
        for j in range(j0, len(b)):
            q = b[j]
            if q.hi < p.lo:
                j0 = j + 1
                continue
            if q.lo > p.hi:
                break
            r = p.intersect(q)
            if not r.is_empty:
                out.append(r)
    return normalize(out)


def _complement_line(parts: Sequence[Interval]) -> list:
    """Complement in the whole line; unbounded ends use float infinities."""
    out = []
    lo, lc = -_INF, False
    for p in parts:
        out.append(Interval(lo, p.lo, lc, not p.lo_closed))
        lo, lc = p.hi, not p.hi_closed
    out.append(Interval(lo, _INF, lc, False))
    return [g for g in out if not g.is_empty]


class Space:
    """Compact subset of the line: closed intervals and isolated points."""

    __slots__ = ("components", "_hash")

    def __init__(self, components: Iterable):
        comps = []
        for c in components:
            if isinstance(c, Interval):
                iv = Interval(c.lo, c.hi, True, True)
            elif isinstance(c, (tuple, list)) and len(c) == 2:
                iv = Interval(as_rat(c[0]), as_rat(c[1]), True, True)
            else:
                iv = Interval.point(c)
            if iv.lo > iv.hi:
                raise InputError(f"space component {iv} has lo > hi")
            comps.append(iv)
        comps.sort(key=lambda c: c.lo)
        if not comps:
            raise InputError("a space needs at least one component")
        for a, b in zip(comps, comps[1:]):
            if not a.hi < b.lo:
                raise InputError(f"space components {a} and {b} are not separated by a gap")
        self.components = tuple(comps)
        self._hash = hash(self.components)

    @classmethod
    def interval(cls, lo, hi) -> "Space":
        return cls([(lo, hi)])

    @classmethod
    def unit(cls) -> "Space":
        return cls([(0, 1)])

    def __eq__(self, other):
        return isinstance(other, Space) and self.components == other.components

    def __hash__(self):
        return self._hash

    def __repr__(self):
        return f"Space({self})"

    def __str__(self):
        return " ∪ ".join(str(c) for c in self.components)

    @property
    def lo(self) -> Fraction:
        return self.components[0].lo

    @property
    def hi(self) -> Fraction:
        return self.components[-1].hi

    def component_of(self, x):
        for c in self.components:
            if c.lo <= x <= c.hi:
                return c
        return None

    def contains(self, x) -> bool:
        return self.component_of(x) is not None

    def is_isolated(self, x) -> bool:
        c = self.component_of(x)
        return c is not None and c.is_point

    def isolated_points(self) -> tuple:
        return tuple(c.lo for c in self.components if c.is_point)

    def full(self) -> "FSet":
        return FSet(self, self.components, _trusted=True)

    def empty(self) -> "FSet":
        return FSet(self, (), _trusted=True)

    def check_point(self, x) -> Fraction:
        x = as_rat(x)
        if not self.contains(x):
            raise PointOutsideSpace(f"{fmt_rat(x)} is not in {self}")
        return x

    def endpoints(self) -> tuple:
        pts = []
        for c in self.components:
            pts.append(c.lo)
            if not c.is_point:
                pts.append(c.hi)
        return tuple(pts)


class FSet:
    """A flagged semilinear subset of a ``Space``, kept in canonical form."""

    __slots__ = ("space", "parts", "_hash")

    def __init__(self, space: Space, parts: Iterable[Interval] = (), *, _trusted: bool = False):
        parts = tuple(parts) if _trusted else normalize(parts)
        if not _trusted:
            for p in parts:
                c = space.component_of(p.lo)
                if c is None or p.hi > c.hi:
                    raise PointOutsideSpace(f"part {p} is not contained in {space}")
        self.space = space
        self.parts = parts
        self._hash = None

    # construction helpers

    @classmethod
    def of(cls, space: Space, *items) -> "FSet":
        """Build from Intervals, ``(lo, hi)`` closed pairs, or single points."""
        parts = []
        for it in items:
            if isinstance(it, Interval):
                parts.append(it)
            elif isinstance(it, (tuple, list)):
                parts.append(Interval.closed(*it))
            else:
                parts.append(Interval.point(it))
        return cls(space, parts)

    @classmethod
    def clipped(cls, space: Space, parts: Iterable[Interval]) -> "FSet":
        """Intersect arbitrary line intervals with ``space``."""
        return cls(space, _intersect_lists(normalize(parts), space.components), _trusted=True)

    @classmethod
    def from_pointwise(cls, space: Space, critical: Iterable, predicate: Callable) -> "FSet":
        """Set of points where ``predicate`` holds.

        ``predicate`` must be constant on every open gap between consecutive
        critical points (component endpoints are added automatically).
        """
        pts = sorted({as_rat(x) for x in critical if space.contains(x)} | set(space.endpoints()))
        parts = []
        for x in pts:
            if predicate(x):
                parts.append(Interval(x, x, True, True))
        for a, b in zip(pts, pts[1:]):
            mid = (a + b) / 2
            if space.contains(mid) and predicate(mid):
                parts.append(Interval(a, b, False, False))
        return cls(space, normalize(parts), _trusted=True)

    # basic protocol

    def __eq__(self, other):
        return isinstance(other, FSet) and self.space == other.space and self.parts == other.parts

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.space, self.parts))
        return self._hash

    def __repr__(self):
        return f"FSet({self})"

    def __str__(self):
        return " ∪ ".join(str(p) for p in self.parts) if self.parts else "∅"

    def __bool__(self):
        return bool(self.parts)

    def __iter__(self):
        return iter(self.parts)

    def __len__(self):
        return len(self.parts)

    @property
    def is_empty(self) -> bool:
        return not self.parts

    def contains(self, x) -> bool:
        x = as_rat(x)
        return any(p.contains(x) for p in self.parts)

    __contains__ = contains

    def _check(self, other: "FSet"):
        if self.space != other.space:
            raise SpaceMismatch(f"sets live in different spaces: {self.space} vs {other.space}")

    # boolean algebra

    def union(self, other: "FSet") -> "FSet":
        self._check(other)
        return FSet(self.space, normalize(self.parts + other.parts), _trusted=True)

    def intersect(self, other: "FSet") -> "FSet":
        self._check(other)
        return FSet(self.space, _intersect_lists(self.parts, other.parts), _trusted=True)

    def complement(self) -> "FSet":
        gaps = _complement_line(self.parts)
        return FSet(self.space, _intersect_lists(self.space.components, normalize(gaps)), _trusted=True)

    def difference(self, other: "FSet") -> "FSet":
        self._check(other)
        return self.intersect(other.complement())

    __or__ = union
    __and__ = intersect
    __sub__ = difference

    def issubset(self, other: "FSet") -> bool:
        return self.difference(other).is_empty

    def isdisjoint(self, other: "FSet") -> bool:
        return self.intersect(other).is_empty

    # topology relative to the ambient space

    def closure(self) -> "FSet":
        return FSet(self.space, normalize(p.closure() for p in self.parts), _trusted=True)

    def interior(self) -> "FSet":
        return self.complement().closure().complement()

    @property
    def is_closed(self) -> bool:
        return self == self.closure()

    @property
    def is_open(self) -> bool:
        return self == self.interior()

    def is_dense(self) -> bool:
        return self.closure() == self.space.full()

    def thicken(self, eps, closed: bool = False) -> "FSet":
        """Open (``closed=False``) or closed ``eps``-neighbourhood within the space."""
        eps = as_rat(eps)
        if eps < 0:
            raise NegativeEpsilon(f"epsilon must be nonnegative, got {fmt_rat(eps)}")
        if closed:
            grown = [Interval(p.lo - eps, p.hi + eps, True, True) for p in self.parts]
        elif eps == 0:
            grown = []
        else:
            grown = [Interval(p.lo - eps, p.hi + eps, False, False) for p in self.parts]
        return FSet.clipped(self.space, grown)

    def sample_points(self) -> list:
        """One representative rational point per part."""
        return [p.sample() for p in self.parts]


def combine(a: FSet, b: FSet | None, op: str) -> FSet:
    """Dispatch ``union | intersect | difference | complement``."""
    if op == "complement":
        return a.complement()
    if b is None:
        raise InputError(f"operation {op!r} needs two operands")
    if op == "union":
        return a.union(b)
    if op == "intersect":
        return a.intersect(b)
    if op == "difference":
        return a.difference(b)
    raise InputError(f"unknown set operation {op!r}")


_PART_RE = re.compile(r"^([\[(])\s*([^,]+?)\s*,\s*([^,]+?)\s*([\])])$")


def parse_set(space: Space, text: str) -> FSet:
    """Parse ``"[0, 1/2) ∪ {3/4}"``-style notation (``|`` or ``∪`` separate parts)."""
    text = text.strip()
    if text in ("", "∅", "{}"):
        return space.empty()
    parts = []
    for chunk in re.split(r"∪|\|", text):
        chunk = chunk.strip()
        if chunk.startswith("{") and chunk.endswith("}"):
            for p in chunk[1:-1].split(","):
                parts.append(Interval.point(parse_rat(p.strip())))
            continue
        m = _PART_RE.match(chunk)
        if m is None:
            raise InputError(f"cannot parse set part {chunk!r}")
        parts.append(Interval(parse_rat(m.group(2)), parse_rat(m.group(3)), m.group(1) == "[", m.group(4) == "]"))
    return FSet(space, parts)


def to_records(s: FSet) -> list:
    out = []
    for p in s.parts:
        if p.is_point:
            out.append({"at": fmt_rat(p.lo)})
        else:
            out.append({"lo": fmt_rat(p.lo), "hi": fmt_rat(p.hi), "lo_closed": p.lo_closed, "hi_closed": p.hi_closed})
    return out


def from_records(space: Space, records) -> FSet:
    parts = []
    for r in records:
        if "at" in r:
            parts.append(Interval.point(parse_rat(r["at"])))
        else:
            parts.append(
                Interval(parse_rat(r["lo"]), parse_rat(r["hi"]), bool(r.get("lo_closed", True)), bool(r.get("hi_closed", True)))
            )
    return FSet(space, parts)


def space_to_records(space: Space) -> list:
    return [{"at": fmt_rat(c.lo)} if c.is_point else {"lo": fmt_rat(c.lo), "hi": fmt_rat(c.hi)} for c in space.components]


def space_from_records(records) -> Space:
    comps = []
    for r in records:
        if isinstance(r, dict):
            comps.append(parse_rat(r["at"]) if "at" in r else (parse_rat(r["lo"]), parse_rat(r["hi"])))
        elif isinstance(r, (list, tuple)):
            comps.append((parse_rat(r[0]), parse_rat(r[1])))
        else:
            comps.append(parse_rat(r))
    return Space(comps)
