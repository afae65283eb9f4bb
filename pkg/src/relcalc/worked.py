"""Built-in worked examples with their expected outcomes."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Dict, List, Tuple

from . import library as lib
from .dynamics import Escaped, Periodic, commuting_check, maps_relation, orbit, pair_table, push_forward
from .errors import NonUniqueMinimal
from .relation import Rel, compose, graph, identity, union
from .semilinear import parse_set
from .suitable import (
    closure_of_function,
    map_analysis,
    suitability_report,
    suitable_compose,
    unique_minimal,
)

half = Fraction(1, 2)


def _flip_square() -> List[Tuple[str, bool]]:
    f = lib.flip()
    return [("square equals diagonal plus two corners", compose(f, f) == lib.flip_square_expected())]


def _flip_closure() -> List[Tuple[str, bool]]:
    f = lib.flip()
    return [
        ("closure of left selection", closure_of_function(lib.flip_left_selection()) == f),
        ("closure of right selection", closure_of_function(lib.flip_right_selection()) == f),
    ]


def _extended_flip_square() -> List[Tuple[str, bool]]:
    f = lib.extended_flip()
    sq = compose(f, f)
    refused, inside = False, False
    try:
        unique_minimal(sq)
    except NonUniqueMinimal as e:
        refused = True
        inside = e.witness is not None and -1 <= e.witness.lo and e.witness.hi <= 0
    return [
        ("square matches", sq == lib.extended_flip_square_expected()),
        ("minimal subrelation refused", refused),
        ("witness inside [-1, 0]", inside),
    ]


def _irreducible_map() -> List[Tuple[str, bool]]:
    f = lib.split_map()
    res = map_analysis(f)
    rep = suitability_report(graph(f))
    expected_in = parse_set(lib.SPLIT, "[-1/2, 0) | (1, 3/2]")
    return [
        ("injectivity set", res.IN == expected_in),
        ("irreducible", res.irreducible),
        ("open set equals injectivity set", res.OPEN == res.IN),
        ("graph is a suitable isomorphism", rep.suitable and rep.surjective and rep.iso),
    ]


def _gap_composition() -> List[Tuple[str, bool]]:
    g, f = lib.flip(), graph(lib.split_map())
    suit = suitable_compose(g, f)
    plain = compose(g, f)
    extra = Rel(lib.SPLIT, lib.UNIT, [[(0, 1)], [(1, 0)]])
    return [
        ("suitable composite is -x and 2-x", suit == lib.gap_composition_expected()),
        ("plain composite adds exactly two points", plain == union(suit, extra)),
    ]


def _flip_conjugacy() -> List[Tuple[str, bool]]:
    h, g, f = lib.split_map(), lib.split_flip(), lib.flip()
    return [
        ("push-forward equals the flip", push_forward(h, g) == f),
        ("maps_relation", maps_relation(h, g, f)),
        ("commuting square", commuting_check(h, g, f)),
    ]


def _flip_dynamics() -> List[Tuple[str, bool]]:
    f = lib.flip()
    third = orbit(f, Fraction(1, 3), 100)
    mid = orbit(f, half, 10)
    table = pair_table(f, -4, 4)
    corners = Rel(lib.UNIT, lib.UNIT, [[(0, 1)], [(1, 0)]])
    rows_ok = True
    for row in table.rows:
        want = identity(lib.UNIT) if row.n % 2 == 0 else f
        want_gap = corners if row.n % 2 == 0 and row.n != 0 else Rel(lib.UNIT, lib.UNIT)
        rows_ok &= row.suitable == want and row.gap == want_gap
    return [
        ("orbit of 1/3 has period 2", third.status == Periodic(0, 2)),
        ("orbit of 1/2 escapes at once", mid.status == Escaped(0)),
        ("pair table alternates", rows_ok),
    ]


@dataclass(frozen=True)
class WorkedExample:
    name: str
    summary: str
    run: Callable[[], List[Tuple[str, bool]]]


EXAMPLES: Dict[str, WorkedExample] = {
    e.name: e
    for e in (
        WorkedExample("flip-closure", "both selections of the flip close up to the flip relation", _flip_closure),
        WorkedExample("flip-square", "flip composed with itself gains two corner points", _flip_square),
        WorkedExample("extended-flip-square", "extended flip squared has many minimal subrelations", _extended_flip_square),
        WorkedExample("irreducible-map", "translation of two intervals onto [0,1] is irreducible", _irreducible_map),
        WorkedExample("gap-composition", "suitable versus plain composition through a gluing map", _gap_composition),
        WorkedExample("flip-conjugacy", "the two-interval flip is carried onto the flip", _flip_conjugacy),
        WorkedExample("flip-dynamics", "orbits and the iterate table of the flip", _flip_dynamics),
    )
}


def run_worked_examples(names=None) -> Dict[str, List[Tuple[str, bool]]]:
    """Run the named examples (all by default); returns per-check outcomes."""
    selected = list(EXAMPLES) if not names else list(names)
    out = {}
    for name in selected:
        example = EXAMPLES[name]
        try:
            out[name] = example.run()
        except Exception as e:  # a crash counts as a failed check
            out[name] = [(f"raised {type(e).__name__}: {e}", False)]
    return out
