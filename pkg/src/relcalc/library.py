"""Named relations and maps used by the worked examples, tests and demos."""

from __future__ import annotations

from fractions import Fraction

from .relation import Fun, Rel, constant, graph, identity, union
from .semilinear import Interval, Space

half = Fraction(1, 2)

UNIT = Space.unit()
SYMMETRIC = Space([(-1, 1)])
SPLIT = Space([(-half, 0), (1, Fraction(3, 2))])


def flip() -> Rel:
    """Each half of the unit interval reversed; two-point fibre over 1/2."""
    return Rel(UNIT, UNIT, [[(0, half), (half, 0)], [(half, 1), (1, half)]])


def extended_flip() -> Rel:
    """``flip`` on [0,1] together with the constant 1/2 on [-1,0]."""
    return Rel(
        SYMMETRIC,
        SYMMETRIC,
        [[(0, half), (half, 0)], [(half, 1), (1, half)], [(-1, half), (0, half)]],
    )


def flip_square_expected() -> Rel:
    return union(identity(UNIT), Rel(UNIT, UNIT, [[(0, 1)], [(1, 0)]]))


def extended_flip_square_expected() -> Rel:
    return Rel(
        SYMMETRIC,
        SYMMETRIC,
        [[(0, 0), (1, 1)], [(-1, 0), (0, 0)], [(-1, 1), (0, 1)], [(1, 0)]],
    )


def flip_left_selection() -> Fun:
    """Takes the left branch at 1/2."""
    return Fun(UNIT, UNIT, [(Interval(0, half, True, True), -1, half), (Interval(half, 1, False, True), -1, Fraction(3, 2))])


def flip_right_selection() -> Fun:
    """Takes the right branch at 1/2."""
    return Fun(UNIT, UNIT, [(Interval(0, half, True, False), -1, half), (Interval(half, 1, True, True), -1, Fraction(3, 2))])


def split_map() -> Fun:
    """Glues the two pieces of ``SPLIT`` onto [0,1] by translation."""
    return Fun(SPLIT, UNIT, [(Interval(-half, 0), 1, half), (Interval(1, Fraction(3, 2)), 1, -half)])


def split_flip() -> Rel:
    """Each component of ``SPLIT`` reversed about its midpoint."""
    return Rel(SPLIT, SPLIT, [[(-half, 0), (0, -half)], [(1, Fraction(3, 2)), (Fraction(3, 2), 1)]])


def gap_composition_expected() -> Rel:
    """``-x`` on the left component, ``2 - x`` on the right."""
    return graph(Fun(SPLIT, UNIT, [(Interval(-half, 0), -1, 0), (Interval(1, Fraction(3, 2)), -1, 2)]))


def perturbed_constant() -> Fun:
    """Zero except at 1/2, where the value is 1."""
    return Fun(
        UNIT,
        UNIT,
        [(Interval(0, half, True, False), 0, 0), (Interval(half, 1, False, True), 0, 0)],
        [(half, 1)],
    )


def constant_half() -> Rel:
    return constant(UNIT, UNIT, half)


def disjoint_union_example() -> Rel:
    """Identity on [0,1] plus everything over the extra component [2,3]."""
    src = Space([(0, 1), (2, 3)])
    return Rel(src, UNIT, [[(0, 0), (1, 1)], [(2, 0), (3, 0), (3, 1), (2, 1)]])
