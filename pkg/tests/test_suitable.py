import random
from fractions import Fraction as Q

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from relcalc import generators as gen
from relcalc import library as lib
from relcalc.errors import DomainNotDense, NonUniqueMinimal, NotFullDomain, NotIsomorphism, NotSuitable
from relcalc.relation import (
    Cell,
    Fun,
    Rel,
    closure_of_difference,
    compose,
    constant,
    costar,
    domain,
    fiber,
    graph,
    identity,
    image,
    inverse,
    is_subset,
    preimage,
    union,
)
from relcalc.semilinear import FSet, Interval, Space, parse_set
from relcalc.suitable import (
    closure_of_function,
    is_pi1_irreducible,
    is_pi2_almost_open,
    map_analysis,
    one_set,
    open_image_probe,
    projection_density_test,
    random_open_set,
    sampled_almost_open,
    selection_check,
    singleton_map,
    suitability_report,
    suitable_compose,
    suitable_compose_by_closure,
    suitable_inverse,
    suitable_iterate,
    unique_minimal,
)

I = Space.unit()
half = Q(1, 2)
F01 = lib.flip()
FT = lib.extended_flip()
seeds = st.integers(0, 2**32 - 1)


def S(space, text):
    return parse_set(space, text)


def corners():
    return Rel(I, I, [[(0, 1)], [(1, 0)]])


def suitable_pair(seed, src=None):
    rng = random.Random(seed)
    return gen.random_suitable(rng, src), gen.random_suitable(rng, src)


# singleton sets and closures


def test_one_set_examples():
    assert one_set(F01) == S(I, "[0,1/2) | (1/2,1]")
    assert one_set(union(identity(I), corners())) == S(I, "(0,1)")
    assert one_set(graph(lib.split_map())) == lib.SPLIT.full()


def test_singleton_map_of_flip():
    g = singleton_map(F01)
    assert g(Q(1, 4)) == Q(1, 4) and g(Q(3, 4)) == Q(3, 4)
    assert half not in g.domain()


def test_closure_of_function_examples():
    assert closure_of_function(lib.flip_left_selection()) == F01
    assert closure_of_function(lib.flip_right_selection()) == F01
    assert closure_of_function(Fun.identity(I)) == identity(I)


def test_closure_of_function_needs_dense_domain():
    g = Fun(I, I, [(Interval(0, half), 1, 0)])
    with pytest.raises(DomainNotDense):
        closure_of_function(g)


def test_unique_minimal_examples():
    assert unique_minimal(union(identity(I), corners())) == identity(I)
    with pytest.raises(NonUniqueMinimal) as err:
        unique_minimal(compose(FT, FT))
    w = err.value.witness
    assert -1 <= w.lo and w.hi <= 0
    g = graph(Fun.affine(I, I, Q(1, 2), Q(1, 4)))
    assert unique_minimal(g) == g


def test_unique_minimal_not_full_domain():
    with pytest.raises(NotFullDomain) as err:
        unique_minimal(Rel(I, I, [[(0, 0), (half, half)]]))
    assert err.value.witness.lo >= half


# irreducibility and openness


def test_pi1_examples():
    assert is_pi1_irreducible(F01)
    assert not is_pi1_irreducible(compose(F01, F01))
    assert not is_pi1_irreducible(Rel(I, I, [Cell.box(0, 1, 0, 1)]))


def test_pi2_examples():
    assert is_pi2_almost_open(F01)
    assert not is_pi2_almost_open(FT)
    assert not is_pi2_almost_open(constant(I, I, half))


def test_pi2_isolated_corner_points():
    # a relatively isolated point of the relation has a one-point image
    assert not is_pi2_almost_open(compose(F01, F01))
    assert projection_density_test(compose(F01, F01))
    flat = Rel(I, I, [Cell.box(0, 1, half, 1), [(0, 0), (1, 0)]])
    assert not is_pi2_almost_open(flat)
    assert is_pi2_almost_open(Rel(I, I, [Cell.box(0, 1, 0, 1)]))


def test_pi2_vertical_and_isolated_targets():
    assert is_pi2_almost_open(Rel(I, I, [[(half, 0), (half, 1)], [(0, 0), (1, 1)]]))
    X = Space([(0, 1), 2])
    assert is_pi2_almost_open(Rel(I, X, [[(0, 2), (1, 2)]]))


def test_report_examples():
    rep = suitability_report(F01)
    assert all(rep.as_dict().values())
    rep = suitability_report(FT)
    assert rep.pi1_irreducible and not rep.pi2_almost_open and not rep.suitable
    assert "pi2_almost_open" in rep.witnesses
    rep = suitability_report(graph(lib.split_map()))
    assert rep.suitable and rep.surjective and rep.iso


def test_report_witnesses():
    rep = suitability_report(Rel(I, I, [[(0, 0), (half, half)]]))
    assert not rep.full_domain and rep.witnesses["full_domain"].lo >= half
    rep = suitability_report(compose(F01, F01))
    assert rep.one_dense and not rep.pi1_irreducible
    assert rep.witnesses["pi1_irreducible"] in (Cell.point(0, 1), Cell.point(1, 0))


@given(seeds)
@settings(max_examples=40)
def test_report_invariants(seed):
    rng = random.Random(seed)
    f = rng.choice([gen.random_suitable, gen.random_relation, gen.random_full_domain_relation])(rng)
    rep = suitability_report(f)
    assert rep.suitable == (rep.pi1_irreducible and rep.pi2_almost_open)
    assert rep.pi1_irreducible <= (rep.full_domain and rep.one_dense)
    if rep.iso:
        assert rep.suitable and suitability_report(inverse(f)).suitable
    if rep.suitable:
        assert rep.iso == suitability_report(inverse(f)).suitable


# the openness decision against its oracles


def pi1_irreducible_samples(seed):
    rng = random.Random(seed)
    src = gen.random_space(rng, isolated=False)
    yield gen.random_suitable(rng, src)
    yield graph(gen.random_continuous_map(rng, src))  # flat pieces break openness


@given(seeds)
@settings(max_examples=40)
def test_pi2_agrees_with_projection_criterion_on_irreducible(seed):
    for f in pi1_irreducible_samples(seed):
        assert is_pi1_irreducible(f)
        assert is_pi2_almost_open(f) == projection_density_test(f)


@given(seeds)
@settings(max_examples=25)
def test_pi2_agrees_with_open_image_oracle(seed):
    for f in pi1_irreducible_samples(seed):
        rep = suitability_report(f)
        if rep.pi2_almost_open:
            assert sampled_almost_open(f, probes=100, seed=seed)
        else:
            # the witness is a flat piece; the open strip above it has a finite image
            cell = rep.witnesses["pi2_almost_open"]
            xs = [v[0] for v in cell]
            u = FSet.clipped(f.src, [Interval(min(xs), max(xs), False, False)])
            assert not open_image_probe(f, u)


@pytest.mark.parametrize("f", [lib.flip(), lib.extended_flip(), lib.constant_half()], ids=["flip", "ext-flip", "constant"])
def test_report_matches_sampled_oracle(f):
    assert is_pi2_almost_open(f) == sampled_almost_open(f, probes=100, seed=1)


# suitable composition


def test_suitable_compose_examples():
    assert suitable_compose(F01, F01) == identity(I)
    assert suitable_compose(F01, graph(lib.split_map())) == lib.gap_composition_expected()
    assert suitable_compose(identity(I), F01) == F01


def test_suitable_compose_refuses():
    with pytest.raises(NotSuitable) as err:
        suitable_compose(FT, FT)
    assert err.value.which == "first"
    with pytest.raises(NotSuitable) as err:
        suitable_compose(identity(lib.SYMMETRIC), FT)
    assert err.value.which == "second"


def test_gap_is_two_points():
    plain = compose(F01, graph(lib.split_map()))
    gap = closure_of_difference(plain, lib.gap_composition_expected())
    assert gap == Rel(lib.SPLIT, I, [[(0, 1)], [(1, 0)]])


@given(seeds)
@settings(max_examples=60)
def test_suitable_compose_routes_agree(seed):
    f, g = suitable_pair(seed)
    by_min = suitable_compose(g, f)
    assert by_min == suitable_compose_by_closure(g, f)
    assert by_min == unique_minimal(compose(g, f))
    assert is_subset(by_min, compose(g, f))
    assert suitability_report(by_min).suitable


@given(seeds)
@settings(max_examples=40)
def test_suitable_compose_contains_map_composite(seed):
    f, g = suitable_pair(seed)
    h = suitable_compose(g, f)
    ff, gg = singleton_map(f), singleton_map(g)
    one_g = one_set(g)
    for x in one_set(f).sample_points():
        y = ff(x)
        if one_g.contains(y):
            assert fiber(h, x).contains(gg(y))


@given(seeds)
@settings(max_examples=40)
def test_singleton_sets_of_composites(seed):
    f, g = suitable_pair(seed)
    one_f = one_set(f)
    assert one_f & one_set(compose(g, f)) == one_f & preimage(f, one_set(g))
    assert one_set(compose(g, f)).issubset(one_set(suitable_compose(g, f)))


@given(seeds)
@settings(max_examples=25)
def test_suitable_compose_associative(seed):
    rng = random.Random(seed)
    f, g, h = (gen.random_suitable(rng) for _ in range(3))
    assert suitable_compose(suitable_compose(h, g), f) == suitable_compose(h, suitable_compose(g, f))


@given(seeds)
@settings(max_examples=30)
def test_open_map_needs_no_pruning(seed):
    rng = random.Random(seed)
    g = gen.random_continuous_map(rng, I)
    if not map_analysis(g).almost_open:
        return
    f = gen.random_suitable(rng)
    assert suitable_compose(graph(g), f) == compose(graph(g), f)


def test_irreducible_map_inverse_identities():
    f = graph(lib.split_map())
    assert compose(f, inverse(f)) == identity(I)
    assert suitable_compose(inverse(f), f) == identity(lib.SPLIT)
    assert compose(inverse(f), f) != identity(lib.SPLIT)


@given(seeds)
@settings(max_examples=30)
def test_irreducible_open_maps_invert(seed):
    rng = random.Random(seed)
    g = gen.random_homeomorphism(rng) if seed % 2 else gen.random_continuous_map(rng, I, surjective=True)
    res = map_analysis(g)
    if not (res.irreducible and res.almost_open):
        return
    f = graph(g)
    assert compose(f, inverse(f)) == identity(I)
    assert suitable_compose(inverse(f), f) == identity(I)


# iterates and inverses


def test_suitable_iterate_examples():
    assert suitable_iterate(F01, 2) == identity(I)
    assert suitable_iterate(F01, 3) == F01
    assert suitable_iterate(F01, -2) == identity(I)
    assert suitable_iterate(F01, 0) == identity(I)


def test_suitable_iterate_negative_needs_iso():
    h = graph(Fun(I, I, [(Interval(0, half, True, False), 2, 0), (Interval(half, 1), -2, 2)]))
    assert suitability_report(h).suitable and not suitability_report(h).iso
    with pytest.raises(NotIsomorphism):
        suitable_iterate(h, -1)


@given(seeds)
@settings(max_examples=30)
def test_interval_exchanges_are_isos(seed):
    rng = random.Random(seed)
    f = gen.random_interval_exchange(rng)
    rep = suitability_report(f)
    assert rep.iso
    assert suitable_iterate(f, -2) == suitable_iterate(inverse(f), 2)
    assert suitable_compose(suitable_inverse(f), f) == identity(I)


def test_suitable_inverse_examples():
    assert suitable_inverse(F01) == F01
    f = graph(lib.split_map())
    inv = suitable_inverse(f)
    assert inv == inverse(f)
    assert suitable_compose(inv, f) == identity(lib.SPLIT)
    assert suitable_compose(f, inv) == identity(I)
    with pytest.raises(NotIsomorphism):
        suitable_inverse(FT)


# selections and maps


def test_selection_examples():
    assert selection_check(lib.flip_left_selection(), F01) == (True, True)
    assert selection_check(lib.flip_right_selection(), F01) == (True, True)
    pc = lib.perturbed_constant()
    assert selection_check(pc, closure_of_function(pc)) == (True, False)
    assert selection_check(Fun.identity(I), identity(I)) == (True, True)


def test_selection_not_contained():
    assert selection_check(Fun.identity(I), F01)[0] is False


def test_map_analysis_examples():
    res = map_analysis(lib.split_map())
    assert res.IN == S(lib.SPLIT, "[-1/2,0) | (1,3/2]")
    assert res.irreducible and res.OPEN == res.IN
    res = map_analysis(Fun.identity(I))
    assert res.IN == res.OPEN == I.full() and res.almost_one_to_one and res.irreducible and res.almost_open
    res = map_analysis(Fun.affine(I, I, 0, half))
    assert res.IN.is_empty and not res.almost_open and not res.irreducible


def test_map_analysis_folding_map():
    tent = Fun(I, I, [(Interval(0, half, True, False), 2, 0), (Interval(half, 1), -2, 2)])
    res = map_analysis(tent)
    assert res.IN == S(I, "{1/2}")
    assert res.almost_open and not res.almost_one_to_one and not res.irreducible


def test_map_analysis_rejects():
    from relcalc.errors import NotContinuous, NotTotal

    with pytest.raises(NotContinuous):
        map_analysis(lib.flip_left_selection())
    with pytest.raises(NotTotal):
        map_analysis(Fun(I, I, [(Interval(0, half), 1, 0)]))


def compose_maps(g, f):
    return singleton_map(compose(graph(g), graph(f)))


@given(seeds)
@settings(max_examples=40)
def test_irreducible_maps_have_in_equal_open(seed):
    rng = random.Random(seed)
    g = gen.random_continuous_map(rng, I, surjective=True)
    res = map_analysis(g)
    if res.irreducible:
        assert res.IN == res.OPEN and res.almost_open
    h = gen.random_homeomorphism(rng)
    res = map_analysis(h)
    assert res.irreducible and res.IN == res.OPEN == I.full()


@given(seeds)
@settings(max_examples=40)
def test_irreducibility_of_composites(seed):
    rng = random.Random(seed)
    pick = [gen.random_homeomorphism, lambda r: gen.random_continuous_map(r, I, surjective=True)]
    f, g = rng.choice(pick)(rng), rng.choice(pick)(rng)
    gf = compose_maps(g, f)
    assert gf.is_total
    assert map_analysis(gf).irreducible == (map_analysis(f).irreducible and map_analysis(g).irreducible)


def test_isolated_points_under_irreducible_maps():
    X = Space([(0, 1), 2, 3])
    shapes = {
        "identity": [(Interval(0, 1), 1, 0)],
        "reverse": [(Interval(0, 1), -1, 1)],
        "tent": [(Interval(0, half, True, False), 2, 0), (Interval(half, 1), -2, 2)],
        "squeeze": [(Interval(0, 1), half, 0)],
    }
    values = [Q(0), half, Q(1), Q(2), Q(3)]
    irreducible = 0
    for name, pieces in shapes.items():
        for a in values:
            for b in values:
                g = Fun(X, X, pieces, [(Q(2), a), (Q(3), b)])
                if not map_analysis(g).irreducible:
                    continue
                irreducible += 1
                for x in (Q(0), Q(1, 3), Q(1), Q(2), Q(3)):
                    assert X.is_isolated(x) == X.is_isolated(g(x))
    assert irreducible == 4  # identity or reverse, with 2 and 3 sent onto {2, 3}


def test_selection_of_inverse_is_quasi_continuous():
    f = lib.split_map()
    finv = inverse(graph(f))
    for choose_left in (True, False):
        g = Fun(
            I,
            lib.SPLIT,
            [
                (Interval(0, half, True, choose_left), 1, -half),
                (Interval(half, 1, not choose_left, True), 1, half),
            ],
        )
        assert selection_check(g, finv) == (True, True)
        # the open injectivity set is dense in the interior of the selection's image
        img = FSet(lib.SPLIT, [Interval(p.interval.lo + p.intercept, p.interval.hi + p.intercept, p.interval.lo_closed, p.interval.hi_closed) for p in g.pieces])
        inner = img.interior()
        assert (map_analysis(f).IN.interior() & inner).closure() == inner.closure()


# minimality


@given(seeds)
@settings(max_examples=30)
def test_full_domain_subrelations_of_minimal_relations(seed):
    rng = random.Random(seed)
    f = gen.random_suitable(rng)
    for _ in range(5):
        x0, y0 = Q(rng.randint(0, 8), 8), Q(rng.randint(0, 8), 8)
        r = Q(rng.randint(1, 3), 16)
        hole = Rel(I, I, [Cell.box(max(0, x0 - r), min(1, x0 + r), max(0, y0 - r), min(1, y0 + r))])
        sub = closure_of_difference(f, hole)
        if domain(sub) == I.full():
            assert sub == f


def test_square_has_proper_full_domain_subrelations():
    sq = Rel(I, I, [Cell.box(0, 1, 0, 1)])
    sub = Rel(I, I, [Cell.box(0, 1, 0, half)])
    assert domain(sub) == I.full() and sub != sq


@given(seeds)
@settings(max_examples=30)
def test_costar_dense_in_preimage(seed):
    rng = random.Random(seed)
    f = gen.random_suitable(rng)
    for _ in range(10):
        v = random_open_set(I, rng)
        star, pre = costar(f, v), preimage(f, v)
        assert star.issubset(pre) and pre.issubset(star.closure())


@given(seeds)
@settings(max_examples=30)
def test_open_sets_keep_dense_core(seed):
    rng = random.Random(seed)
    f = gen.random_suitable(rng)
    for _ in range(10):
        u = random_open_set(I, rng)
        core = u & costar(f, image(f, u).interior())
        assert u.issubset(core.closure())


def test_disjoint_union_regression():
    f = lib.disjoint_union_example()
    X = f.src
    for text in ("(1/4,1/2)", "[0,1/3)", "(1/2,1]"):
        v = S(I, text)
        assert costar(f, v) == FSet(X, v.parts)
    assert not is_pi1_irreducible(f)
    with pytest.raises(NonUniqueMinimal) as err:
        unique_minimal(f)
    assert err.value.witness.lo >= 2
