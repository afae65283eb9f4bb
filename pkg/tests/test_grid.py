import random
import struct
import time
from fractions import Fraction as Q

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from relcalc import generators as gen
from relcalc import library as lib
from relcalc.errors import DimensionMismatch, InputError, ResolutionTooLarge
from relcalc.grid import (
    MAGIC,
    Grid,
    axis,
    finite_oracle,
    from_bits,
    from_pbm,
    grid_compose,
    grid_distance,
    hausdorff,
    rasterize,
    to_bits,
    to_pbm,
)
from relcalc.relation import Rel, compose, identity, v_epsilon
from relcalc.semilinear import Space

import oracles
from strategies import relations

I = Space.unit()
F01 = lib.flip()
seeds = st.integers(0, 2**32 - 1)


def boxes(g):
    r, c = np.nonzero(g.dense())
    return [g.box(i, j) for i, j in zip(r, c)]


# axes and rasterizing


def test_axis_covers_components_and_points():
    X = Space([(0, Q(1, 2)), Q(3, 4), 1])
    assert list(axis(X, 2)) == [0, 1, 3, 4]
    assert list(axis(lib.SPLIT, 1)) == [-1, 2]


def test_rasterize_examples():
    assert rasterize(identity(I), 1).dense().all()
    assert rasterize(F01, 1).dense().all()
    assert rasterize(Rel(I, I), 3).count() == 0


def test_rasterize_diagonal_counts():
    for k in range(1, 8):
        n = 1 << k
        assert rasterize(identity(I), k).count() == 3 * n - 2


@given(st.data())
@settings(max_examples=40)
def test_rasterize_matches_separating_axis_oracle(data):
    X = data.draw(st.sampled_from([I, lib.SPLIT, Space([(0, 1), Q(3, 2)])]))
    f = data.draw(relations(X, X, max_cells=3))
    k = data.draw(st.integers(1, 4))
    g = rasterize(f, k)
    dense = g.dense()
    for r in range(g.shape[0]):
        for c in range(g.shape[1]):
            want = any(oracles.cell_meets_box(cell, *g.box(r, c)) for cell in f.cells)
            assert dense[r, c] == want, (r, c)


@given(seeds)
@settings(max_examples=20)
def test_outer_cover_soundness(seed):
    rng = random.Random(seed)
    f = gen.random_relation(rng, max_cells=4)
    pts = oracles.sample_points_on(f)
    rng.shuffle(pts)
    for k in (1, 3, 5):
        g = rasterize(f, k)
        dense = g.dense()
        for x, y in pts[:100]:
            for r in range(g.shape[0]):
                for c in range(g.shape[1]):
                    x0, x1, y0, y1 = g.box(r, c)
                    if x0 <= x <= x1 and y0 <= y <= y1:
                        assert dense[r, c]


@given(seeds)
@settings(max_examples=20)
def test_refinement(seed):
    f = gen.random_relation(random.Random(seed), max_cells=4)
    for k in range(1, 6):
        coarse, fine = rasterize(f, k).dense(), rasterize(f, k + 1).dense()
        r, c = np.nonzero(fine)
        assert coarse[r // 2, c // 2].all()


def test_resolution_guard(monkeypatch):
    monkeypatch.setenv("RELCALC_MAX_BOXES", "64")
    rasterize(F01, 6)
    with pytest.raises(ResolutionTooLarge):
        rasterize(F01, 7)


# composition


def test_grid_compose_identity_and_ones():
    rng = np.random.default_rng(0)
    m = rng.random((8, 8)) < 0.3
    eye = Grid.from_dense(3, I, I, np.eye(8, dtype=bool))
    g = Grid.from_dense(3, I, I, m)
    assert grid_compose(g, eye) == g and grid_compose(eye, g) == g
    ones = Grid.from_dense(3, I, I, np.ones((8, 8), bool))
    assert grid_compose(ones, ones) == ones


@pytest.mark.parametrize("n,density", [(5, 0.3), (8, 0.1), (13, 0.5), (64, 0.05), (100, 0.02)])
def test_grid_compose_matches_matmul(n, density):
    X = Space.interval(0, Q(n, 128))
    rng = np.random.default_rng(n)
    a = rng.random((n, n)) < density
    b = rng.random((n, n)) < density
    ga, gb = Grid.from_dense(7, X, X, a), Grid.from_dense(7, X, X, b)
    want = (a.astype(np.int64) @ b.astype(np.int64)) > 0
    got = grid_compose(gb, ga)
    assert np.array_equal(got.dense(), want)
    assert grid_compose(gb, ga) == got  # deterministic


def test_grid_compose_rectangular():
    rng = np.random.default_rng(3)
    X, Y, Z = Space.interval(0, Q(3, 8)), Space.interval(0, Q(9, 8)), Space.interval(0, Q(5, 8))
    a = rng.random((3, 9)) < 0.4
    b = rng.random((9, 5)) < 0.4
    got = grid_compose(Grid.from_dense(3, Y, Z, b), Grid.from_dense(3, X, Y, a))
    assert np.array_equal(got.dense(), (a.astype(int) @ b.astype(int)) > 0)


def test_grid_compose_dimension_mismatch():
    a = Grid.from_dense(2, I, I, np.ones((4, 4), bool))
    b = Grid.from_dense(2, lib.SPLIT, lib.SPLIT, np.ones((4, 4), bool))
    with pytest.raises(DimensionMismatch):
        grid_compose(a, b)


def test_flip_sandwich():
    for k in range(1, 9):
        gf = rasterize(F01, k)
        approx = grid_compose(gf, gf)
        assert rasterize(compose(F01, F01), k) <= approx
        band = v_epsilon(I, Q(1, 1 << k))
        assert approx <= rasterize(compose(F01, compose(band, F01)), k)


# distances


def test_distance_examples():
    g = rasterize(F01, 4)
    assert grid_distance(g, g) == 0
    d = g.dense().copy()
    r, c = next((r, c + 1) for r, c in np.argwhere(d) if c + 1 < d.shape[1] and not d[r, c + 1])
    d[r, c] = True
    assert grid_distance(g, Grid.from_dense(4, I, I, d)) <= Q(2, 16)
    k = 4
    diag = Grid.from_dense(k, I, I, np.eye(1 << k, dtype=bool))
    assert grid_distance(rasterize(identity(I), k), diag) <= Q(1, 1 << k)


def test_distance_exact_small_cases():
    def grid(cells):
        d = np.zeros((4, 4), bool)
        for r, c in cells:
            d[r, c] = True
        return Grid.from_dense(2, I, I, d)

    assert grid_distance(grid([(0, 0)]), grid([(0, 1)])) == Q(1, 4)
    assert grid_distance(grid([(0, 0)]), grid([(3, 3)])) == Q(3, 4)
    assert grid_distance(grid([(0, 0), (0, 2)]), grid([(0, 0), (0, 1), (0, 2)])) == Q(1, 8)


@given(seeds)
@settings(max_examples=15)
def test_hausdorff_matches_brute_force(seed):
    rng = np.random.default_rng(seed)
    ka, kb = int(rng.integers(1, 4)), int(rng.integers(1, 4))
    a = rng.random((1 << ka, 1 << ka)) < 0.3
    b = rng.random((1 << kb, 1 << kb)) < 0.3
    a[0, 0] = b[-1, -1] = True
    ga, gb = Grid.from_dense(ka, I, I, a), Grid.from_dense(kb, I, I, b)
    step = Q(1, 1 << (max(ka, kb) + 3))
    assert hausdorff(ga, gb) == oracles.hausdorff_boxes(boxes(ga), boxes(gb), step)


def test_hausdorff_empty():
    e = Grid.from_dense(2, I, I, np.zeros((4, 4), bool))
    assert hausdorff(e, e) == 0
    with pytest.raises(InputError):
        hausdorff(e, rasterize(F01, 2))


@given(seeds)
@settings(max_examples=10)
def test_convergence(seed):
    f = gen.random_relation(random.Random(seed), max_cells=3)
    ref = rasterize(f, 9)
    ds = [hausdorff(rasterize(f, k), ref) for k in range(1, 9)]
    for k, d in enumerate(ds, start=1):
        assert d <= Q(1, 1 << k)
    assert all(a >= b for a, b in zip(ds, ds[1:]))


# serialisation


def test_bit_dump_round_trip():
    g = rasterize(F01, 5)
    data = to_bits(g)
    assert data[:4] == MAGIC and len(data) == 16 + (32 * 32 + 7) // 8
    assert struct.unpack("<iII", data[4:16]) == (5, 32, 32)
    assert from_bits(data, I, I) == g


def test_bit_dump_multi_component():
    g = rasterize(lib.gap_composition_expected(), 3)
    assert from_bits(to_bits(g), lib.SPLIT, I) == g
    with pytest.raises(InputError):
        from_bits(b"XXXX" + to_bits(g)[4:], lib.SPLIT, I)


def test_pbm_round_trip():
    for k in (1, 3, 4):
        g = rasterize(F01, k)
        data = to_pbm(g)
        assert data.startswith(b"P4\n")
        assert np.array_equal(from_pbm(data), g.dense())
        assert Grid.from_dense(k, I, I, from_pbm(data)) == from_bits(to_bits(g), I, I)


def test_pbm_with_comment_and_whitespace_bytes():
    d = np.zeros((8, 8), bool)
    d[0] = [0, 0, 0, 0, 1, 0, 1, 0]  # first body byte is a newline character
    data = b"P4\n# made by hand\n8 8\n" + np.packbits(d, axis=1).tobytes()
    assert np.array_equal(from_pbm(data), d)


# finite oracle and performance


def test_finite_oracle():
    rep = finite_oracle(seed=3, trials=2000)
    assert rep.ok and rep.trials == 2000 and not rep.failures


def test_grid_compose_speed():
    rng = np.random.default_rng(1)
    X = Space.interval(0, 1)
    a = Grid.from_dense(11, X, X, rng.random((2048, 2048)) < 0.01)
    b = Grid.from_dense(11, X, X, rng.random((2048, 2048)) < 0.01)
    t = time.perf_counter()
    grid_compose(b, a)
    assert time.perf_counter() - t < 2
