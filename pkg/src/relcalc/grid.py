"""Dyadic outer box covers of relations and boolean-matrix composition.

At level ``k`` the boxes are ``[i h, (i+1) h]`` with ``h = 2**-k``.  The
row axis lists the lattice indices of boxes over the source space, the
column axis those over the destination.  Bits are stored packed eight per
byte (little bit order) so that composition can use table lookups.
"""

from __future__ import annotations

import os
import struct
from math import gcd
from dataclasses import dataclass, field
from fractions import Fraction
from typing import List

import numpy as np
from scipy import ndimage

from .errors import DimensionMismatch, InputError, ResolutionTooLarge
from .relation import Rel
from .semilinear import Space

DEFAULT_MAX_BOXES = 1 << 12
MAGIC = b"RGRD"


def max_boxes() -> int:
    raw = os.environ.get("RELCALC_MAX_BOXES")
    return int(raw) if raw else DEFAULT_MAX_BOXES


def _floor(q: Fraction) -> int:
    return q.numerator // q.denominator


def _ceil(q: Fraction) -> int:
    return -((-q.numerator) // q.denominator)


def axis(space: Space, k: int) -> np.ndarray:
    """Sorted lattice indices of the level-``k`` boxes meeting ``space``."""
    scale = 1 << k
    idx = set()
    for c in space.components:
        if c.is_point:
            idx.add(_floor(c.lo * scale))
        else:
            idx.update(range(_floor(c.lo * scale), _ceil(c.hi * scale)))
    if len(idx) > max_boxes():
        raise ResolutionTooLarge(f"{len(idx)} boxes per axis exceeds the limit {max_boxes()}")
    return np.array(sorted(idx), dtype=np.int64)


@dataclass(frozen=True, eq=False)
class Grid:
    k: int
    src: Space
    dst: Space
    rows: np.ndarray
    cols: np.ndarray
    bits: np.ndarray = field(repr=False)

    @classmethod
    def from_dense(cls, k: int, src: Space, dst: Space, dense: np.ndarray) -> "Grid":
        rows, cols = axis(src, k), axis(dst, k)
        dense = np.asarray(dense, dtype=bool)
        if dense.shape != (len(rows), len(cols)):
            raise DimensionMismatch(f"matrix shape {dense.shape} does not match axes {(len(rows), len(cols))}")
        return cls(k, src, dst, rows, cols, np.packbits(dense, axis=1, bitorder="little"))

    @property
    def shape(self):
        return len(self.rows), len(self.cols)

    def dense(self) -> np.ndarray:
        return np.unpackbits(self.bits, axis=1, count=len(self.cols), bitorder="little").astype(bool)

    def count(self) -> int:
        return int(self.dense().sum())

    def __eq__(self, other):
        return (
            isinstance(other, Grid)
            and (self.k, self.src, self.dst) == (other.k, other.src, other.dst)
            and np.array_equal(self.bits, other.bits)
        )

    def __le__(self, other: "Grid") -> bool:
        _same_frame(self, other)
        return not np.any(self.bits & ~other.bits)

    def box(self, r: int, c: int):
        """Closed box of matrix entry ``(r, c)`` as ``(x0, x1, y0, y1)``."""
        h = Fraction(1, 1 << self.k)
        i, j = int(self.rows[r]), int(self.cols[c])
        return i * h, (i + 1) * h, j * h, (j + 1) * h


def _same_frame(a: Grid, b: Grid):
    if a.k != b.k or a.src != b.src or a.dst != b.dst:
        raise DimensionMismatch("grids differ in level or spaces")


def _cell_spans(cell, k: int):
    """Yield ``(row, first_col, last_col)`` lattice spans of boxes meeting ``cell``.

    Coordinates are scaled to integers so that lattice lines sit at multiples
    of ``unit``; floors and ceilings are then exact integer divisions.  The
    cell is cut along lattice lines: a slice on a line touches the two rows
    beside it, and each gap between cuts lies in one row.  Since floor and
    ceiling are monotone, the column span of a piece is the hull of the spans
    of its extreme points.
    """
    unit = 1
    for x, y in cell:
        unit = unit * x.denominator // gcd(unit, x.denominator)
        unit = unit * y.denominator // gcd(unit, y.denominator)
    scale = unit << k
    pts = [(int(x * scale), int(y * scale)) for x, y in cell]
    n = len(pts)
    edges = []
    for t in range(n if n > 2 else 1):
        (ua, wa), (ub, wb) = pts[t], pts[(t + 1) % n]
        if ua > ub:
            ua, wa, ub, wb = ub, wb, ua, wa
        if ua < ub:
            edges.append((ua, wa, ub, wb))

    def span(u):
        lo, hi = None, None
        for vu, vw in pts:
            if vu == u:
                a, b = -((-vw) // unit) - 1, vw // unit
                lo = a if lo is None or a < lo else lo
                hi = b if hi is None or b > hi else hi
        for ua, wa, ub, wb in edges:
            if ua < u < ub:
                den = (ub - ua) * unit
                num = wa * (ub - ua) + (u - ua) * (wb - wa)
                a, b = -((-num) // den) - 1, num // den
                lo = a if lo is None or a < lo else lo
                hi = b if hi is None or b > hi else hi
        return lo, hi

    u0 = min(p[0] for p in pts)
    u1 = max(p[0] for p in pts)
    cuts = sorted({u0, u1} | {i * unit for i in range(-((-u0) // unit), u1 // unit + 1)})
    spans = {u: span(u) for u in cuts}
    for u in cuts:
        lo, hi = spans[u]
        r = u // unit
        yield r, lo, hi
        if u % unit == 0:
            yield r - 1, lo, hi
    for a, b in zip(cuts, cuts[1:]):
        lo = min(spans[a][0], spans[b][0])
        hi = max(spans[a][1], spans[b][1])
        for vu, vw in pts:
            if a < vu < b:
                lo = min(lo, -((-vw) // unit) - 1)
                hi = max(hi, vw // unit)
        yield a // unit, lo, hi


def rasterize(f: Rel, k: int) -> Grid:
    """Exact outer cover: a box is set iff the closed box meets ``f``."""
    if k < 0:
        raise InputError("resolution exponent must be nonnegative")
    rows, cols = axis(f.src, k), axis(f.dst, k)
    dense = np.zeros((len(rows), len(cols)), dtype=bool)
    spans = [s for cell in f.simplified().cells for s in _cell_spans(cell, k)]
    if spans:
        arr = np.array(spans, dtype=np.int64)
        r = np.searchsorted(rows, arr[:, 0])
        c0 = np.searchsorted(cols, arr[:, 1], "left")
        c1 = np.searchsorted(cols, arr[:, 2], "right")
        ok = (r < len(rows)) & (rows[np.minimum(r, len(rows) - 1)] == arr[:, 0]) & (c0 < c1)
        for ri, a, b in zip(r[ok].tolist(), c0[ok].tolist(), c1[ok].tolist()):
            dense[ri, a:b] = True
    return Grid(k, f.src, f.dst, rows, cols, np.packbits(dense, axis=1, bitorder="little"))


def grid_compose(g: Grid, f: Grid) -> Grid:
    """Boolean product ``G o F`` by byte-wise table lookup (Four Russians)."""
    if f.k != g.k or f.dst != g.src:
        raise DimensionMismatch("middle spaces or levels differ")
    n_mid = len(f.cols)
    fb = f.bits
    gb = g.bits
    n_out_bytes = gb.shape[1]
    pad = (-n_out_bytes) % 8
    gw = np.pad(gb, ((0, (-n_mid) % 8), (0, pad))).view(np.uint64)
    words = gw.shape[1]
    out = np.zeros((len(f.rows), words), dtype=np.uint64)
    table = np.zeros((256, words), dtype=np.uint64)
    for t in range(fb.shape[1]):
        block = gw[8 * t: 8 * t + 8]
        table[0] = 0
        for b in range(8):
            lo = 1 << b
            table[lo: 2 * lo] = table[:lo] | block[b]
        out |= table[fb[:, t]]
    packed = out.view(np.uint8)[:, :n_out_bytes]
    mask = _tail_mask(len(g.cols))
    packed = packed.copy()
    if mask is not None:
        packed[:, -1] &= mask
    return Grid(f.k, f.src, g.dst, f.rows, g.cols, np.ascontiguousarray(packed))


def _tail_mask(n: int):
    r = n % 8
    return None if r == 0 else np.uint8((1 << r) - 1)


def _occupancy(g: Grid, level: int, r0: int, c0: int, shape) -> np.ndarray:
    """Boxes of ``g`` refined to ``level``, on a dense lattice window."""
    s = 1 << (level - g.k)
    diff = np.zeros((shape[0] + 1, shape[1] + 1), dtype=np.int32)
    ri, ci = np.nonzero(g.dense())
    top = g.rows[ri] * s - r0
    left = g.cols[ci] * s - c0
    np.add.at(diff, (top, left), 1)
    np.add.at(diff, (top + s, left), -1)
    np.add.at(diff, (top, left + s), -1)
    np.add.at(diff, (top + s, left + s), 1)
    return np.cumsum(np.cumsum(diff, axis=0), axis=1)[:-1, :-1] > 0


def _half_lattice(occ: np.ndarray) -> np.ndarray:
    """Half-lattice points lying in the union of the closed occupied boxes."""
    h = np.zeros((2 * occ.shape[0] + 1, 2 * occ.shape[1] + 1), dtype=bool)
    h[1::2, 1::2] = occ
    return ndimage.binary_dilation(h, structure=np.ones((3, 3), dtype=bool))


def hausdorff(a: Grid, b: Grid) -> Fraction:
    """Exact max-metric Hausdorff distance between two box unions (levels may differ)."""
    if a.src != b.src or a.dst != b.dst:
        raise DimensionMismatch("grids live on different spaces")
    if not a.count() or not b.count():
        if not a.count() and not b.count():
            return Fraction(0)
        raise InputError("distance to an empty box union is undefined")
    level = max(a.k, b.k)
    sa, sb = 1 << (level - a.k), 1 << (level - b.k)
    r0 = min(int(a.rows[0]) * sa, int(b.rows[0]) * sb)
    r1 = max((int(a.rows[-1]) + 1) * sa, (int(b.rows[-1]) + 1) * sb)
    c0 = min(int(a.cols[0]) * sa, int(b.cols[0]) * sb)
    c1 = max((int(a.cols[-1]) + 1) * sa, (int(b.cols[-1]) + 1) * sb)
    shape = (r1 - r0, c1 - c0)
    ha = _half_lattice(_occupancy(a, level, r0, c0, shape))
    hb = _half_lattice(_occupancy(b, level, r0, c0, shape))
    da = ndimage.distance_transform_cdt(~hb, metric="chessboard")
    db = ndimage.distance_transform_cdt(~ha, metric="chessboard")
    d = max(int(da[ha].max()), int(db[hb].max()))
    return Fraction(d, 1 << (level + 1))


def grid_distance(a: Grid, b: Grid) -> Fraction:
    _same_frame(a, b)
    return hausdorff(a, b)


# serialisation


def to_bits(g: Grid) -> bytes:
    """16-byte header (magic, k, rows, cols; little-endian) then row-major bits, MSB first."""
    rows, cols = g.shape
    header = MAGIC + struct.pack("<iII", g.k, rows, cols)
    return header + np.packbits(g.dense().ravel()).tobytes()


def from_bits(data: bytes, src: Space, dst: Space) -> Grid:
    if len(data) < 16 or data[:4] != MAGIC:
        raise InputError("not a grid bit dump")
    k, rows, cols = struct.unpack("<iII", data[4:16])
    flat = np.unpackbits(np.frombuffer(data[16:], dtype=np.uint8), count=rows * cols)
    return Grid.from_dense(k, src, dst, flat.reshape(rows, cols).astype(bool))


def to_pbm(g: Grid) -> bytes:
    rows, cols = g.shape
    body = np.packbits(g.dense(), axis=1).tobytes()
    return f"P4\n{cols} {rows}\n".encode() + body


def from_pbm(data: bytes) -> np.ndarray:
    """Decode a binary PBM into a boolean matrix (header comments allowed)."""
    fields, pos = [], 0
    while len(fields) < 3:
        while pos < len(data) and data[pos: pos + 1].isspace():
            pos += 1
        if data[pos: pos + 1] == b"#":
            pos = data.find(b"\n", pos)
            if pos < 0:
                break
            continue
        end = pos
        while end < len(data) and not data[end: end + 1].isspace():
            end += 1
        if end == pos:
            break
        fields.append(data[pos:end])
        pos = end
    if len(fields) < 3 or fields[0] != b"P4":
        raise InputError("not a binary PBM")
    cols, rows = int(fields[1]), int(fields[2])
    body = data[pos + 1:]
    stride = (cols + 7) // 8
    if len(body) < rows * stride:
        raise InputError("truncated PBM body")
    raw = np.frombuffer(body[: rows * stride], dtype=np.uint8).reshape(rows, stride)
    return np.unpackbits(raw, axis=1, count=cols).astype(bool)


# brute-force oracle on finite relations


@dataclass
class OracleReport:
    trials: int = 0
    checks: int = 0
    failures: List[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures


def _mm(a, b):
    return (a.astype(np.int32) @ b.astype(np.int32)) > 0


def finite_oracle(seed: int = 0, trials: int = 10_000, max_size: int = 5) -> OracleReport:
    """Check the relation-algebra identities on random boolean matrices.

    A relation ``X -> Y`` is an ``|X| x |Y|`` matrix, sets are boolean vectors.
    """
    if max_size > 8:
        raise InputError("ground sets are limited to 8 points")
    rng = np.random.default_rng(seed)
    rep = OracleReport()

    def rel(n, m):
        return rng.random((n, m)) < rng.random()

    def vec(n):
        return rng.random(n) < rng.random()

    def img(f, a):
        return _mm(a[None, :], f)[0]

    def pre(f, b):
        return _mm(f, b[:, None])[:, 0]

    def star(f, b):
        return ~pre(f, ~b)

    def check(name, ok):
        rep.checks += 1
        if not ok:
            rep.failures.append(f"trial {rep.trials}: {name}")

    for _ in range(trials):
        rep.trials += 1
        n1, n2, n3 = rng.integers(1, max_size + 1, size=3)
        f, g = rel(n1, n2), rel(n2, n3)
        a = vec(n1)
        b1, b2, c = vec(n2), vec(n2), vec(n3)
        gf = _mm(f, g)
        eye = np.eye(n1, dtype=bool)
        check("identity", np.array_equal(_mm(eye, f), f))
        check("(2.9)", np.all(~star(f, b1) | pre(f, b1) | star(f, np.zeros(n2, bool))))
        check("(2.10) union", np.array_equal(pre(f, b1 | b2), pre(f, b1) | pre(f, b2)))
        check("(2.10) intersection", np.array_equal(star(f, b1 & b2), star(f, b1) & star(f, b2)))
        check("(2.13)", np.array_equal(img(gf, a), img(g, img(f, a))))
        check("(2.14)", np.array_equal(gf.T, _mm(g.T, f.T)))
        check("(2.15) preimage", np.array_equal(pre(gf, c), pre(f, pre(g, c))))
        check("(2.15) costar", np.array_equal(star(gf, c), star(f, star(g, c))))
        meets = bool(np.any(img(f, a) & b1))
        check("(2.16b)", meets == bool(np.any(a & pre(f, b1))) == bool(np.any(f & np.outer(a, b1))))
        e = rel(n1, n1)
        m, n = (int(v) for v in rng.integers(0, 4, size=2))
        sign = 1 if rng.random() < 0.5 else -1
        base = e if sign > 0 else e.T

        def power(p):
            out = eye
            for _ in range(p):
                out = _mm(out, base)
            return out

        check("(4.3)", np.array_equal(power(m + n), _mm(power(m), power(n))))
    return rep
