"""2D online bin packing by slicing: Harmonic on one axis, Super-Harmonic on
the other, and the fair-coin average of the two orientations.

A rectangle is first rounded up in its width coordinate to a slice class:
widths above eps round to the type breakpoint t[i] of their interval, and
widths at or below eps round to a geometric grid eps*(1-d)^m for a small
d > 0.  Items of one class are stacked on top of each other into slices
(width = class value, height 1) by a per-class Harmonic packer over the
height coordinate; whenever a class needs a fresh slice, the slice is
allocated inside a real bin by a shared 1D Super-Harmonic run that treats
the slice as an item of size equal to the class value.

Geometry inside a bin: blue slices of the bin's 1D type i sit side by side
from the left edge (offsets 0, t[i], 2 t[i], ...), red slices fill the
reserved space from the right edge leftwards, and Next-Fit bins pack tiny
slices left to right.  Blue loads stop at beta*t <= 1 - Delta[phi] and red
loads at gamma*t <= Delta[phi], so slices never overlap; items never
overlap inside a slice because their heights are stacked.

The geometric grid is materialized as an exact-rational ladder with one
multiplication by (1-d) per step, rounded to 15 decimal digits per step to
keep denominators bounded (the ideal power's digits grow linearly with m,
which is infeasible for m in the tens of thousands).  The relative drift
after m steps is below m * 1e-15 and every membership test is exact
against the materialized values, so slices always cover their items.

The two-orientation average satisfies the slice analysis bound

    2 (1-d) * avg_cost <= maxW(width-first run) + maxW(height-first run) + C

where maxW is the largest, over the 1D weighting cases, of
sum_items W_H(stacked coordinate) * W_case(slice class of the other
coordinate); the test-suite pins C = 300.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .harmonic import harmonic_type, w_h
from .params import ParamTable
from .superharmonic import ShState
from .weighting import WeightFunctionSet


@dataclass(frozen=True)
class Item2D:
    w: Fraction
    h: Fraction

    def __post_init__(self):
        if not (0 < self.w <= 1 and 0 < self.h <= 1):
            raise ValueError(f"rectangle {self.w} x {self.h} outside (0,1]^2")

    @property
    def transposed(self) -> "Item2D":
        return Item2D(w=self.h, h=self.w)


class TinyGrid:
    """The geometric width grid below eps: value(m) ~ eps * (1-d)^m.

    Ladders are deep (m reaches tens of thousands for very thin items), so
    instances are shared per (eps, d) via :meth:`shared`; the ladder is
    append-only and deterministic.
    """

    _shared: dict = {}

    def __init__(self, eps: Fraction, delta: Fraction, sig_digits: int = 18):
        if not 0 < delta < Fraction(1, 2):
            raise ValueError("grid parameter must lie in (0, 1/2)")
        self.eps = eps
        self.delta = delta
        self._sig = sig_digits
        self._vals = [eps]
        self._log_ratio = math.log1p(-float(delta))

    @classmethod
    def shared(cls, eps: Fraction, delta: Fraction) -> "TinyGrid":
        key = (eps, delta)
        if key not in cls._shared:
            cls._shared[key] = cls(eps, delta)
        return cls._shared[key]

    def value(self, m: int) -> Fraction:
        vals = self._vals
        while len(vals) <= m:
            nxt = vals[-1] * (1 - self.delta)
            # round to bounded significant digits; the relative error per
            # step is far below the grid ratio, so the ladder stays
            # strictly decreasing and denominators stay small
            q = 10 ** (self._sig - 1 - math.floor(math.log10(float(nxt))))
            vals.append(Fraction(int(nxt * q), q))
        return vals[m]

    def class_of(self, w: Fraction) -> int:
        """The unique m with value(m+1) < w <= value(m)."""
        if not 0 < w <= self.eps:
            raise ValueError(f"width {w} outside the tiny range (0, {self.eps}]")
        m = max(0, int(math.log(float(w / self.eps)) / self._log_ratio) - 2)
        while self.value(m + 1) >= w:
            m += 1
        while self.value(m) < w:  # guard against float underestimation
            m -= 1
        return m


@dataclass
class Slice:
    sid: int
    width: Fraction  # class value
    bin_id: int
    x: Fraction
    height_type: int  # Harmonic type of the heights stacked here
    y_fill: Fraction = Fraction(0)
    count: int = 0


@dataclass(frozen=True)
class Placement2D:
    item_index: int
    bin_id: int
    slice_id: int
    x: Fraction
    y: Fraction
    w: Fraction
    h: Fraction


class TensorRun:
    """One orientation of the slice packer over a shared 1D run.

    ``orientation`` is "hxb" (slices cut by width, heights stacked) or
    "bxh" (the transpose; callers feed transposed items and read the
    geometry transposed).  Heights are stacked with Harmonic index
    1/eps (38 for the built-in table).
    """

    def __init__(self, table: ParamTable, orientation: str = "hxb",
                 delta: Fraction = Fraction(1, 10000), keep_geometry: bool = True):
        if orientation not in ("hxb", "bxh"):
            raise ValueError(f"unknown orientation {orientation!r}")
        hk = Fraction(1) / table.eps
        if hk.denominator != 1:
            raise ValueError("1/eps must be an integer for height stacking")
        self.table = table
        self.orientation = orientation
        self.delta = Fraction(delta)
        self.hk = int(hk)
        self.inner = ShState(table)
        self.grid = TinyGrid.shared(table.eps, self.delta)
        self.keep_geometry = keep_geometry
        self.slices: list = []
        self.placements: list = []
        self.items_packed = 0
        self._open: dict = {}  # (class key, height type) -> Slice
        # weight accounting: per classified width type, total height weight;
        # tiny classes weighted by class value directly
        self._height_weight = [Fraction(0)] * (table.k + 1)
        self._tiny_weight = Fraction(0)

    @property
    def cost(self) -> int:
        return self.inner.cost

    # width -> (class key, class value)
    def width_class(self, w: Fraction):
        i = self.table.classify(w)
        if i <= self.table.k:
            return ("t", i), self.table.t[i]
        m = self.grid.class_of(w)
        return ("e", m), self.grid.value(m)

    def _slice_x(self, trace, width: Fraction) -> Fraction:
        b = self.inner.bins[trace.bin_id]
        if trace.color == "blue":
            return (b.blue_count - 1) * width
        if trace.color == "red":
            return 1 - b.red_sum
        return self.inner.nf_fill - width  # tiny: Next Fit, left to right

    def _new_slice(self, width: Fraction, height_type: int) -> Slice:
        trace = self.inner.insert(width)
        sl = Slice(sid=len(self.slices), width=width, bin_id=trace.bin_id,
                   x=self._slice_x(trace, width), height_type=height_type)
        self.slices.append(sl)
        return sl

    def insert(self, item: Item2D) -> Placement2D:
        key, width = self.width_class(item.w)
        hw = w_h(item.h, self.hk)
        if key[0] == "t":
            self._height_weight[key[1]] += hw
        else:
            self._tiny_weight += width * hw
        ht = harmonic_type(item.h, self.hk)
        slot = (key, ht)
        sl = self._open.get(slot)
        if sl is not None:
            full = (sl.count >= ht) if ht < self.hk else (sl.y_fill + item.h > 1)
            if full:
                sl = None
        if sl is None:
            sl = self._new_slice(width, ht)
            self._open[slot] = sl
        p = Placement2D(item_index=self.items_packed, bin_id=sl.bin_id,
                        slice_id=sl.sid, x=sl.x, y=sl.y_fill,
                        w=item.w, h=item.h)
        sl.y_fill += item.h
        sl.count += 1
        self.items_packed += 1
        if self.keep_geometry:
            self.placements.append(p)
        return p

    def pack(self, items) -> "TensorRun":
        for it in items:
            self.insert(it)
        return self

    def weight_bounds(self, wset: WeightFunctionSet) -> list:
        """Per-case totals of W_H(height) * W_case(width class); 1-based."""
        tail = self._tiny_weight * wset.tail_slope
        out = [None]
        for case in range(1, wset.num_cases + 1):
            row = wset.values[case]
            s = sum((self._height_weight[i] * row[i]
                     for i in range(1, self.table.k + 1)
                     if self._height_weight[i]), Fraction(0))
            out.append(s + tail)
        return out

    def max_weight_bound(self, wset: WeightFunctionSet) -> Fraction:
        return max(self.weight_bounds(wset)[1:])


def w2d(case_i: int, case_j: int, x: Fraction, y: Fraction,
        wset: WeightFunctionSet) -> Fraction:
    """Combined per-rectangle weight of the two orientations.

    (W_H(x) * W^i(y) + W^j(x) * W_H(y)) / 2, with the height weighting at
    harmonic index 1/eps.  Symmetric under (i, j, x, y) -> (j, i, y, x).
    """
    hk = int(Fraction(1) / wset.table.eps)
    return (w_h(x, hk) * wset.w(y, case_i) + wset.w(x, case_j) * w_h(y, hk)) / 2


@dataclass
class TensorCost:
    cost_hxb: int
    cost_bxh: int
    avg: Fraction


def tensor_cost(items, table: ParamTable, delta: Fraction = Fraction(1, 10000),
                keep_geometry: bool = False):
    """Run both orientations and average them (the fair-coin expectation)."""
    hxb = TensorRun(table, "hxb", delta, keep_geometry=keep_geometry)
    bxh = TensorRun(table, "bxh", delta, keep_geometry=keep_geometry)
    for it in items:
        hxb.insert(it)
        bxh.insert(it.transposed)
    return TensorCost(cost_hxb=hxb.cost, cost_bxh=bxh.cost,
                      avg=Fraction(hxb.cost + bxh.cost, 2)), hxb, bxh


def validate_geometry(run: TensorRun) -> list:
    """Exact geometric audit of a finished run.

    Checks every rectangle against the unit bin, against its slice span,
    and pairwise (per bin) for positive-area overlap via a sweep over x
    with the active set kept sorted by the y interval.  Returns violation
    strings; empty means the packing is geometrically consistent.
    """
    bad = []
    if not run.keep_geometry:
        raise ValueError("run was packed with keep_geometry=False")
    per_bin: dict = {}
    for p in run.placements:
        sl = run.slices[p.slice_id]
        if not (0 <= p.x and p.x + p.w <= 1 and 0 <= p.y and p.y + p.h <= 1):
            bad.append(f"item {p.item_index}: outside the unit bin")
        if p.x < sl.x or p.x + p.w > sl.x + sl.width:
            bad.append(f"item {p.item_index}: exceeds slice {sl.sid} span")
        if p.bin_id != sl.bin_id:
            bad.append(f"item {p.item_index}: bin does not match its slice")
        per_bin.setdefault(p.bin_id, []).append(p)
    for bin_id, rects in per_bin.items():
        bad.extend(_overlaps_in_bin(bin_id, rects))
    return bad


def _overlaps_in_bin(bin_id: int, rects) -> list:
    # sweep over x; closes processed before opens so touching edges pass
    events = []
    for p in rects:
        events.append((p.x, 1, p))
        events.append((p.x + p.w, 0, p))
    events.sort(key=lambda e: (e[0], e[1]))
    bad = []
    active: list = []  # sorted by y of the open rectangles

    import bisect

    for _, kind, p in events:
        key = (p.y, p.y + p.h, p.item_index)
        if kind == 0:
            pos = bisect.bisect_left(active, key)
            if pos < len(active) and active[pos] == key:
                active.pop(pos)
            continue
        pos = bisect.bisect_left(active, key)
        for nb in (pos - 1, pos):
            if 0 <= nb < len(active):
                oy0, oy1, oidx = active[nb]
                if oy0 < p.y + p.h and p.y < oy1:
                    bad.append(f"bin {bin_id}: items {oidx} and {p.item_index} overlap")
        active.insert(pos, key)
    return bad
