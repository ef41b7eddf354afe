"""The classic Harmonic(k) online 1D bin packer and its weighting function.

Items are classified by size: type i covers the interval (1/(i+1), 1/i] for
i < k, and everything at or below 1/k is type k.  Each type is packed by
Next Fit into bins dedicated to that type, so at most one bin per type is
open at any time; a closed type-i bin (i < k) holds exactly i items, and a
closed type-k bin is filled above 1 - 1/k.

The weighting function charges 1/i to a type-i item (i < k) and
(k/(k-1)) * x to a tiny item of size x; the packer's cost never exceeds the
total charge plus k (one open bin per type).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction


def harmonic_type(size: Fraction, k: int) -> int:
    """Type index in 1..k of an item of ``size`` (1/(i+1) < size <= 1/i)."""
    if not (0 < size <= 1):
        raise ValueError(f"item size {size} outside (0, 1]")
    if size * k <= 1:
        return k
    # floor(1/size); exact for Fraction input
    return size.denominator // size.numerator


def w_h(size: Fraction, k: int) -> Fraction:
    """Weight of an item: 1/i on (1/(i+1), 1/i], linear k/(k-1) on the tail."""
    i = harmonic_type(size, k)
    if i < k:
        return Fraction(1, i)
    return Fraction(k, k - 1) * size


@dataclass(frozen=True)
class Placement:
    bin_id: int
    opened: bool


class HarmonicPacker:
    """Online Harmonic(k) packing state.

    One packer per run; replaying the same item sequence reproduces the
    same placements.  ``closed_bins[i]`` counts closed type-i bins;
    ``closed_tiny_sums`` records the content of every closed type-k bin
    (used by the census checks).
    """

    def __init__(self, k: int):
        if k < 2:
            raise ValueError("k must be at least 2")
        self.k = k
        self.cost = 0
        self.total_weight = Fraction(0)
        self.items_packed = 0
        # per type i < k: (bin_id, item count); type k: (bin_id, content sum)
        self._open: dict = {}
        self._open_tiny = None
        self.closed_bins = [0] * (k + 1)
        self.closed_tiny_sums: list = []

    def _new_bin(self) -> int:
        bid = self.cost
        self.cost += 1
        return bid

    def insert(self, size: Fraction) -> Placement:
        i = harmonic_type(size, self.k)
        self.total_weight += w_h(size, self.k)
        self.items_packed += 1
        if i < self.k:
            slot = self._open.get(i)
            if slot is None:
                bid = self._new_bin()
                count = 1
                opened = True
            else:
                bid, count = slot
                count += 1
                opened = False
            if count == i:
                self.closed_bins[i] += 1
                self._open.pop(i, None)
            else:
                self._open[i] = (bid, count)
            return Placement(bin_id=bid, opened=opened)
        # Next Fit on the tiny type
        if self._open_tiny is not None:
            bid, filled = self._open_tiny
            if filled + size <= 1:
                self._open_tiny = (bid, filled + size)
                return Placement(bin_id=bid, opened=False)
            self.closed_bins[self.k] += 1
            self.closed_tiny_sums.append(filled)
        bid = self._new_bin()
        self._open_tiny = (bid, size)
        return Placement(bin_id=bid, opened=True)

    def pack(self, sizes) -> list:
        return [self.insert(s) for s in sizes]

    @property
    def open_bin_count(self) -> int:
        return len(self._open) + (self._open_tiny is not None)

    def weight_slack(self) -> Fraction:
        """cost - total weight; at most k by the open-bin argument."""
        return self.cost - self.total_weight
