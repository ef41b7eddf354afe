"""Deterministic instance generators for packing experiments.

Every generator is driven by a named seed through Python's Mersenne
Twister (``random.Random``), whose sequence is stable across platforms and
versions, so a spec (kind, n, seed, params) always produces the same list.
Sizes are exact rationals on a 10^-6 grid.

Kinds:

  * ``uniform`` -- sizes (or both rectangle sides) uniform on the grid of
    (0, 1].
  * ``harmonic-adversarial`` -- sizes just above a list of breakpoints
    (default: the greedy sequence 1/2, 1/3, 1/7, 1/43), the classic
    waste-maximizing stream for interval-classifying packers; items are
    emitted round-robin so every prefix is balanced.
  * ``tiled-known-opt`` -- ``bins`` copies of a pattern that tiles a bin
    exactly, shuffled; the optimal cost equals ``bins`` and is recorded.
  * ``file`` -- read from disk (one size, or "w h", per line; ``#``
    comments).
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from .pack2d import Item2D
from .params import parse_rational

GRID = 10 ** 6

_DEFAULT_LEVELS = ("1/2", "1/3", "1/7", "1/43")
_DEFAULT_PATTERN_1D = ("0.51", "0.49")


@dataclass(frozen=True)
class InstanceSpec:
    kind: str  # uniform | harmonic-adversarial | tiled-known-opt | file
    n: int = 0
    seed: int = 0
    dims: int = 1
    params: dict = field(default_factory=dict)


@dataclass
class Instance:
    spec: InstanceSpec
    items: list  # Fractions (1D) or Item2D (2D)
    known_opt: Optional[int] = None


def _uniform_size(rng: random.Random) -> Fraction:
    return Fraction(rng.randint(1, GRID), GRID)


def generate(spec: InstanceSpec) -> Instance:
    if spec.kind == "uniform":
        rng = random.Random(spec.seed)
        if spec.dims == 1:
            items = [_uniform_size(rng) for _ in range(spec.n)]
        else:
            items = [Item2D(_uniform_size(rng), _uniform_size(rng))
                     for _ in range(spec.n)]
        return Instance(spec=spec, items=items)

    if spec.kind == "harmonic-adversarial":
        levels = [parse_rational(x) for x in
                  spec.params.get("levels", _DEFAULT_LEVELS)]
        jitter = parse_rational(spec.params.get("jitter", Fraction(1, GRID)))
        sizes = [min(lv + jitter, Fraction(1)) for lv in levels]
        rng = random.Random(spec.seed)
        if spec.dims == 1:
            items = [sizes[i % len(sizes)] for i in range(spec.n)]
        else:
            items = [Item2D(sizes[i % len(sizes)], _uniform_size(rng))
                     for i in range(spec.n)]
        return Instance(spec=spec, items=items)

    if spec.kind == "tiled-known-opt":
        bins = int(spec.params.get("bins", max(1, spec.n)))
        rng = random.Random(spec.seed)
        if spec.dims == 1:
            pattern = [parse_rational(x) for x in
                       spec.params.get("pattern", _DEFAULT_PATTERN_1D)]
            if sum(pattern) != 1:
                raise ValueError("tiling pattern must sum to exactly 1")
            items = [s for _ in range(bins) for s in pattern]
        else:
            rows = int(spec.params.get("rows", 2))
            cols = int(spec.params.get("cols", 2))
            tile = Item2D(Fraction(1, cols), Fraction(1, rows))
            items = [tile for _ in range(bins * rows * cols)]
        rng.shuffle(items)
        return Instance(spec=spec, items=items, known_opt=bins)

    if spec.kind == "file":
        path = spec.params["path"]
        dims = spec.dims
        items = []
        with open(path, "r", encoding="utf-8") as fh:
            for line in fh:
                line = line.split("#", 1)[0].strip()
                if not line:
                    continue
                parts = line.split()
                if dims == 1:
                    if len(parts) != 1:
                        raise ValueError(f"expected one size per line, got {line!r}")
                    items.append(parse_rational(parts[0]))
                else:
                    if len(parts) != 2:
                        raise ValueError(f"expected 'w h' per line, got {line!r}")
                    items.append(Item2D(parse_rational(parts[0]),
                                        parse_rational(parts[1])))
        return Instance(spec=spec, items=items)

    raise ValueError(f"unknown instance kind {spec.kind!r}")
