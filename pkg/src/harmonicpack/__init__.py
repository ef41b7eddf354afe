"""Harmonic-class online bin packing and exact ratio certification.

The package bundles:

  * :mod:`harmonicpack.params` -- exact-rational parameter tables for
    Super-Harmonic packers (breakpoints, red fractions, capacities,
    reserved spaces) with validation and JSON round-tripping;
  * :mod:`harmonicpack.harmonic` -- the classic Harmonic(k) 1D packer and
    its weighting function;
  * :mod:`harmonicpack.superharmonic` -- the Super-Harmonic 1D packer with
    red/blue colouring, group bookkeeping, and end-state classification;
  * :mod:`harmonicpack.weighting` -- the case-indexed weighting functions
    and the cost-bound checker;
  * :mod:`harmonicpack.pack2d` -- the 2D slice packers (width classes,
    per-class height stacking, shared 1D run) with exact geometric
    validation and the combined per-rectangle weight;
  * :mod:`harmonicpack.boundcert` -- exact single-bin pattern maximization
    (branch and bound plus an enumeration oracle), cut validation, and the
    per-pair certificate that pins the 2D asymptotic ratio below 2.5545;
  * :mod:`harmonicpack.generators` / :mod:`harmonicpack.cli` -- seeded
    instance generation and the command-line harness.

All arithmetic on sizes, weights, and bounds is exact (``fractions``).
"""

from .harmonic import HarmonicPacker, harmonic_type, w_h
from .params import ParamTable, builtin_shplus, validate
from .superharmonic import ShState
from .weighting import WeightFunctionSet, bound_check
from .pack2d import Item2D, TensorRun, tensor_cost, validate_geometry, w2d
from .boundcert import (PatternModel, PiecewiseFn, brute_force_max,
                        pattern_max, ratio_certificate, validate_cut)

__version__ = "0.1.0"

__all__ = [
    "HarmonicPacker", "harmonic_type", "w_h",
    "ParamTable", "builtin_shplus", "validate",
    "ShState", "WeightFunctionSet", "bound_check",
    "Item2D", "TensorRun", "tensor_cost", "validate_geometry", "w2d",
    "PatternModel", "PiecewiseFn", "brute_force_max", "pattern_max",
    "ratio_certificate", "validate_cut",
]
