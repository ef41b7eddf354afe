"""Parameter tables for Super-Harmonic style online bin packing.

A Super-Harmonic instance is described by a table of breakpoints and
per-type packing parameters:

  * ``t[1] = 1 > t[2] > ... > t[k+1] = eps > t[k+2] = 0`` -- size breakpoints.
    An item of size ``x`` has type ``i`` iff ``t[i+1] < x <= t[i]``; items of
    type ``k+1`` (size at most ``eps``) are packed by Next Fit.
  * ``alpha[i]`` -- fraction of type-i items coloured red.
  * ``beta[i] = floor(1/t[i])`` -- blue items of type i per bin.
  * ``delta[i] = 1 - t[i]*beta[i]`` -- space left by a full blue load.
  * ``Delta[0] = 0 < Delta[1] < ... < Delta[K] < 1/2`` -- the finite menu of
    reserved spaces into which red items may be packed.
  * ``phi[i]`` -- index of the reserved space assigned to blue-i bins
    (0 means blue-i bins accept no red items).
  * ``varphi[i]`` -- index of the smallest reserved space a red type-i item
    fits into (0 when the item is too large for every space).
  * ``gamma[i]`` -- red items of type i per reserved space.

All entries are exact rationals; decimal literals such as ``0.294`` are
parsed as exact base-10 fractions.  The built-in instance ("SH+", 50 large
types, 6 reserved spaces, eps = 1/38) is the one used by the 2D slice
packer and the ratio certifier in this package.

Types with ``alpha[i] = 0`` never produce red items, so their red-side
attributes are vacuous.  The built-in table records 0 for ``varphi``/``gamma``
on two such rows (14 and 50) where the general formulas would give a nonzero
value; :func:`validate` accepts either convention for red-free types.
"""

from __future__ import annotations

import json
from bisect import bisect_left
from dataclasses import dataclass
from fractions import Fraction

def parse_rational(text: str | int | float | Fraction) -> Fraction:
    """Parse "353/500", "0.294", or a number into an exact Fraction."""
    if isinstance(text, Fraction):
        return text
    if isinstance(text, int):
        return Fraction(text)
    if isinstance(text, float):
        # Floats are not exact; go through their shortest repr so that a
        # literal like 0.294 means the decimal 294/1000, not its binary image.
        return Fraction(repr(text))
    return Fraction(str(text))


@dataclass(frozen=True)
class ParamTable:
    """A Super-Harmonic parameter instance.

    Arrays are 1-indexed (index 0 is padding) so that code reads like the
    definitions above: ``t[i]``, ``alpha[i]`` etc. for ``1 <= i <= k``.
    ``t`` has entries ``1..k+2``.  Row ``k+1`` (the Next-Fit tail type) has
    no alpha/beta/... attributes.  Instances are immutable and safe to share.
    """

    k: int
    K: int
    t: tuple  # t[1..k+2], index 0 is None
    alpha: tuple  # alpha[1..k]
    beta: tuple  # beta[1..k]
    delta: tuple  # delta[1..k], leftover 1 - t[i]*beta[i]
    Delta: tuple  # Delta[0..K]
    phi: tuple  # phi[1..k], values in 0..K
    varphi: tuple  # varphi[1..k], values in 0..K
    gamma: tuple  # gamma[1..k]

    def __post_init__(self):
        # ascending breakpoint list used by classify():
        #   [t[k+1], t[k], ..., t[2]]
        asc = [self.t[i] for i in range(self.k + 1, 1, -1)]
        object.__setattr__(self, "_asc_breaks", asc)

    @property
    def eps(self) -> Fraction:
        return self.t[self.k + 1]

    def classify(self, size: Fraction) -> int:
        """Type of an item of ``size``: the unique i with t[i+1] < size <= t[i].

        Raises ValueError outside (0, 1].
        """
        if not (0 < size <= 1):
            raise ValueError(f"item size {size} outside (0, 1]")
        # number of breakpoints strictly below `size` among t[k+1]..t[2]
        cnt = bisect_left(self._asc_breaks, size)
        return self.k + 1 - cnt

    def gamma_space(self, i: int) -> Fraction:
        """Space gamma[i] * t[i] needed to reserve a full red load of type i."""
        return self.gamma[i] * self.t[i]

    # -- serialization ----------------------------------------------------

    def to_json_dict(self) -> dict:
        def arr(seq, start):
            return [str(x) for x in seq[start:]]

        return {
            "k": self.k,
            "K": self.K,
            "t": arr(self.t, 1),
            "alpha": arr(self.alpha, 1),
            "beta": list(self.beta[1:]),
            "gamma": list(self.gamma[1:]),
            "phi": list(self.phi[1:]),
            "varphi": list(self.varphi[1:]),
            "Delta": arr(self.Delta, 0),
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json_dict(), indent=2)

    @classmethod
    def from_json_dict(cls, data: dict) -> "ParamTable":
        k = int(data["k"])
        bigk = int(data["K"])
        t_in = [parse_rational(x) for x in data["t"]]
        if len(t_in) == k + 1:  # trailing 0 may be omitted
            t_in.append(Fraction(0))
        if len(t_in) != k + 2:
            raise ValueError(f"t must have k+1 or k+2 entries, got {len(t_in)}")
        t = (None, *t_in)
        alpha = (None, *(parse_rational(x) for x in data["alpha"]))
        beta = (None, *(int(x) for x in data["beta"]))
        gamma = (None, *(int(x) for x in data["gamma"]))
        phi = (None, *(int(x) for x in data["phi"]))
        varphi = (None, *(int(x) for x in data["varphi"]))
        Delta = tuple(parse_rational(x) for x in data["Delta"])
        delta = (None, *(1 - t[i] * beta[i] for i in range(1, k + 1)))
        return cls(k=k, K=bigk, t=t, alpha=alpha, beta=beta, delta=delta,
                   Delta=Delta, phi=phi, varphi=varphi, gamma=gamma)

    @classmethod
    def loads(cls, text: str) -> "ParamTable":
        return cls.from_json_dict(json.loads(text))

    @classmethod
    def load(cls, path) -> "ParamTable":
        with open(path, "r", encoding="utf-8") as fh:
            return cls.from_json_dict(json.load(fh))


# -- the built-in SH+ instance (k = 50, K = 6, eps = 1/38) -----------------

# Rows 1..20 and 50: (i, t_i, alpha_i, beta_i, phi_i, varphi_i, gamma_i).
# delta_i is derived.  Rows 21..49 follow closed forms, see _builtin_rows().
_EXPLICIT_ROWS = [
    (1, "1", "0", 1, 0, 0, 0),
    (2, "0.706", "0", 1, 1, 0, 0),
    (3, "0.657", "0", 1, 2, 0, 0),
    (4, "0.647", "0", 1, 3, 0, 0),
    (5, "0.625", "0", 1, 4, 0, 0),
    (6, "0.6", "0", 1, 5, 0, 0),
    (7, "0.58", "0", 1, 6, 0, 0),
    (8, "0.5", "0", 2, 0, 0, 0),
    (9, "0.42", "0.162", 2, 0, 6, 1),
    (10, "0.4", "0.192", 2, 0, 5, 1),
    (11, "0.375", "0.2346", 2, 0, 4, 1),
    (12, "0.353", "0.3004", 2, 1, 3, 1),
    (13, "0.343", "0.3077", 2, 1, 2, 1),
    (14, "1/3", "0", 3, 0, 0, 0),
    (15, "0.294", "0.0816", 3, 0, 1, 1),
    (16, "1/4", "0.186", 4, 0, 1, 1),
    (17, "1/5", "0.092", 5, 0, 1, 1),
    (18, "1/6", "0.1456", 6, 0, 1, 1),
    (19, "0.147", "0.2162", 6, 0, 1, 2),
    (20, "1/7", "0.1525", 7, 0, 1, 2),
    (50, "1/37", "0", 37, 0, 0, 0),
]

_DELTAS = ["0", "0.294", "0.343", "0.353", "0.375", "0.4", "0.42"]


def middle_red_fraction(i: int) -> Fraction:
    """Red fraction used on rows 21..49: 1.35*(50-i) / (37*(i-12))."""
    return Fraction(27 * (50 - i), 740 * (i - 12))


def _builtin_rows() -> list:
    rows = {i: (parse_rational(t), parse_rational(a), b, p, v, g)
            for i, t, a, b, p, v, g in _EXPLICIT_ROWS}
    d1 = parse_rational(_DELTAS[1])
    for i in range(21, 50):
        t = Fraction(1, i - 13)
        # gamma = floor(Delta_1 / t); these rows all fit the smallest space
        rows[i] = (t, middle_red_fraction(i), i - 13, 0, 1, int(d1 / t))
    return [rows[i] for i in range(1, 51)]


def builtin_shplus() -> ParamTable:
    """The built-in 50-type instance with reserved spaces {0.294, ..., 0.42}."""
    rows = _builtin_rows()
    k = 50
    t = [None, *(r[0] for r in rows), Fraction(1, 38), Fraction(0)]
    alpha = [None, *(r[1] for r in rows)]
    beta = [None, *(r[2] for r in rows)]
    phi = [None, *(r[3] for r in rows)]
    varphi = [None, *(r[4] for r in rows)]
    gamma = [None, *(r[5] for r in rows)]
    delta = [None, *(1 - t[i] * beta[i] for i in range(1, k + 1))]
    return ParamTable(
        k=k, K=6,
        t=tuple(t), alpha=tuple(alpha), beta=tuple(beta), delta=tuple(delta),
        Delta=tuple(parse_rational(d) for d in _DELTAS),
        phi=tuple(phi), varphi=tuple(varphi), gamma=tuple(gamma),
    )


def validate(table: ParamTable) -> list:
    """Check a table against the definitional constraints.

    Returns a list of human-readable violation strings (empty when the table
    is consistent).  Violations are data, not exceptions.
    """
    v: list = []
    k, K = table.k, table.K

    if table.t[1] != 1:
        v.append("t[1] != 1")
    if table.t[k + 2] != 0:
        v.append(f"t[{k + 2}] != 0")
    for i in range(1, k + 2):
        if not table.t[i] > table.t[i + 1]:
            v.append(f"t not strictly decreasing at row {i}")
    if not (0 < table.eps):
        v.append("eps must be positive")

    if table.Delta[0] != 0:
        v.append("Delta[0] != 0")
    for j in range(1, K + 1):
        if not table.Delta[j] > table.Delta[j - 1]:
            v.append(f"Delta not strictly increasing at {j}")
    if not table.Delta[K] < Fraction(1, 2):
        v.append("Delta[K] must be below 1/2")

    for i in range(1, k + 1):
        ti = table.t[i]
        if not (0 <= table.alpha[i] <= 1):
            v.append(f"alpha[{i}] outside [0,1]")
        want_beta = int(1 / ti)
        if table.beta[i] != want_beta:
            v.append(f"beta[{i}] != floor(1/t[{i}]) = {want_beta}")
        if table.delta[i] != 1 - ti * table.beta[i]:
            v.append(f"delta[{i}] != 1 - t[{i}]*beta[{i}]")
        if not (0 <= table.phi[i] <= K):
            v.append(f"phi[{i}] outside 0..K")
        if table.phi[i] > 0 and not table.Delta[table.phi[i]] <= table.delta[i]:
            v.append(f"Delta[phi[{i}]] > delta[{i}]")

        # varphi / gamma follow closed forms; for red-free types (alpha = 0)
        # a recorded 0 is accepted as "not used".
        if ti > table.Delta[K]:
            want_varphi = 0
            want_gamma = 0
        else:
            want_varphi = next(j for j in range(1, K + 1) if ti <= table.Delta[j])
            want_gamma = max(1, int(table.Delta[1] / ti))
        red_free = table.alpha[i] == 0
        if table.varphi[i] != want_varphi and not (red_free and table.varphi[i] == 0):
            v.append(f"varphi[{i}] != {want_varphi}")
        if table.gamma[i] != want_gamma and not (red_free and table.gamma[i] == 0):
            v.append(f"gamma[{i}] != {want_gamma}")
        if table.gamma[i] == 0 and table.alpha[i] != 0:
            v.append(f"alpha[{i}] > 0 but gamma[{i}] = 0")
        if table.alpha[i] > 0 and table.varphi[i] < 1:
            v.append(f"alpha[{i}] > 0 but varphi[{i}] = 0")
    return v
