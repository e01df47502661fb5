"""Coefficient tables for classical diagonal-norm SBP first-derivative operators.

All coefficients are stored as exact rationals and converted to floating point
once, when an operator is built.  The interior stencil is antisymmetric, so only
the positive offsets are tabulated.  The closure block lists the top boundary
rows of the derivative in units of the inverse grid spacing; the bottom block is
its 180-degree rotated negation.  Diagonal mass weights are not tabulated: they
are derived from the requirement that the derivative together with a diagonal
mass matrix satisfies the summation-by-parts identity, which determines them
uniquely.  A transcription error in any table therefore fails loudly, either in
the weight derivation or in the construction-time identity and accuracy checks.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction as F
from functools import lru_cache

from .errors import UnsupportedOrder

#: positive-offset interior coefficients c_1..c_w of the central stencil
_INTERIOR = {
    2: (F(1, 2),),
    4: (F(2, 3), F(-1, 12)),
    6: (F(3, 4), F(-3, 20), F(1, 60)),
    8: (F(4, 5), F(-1, 5), F(4, 105), F(-1, 280)),
}

#: top boundary rows of the derivative (units of 1/dx)
_CLOSURE = {
    2: (
        (F(-1), F(1)),
    ),
    4: (
        (F(-24, 17), F(59, 34), F(-4, 17), F(-3, 34), F(0), F(0)),
        (F(-1, 2), F(0), F(1, 2), F(0), F(0), F(0)),
        (F(4, 43), F(-59, 86), F(0), F(59, 86), F(-4, 43), F(0)),
        (F(3, 98), F(0), F(-59, 98), F(0), F(32, 49), F(-4, 49)),
    ),
    6: (
        (F(-21600, 13649), F(104009, 54596), F(30443, 81894), F(-33311, 27298),
         F(16863, 27298), F(-15025, 163788), F(0), F(0), F(0)),
        (F(-104009, 240260), F(0), F(-311, 72078), F(20229, 24026),
         F(-24337, 48052), F(36661, 360390), F(0), F(0), F(0)),
        (F(-30443, 162660), F(311, 32532), F(0), F(-11155, 16266),
         F(41287, 32532), F(-21999, 54220), F(0), F(0), F(0)),
        (F(33311, 107180), F(-20229, 21436), F(485, 1398), F(0),
         F(4147, 21436), F(25427, 321540), F(72, 5359), F(0), F(0)),
        (F(-16863, 78770), F(24337, 31508), F(-41287, 47262), F(-4147, 15754),
         F(0), F(342523, 472620), F(-1296, 7877), F(144, 7877), F(0)),
        (F(15025, 525612), F(-36661, 262806), F(21999, 87602), F(-25427, 262806),
         F(-342523, 525612), F(0), F(32400, 43801), F(-6480, 43801), F(720, 43801)),
    ),
    8: (
        (F(-2540160, 1498139), F(337402197, 149813900), F(-1764213, 29962780),
         F(-65352283, 89888340), F(-263631, 7490695), F(11412807, 29962780),
         F(-43914241, 449441700), F(-559599, 29962780), F(0), F(0), F(0), F(0)),
        (F(-337402197, 775114900), F(0), F(5528469, 55365350), F(2690691, 5536535),
         F(-539077, 13287684), F(-8393817, 55365350), F(159186, 5536535),
         F(14970671, 1162672350), F(0), F(0), F(0), F(0)),
        (F(588071, 8719620), F(-1842823, 3114150), F(0), F(61799, 622830),
         F(1550167, 1245660), F(-284139, 207610), F(27366, 39925),
         F(-197903, 1453270), F(0), F(0), F(0), F(0)),
        (F(65352283, 548099580), F(-2690691, 6524995), F(-185397, 13049990), F(0),
         F(-611433, 5219996), F(8809341, 13049990), F(-5639542, 19574985),
         F(3427959, 91349930), F(0), F(0), F(0), F(0)),
        (F(263631, 10483445), F(539077, 3594324), F(-4650501, 5990540),
         F(611433, 1198108), F(0), F(-3402987, 5990540), F(1068429, 1198108),
         F(-28204889, 125801340), F(-2592, 299527), F(0), F(0), F(0)),
        (F(-543467, 6185820), F(2797939, 15464550), F(2169, 7870),
         F(-2936447, 3092910), F(8659, 47220), F(0), F(1090656, 2577425),
         F(-27216, 515485), F(3072, 103097), F(-288, 103097), F(0), F(0)),
        (F(6273463, 201027300), F(-159186, 3350455), F(-3201822, 16752275),
         F(5639542, 10051365), F(-1068429, 2680364), F(-9815904, 16752275), F(0),
         F(13571712, 16752275), F(-145152, 670091), F(27648, 670091),
         F(-2592, 670091), F(0)),
        (F(559599, 102554780), F(-14970671, 769160850), F(24399, 702430),
         F(-3427959, 51277390), F(28204889, 307664340), F(1714608, 25638695),
         F(-95001984, 128193475), F(0), F(4064256, 5127739), F(-1016064, 5127739),
         F(193536, 5127739), F(-18144, 5127739)),
    ),
}


@dataclass(frozen=True)
class CoefficientTable:
    """Exact-rational building blocks of one operator family member."""

    order: int
    interior: tuple          # positive-offset interior coefficients
    closure: tuple           # top closure rows, units of 1/dx
    boundary_weights: tuple  # leading diagonal mass weights, units of dx

    @property
    def halfwidth(self) -> int:
        return len(self.interior)

    @property
    def n_closure_rows(self) -> int:
        return len(self.closure)

    @property
    def closure_width(self) -> int:
        return len(self.closure[0])

    @property
    def min_nodes(self) -> int:
        """Smallest grid on which top and bottom closure rows do not overlap."""
        return 2 * self.n_closure_rows


def available_orders() -> tuple:
    return tuple(sorted(_CLOSURE))


@lru_cache(maxsize=None)
def coefficient_table(order: int) -> CoefficientTable:
    if order not in _CLOSURE:
        raise UnsupportedOrder(
            f"interior order {order!r} not available; choose from {available_orders()}"
        )
    closure = _CLOSURE[order]
    interior = _INTERIOR[order]
    weights = _derive_boundary_weights(closure, interior)
    return CoefficientTable(order, interior, closure, weights)


def _derive_boundary_weights(closure, interior) -> tuple:
    """Solve h_a D_ab = -h_b D_ba for the leading diagonal mass weights.

    The first weight follows from h_1 D_11 = -1/2 (the top-left boundary
    entry); the remaining ones are propagated through nonzero closure entries
    and cross-checked against every available pair, including pairs coupling a
    closure row to the first interior rows (unit weight).
    """
    b = len(closure)
    wt = len(closure[0])
    w = len(interior)
    full_stencil = tuple(-c for c in reversed(interior)) + (F(0),) + interior

    def d_entry(i, j):
        # entries of the upper-left part of the derivative on a large grid
        if i < b:
            return closure[i][j] if j < wt else F(0)
        k = j - i + w
        return full_stencil[k] if 0 <= k <= 2 * w else F(0)

    n_virtual = b + w + 1
    h = [None] * n_virtual
    h[0] = F(-1, 2) / closure[0][0]
    for i in range(b, n_virtual):
        h[i] = F(1)
    for _ in range(b):
        for a in range(n_virtual):
            if h[a] is None:
                continue
            for c in range(b):
                dca = d_entry(c, a)
                dac = d_entry(a, c)
                if h[c] is None and dca != 0:
                    h[c] = -h[a] * dac / dca
    if any(x is None for x in h[:b]):
        raise AssertionError("mass weight propagation incomplete; table defective")
    for a in range(n_virtual):
        for c in range(n_virtual):
            q = h[a] * d_entry(a, c) + h[c] * d_entry(c, a)
            expect = F(-1) if a == c == 0 else F(0)
            if q != expect:
                raise AssertionError(
                    f"closure table violates the SBP identity at ({a}, {c})"
                )
    if any(x <= 0 for x in h[:b]):
        raise AssertionError("derived mass weights not positive; table defective")
    return tuple(h[:b])
