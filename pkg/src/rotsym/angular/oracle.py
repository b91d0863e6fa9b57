"""Brute-force 6-j symbols from sums of four 3-j symbols.

This path is deliberately floating point: products of four square roots are
not closed in :class:`SqrtRational`.  It exists to check :func:`wigner_6j`
against an independent formula::

    {l1 l2 l3; l1' l2' l3'}
        = sum (-1)^(m1'+m2'+m3' - l1'-l2'-l3' + T)
              (l1 l2 l3; m1 m2 m3) (l1 l2' l3'; -m1 m2' -m3')
              (l1' l2 l3'; -m1' -m2 m3') (l1' l2' l3; m1' -m2' -m3)

with ``T = (l1+l2'+l3') + (l1'+l2+l3') + (l1'+l2'+l3)``.  Dropping ``T``
leaves the magnitudes intact but flips the sign of roughly half the symbols.

Three of the six magnetic numbers are fixed by the others, so the sum runs
over ``(m1, m2, m1')``.
"""

from __future__ import annotations

from functools import lru_cache

import numpy as np

from .numbers import HalfInt, SpinLike, half, triangle
from .symbols import wigner_3j

__all__ = ["wigner_6j_oracle", "threej_table"]


@lru_cache(maxsize=4096)
def threej_table(t1: int, t2: int, t3: int) -> np.ndarray:
    """Float 3-j values for doubled spins, indexed ``[m1 + j1, m2 + j2]``.

    The third magnetic number is ``-m1 - m2``; out-of-range entries are zero.
    """
    table = np.zeros((t1 + 1, t2 + 1))
    if triangle(t1, t2, t3):
        for i in range(t1 + 1):
            tm1 = 2 * i - t1
            for k in range(t2 + 1):
                tm2 = 2 * k - t2
                tm3 = -tm1 - tm2
                if abs(tm3) <= t3:
                    table[i, k] = float(
                        wigner_3j(HalfInt(t1), HalfInt(t2), HalfInt(t3),
                                  HalfInt(tm1), HalfInt(tm2), HalfInt(tm3))
                    )
    table.flags.writeable = False
    return table


def _lookup(table: np.ndarray, tj_a: int, tm_a: np.ndarray, tj_b: int, tm_b: np.ndarray) -> np.ndarray:
    ia = (tm_a + tj_a) // 2
    ib = (tm_b + tj_b) // 2
    ok = (np.abs(tm_a) <= tj_a) & (np.abs(tm_b) <= tj_b)
    out = np.zeros(tm_a.shape)
    out[ok] = table[ia[ok], ib[ok]]
    return out


def wigner_6j_oracle(
    a: SpinLike, b: SpinLike, c: SpinLike, d: SpinLike, e: SpinLike, f: SpinLike
) -> float:
    """6-j symbol ``{a b c; d e f}`` by summing products of four 3-j symbols."""
    l1, l2, l3, L1, L2, L3 = (half(x).two_j for x in (a, b, c, d, e, f))
    if min(l1, l2, l3, L1, L2, L3) < 0:
        raise ValueError("negative spin in 6-j arguments")
    triads = ((l1, l2, l3), (l1, L2, L3), (L1, l2, L3), (L1, L2, l3))
    if not all(triangle(*t) for t in triads):
        return 0.0

    # doubled magnetic numbers on a (m1, m2, m1') grid
    m1, m2, M1 = np.meshgrid(
        np.arange(-l1, l1 + 1, 2),
        np.arange(-l2, l2 + 1, 2),
        np.arange(-L1, L1 + 1, 2),
        indexing="ij",
    )
    m3 = -m1 - m2
    M3 = M1 + m2
    M2 = m1 + M3

    A = _lookup(threej_table(l1, l2, l3), l1, m1, l2, m2)
    B = _lookup(threej_table(l1, L2, L3), l1, -m1, L2, M2)
    C = _lookup(threej_table(L1, l2, L3), L1, -M1, l2, -m2)
    D = _lookup(threej_table(L1, L2, l3), L1, M1, L2, -M2)
    valid = (np.abs(m3) <= l3) & (np.abs(M2) <= L2) & (np.abs(M3) <= L3)

    correction = (l1 + L2 + L3) + (L1 + l2 + L3) + (L1 + L2 + l3)
    # every summand of the exponent is doubled; the total is even
    exponent = ((M1 - L1) + (M2 - L2) + (M3 - L3) + correction) // 2
    sign = np.where(exponent % 2 == 0, 1.0, -1.0)
    terms = np.where(valid, sign * A * B * C * D, 0.0)
    return float(np.sum(terms))
