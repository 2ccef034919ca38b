"""Exact rank over Q(i)."""
from __future__ import annotations

from typing import Sequence

from . import _accel
from .arith import GaussianRational, gaussian_lcm_denominator, to_gaussian


def _integer_row(row: Sequence[GaussianRational]) -> tuple[list, list]:
    d = gaussian_lcm_denominator(row)
    re = []
    im = []
    for v in row:
        re.append(v.re.numerator * (d // v.re.denominator))
        im.append(v.im.numerator * (d // v.im.denominator))
    return re, im


def exact_rank(rows: Sequence[Sequence]) -> int:
    """Rank of a matrix with entries in Q(i).

    Each row is scaled to Gaussian integers (row scaling keeps the rank) and
    reduced by fraction-free elimination in the active kernel backend.
    """
    re_rows = []
    im_rows = []
    width = None
    for row in rows:
        row = [to_gaussian(v) for v in row]
        if width is None:
            width = len(row)
        elif len(row) != width:
            raise ValueError("ragged matrix")
        if not any(row):
            continue
        r, i = _integer_row(row)
        re_rows.append(r)
        im_rows.append(i)
    if not re_rows or not width:
        return 0
    return _accel.bareiss_rank(re_rows, im_rows)


def fraction_rank(rows: Sequence[Sequence]) -> int:
    """Textbook Gauss-Jordan rank with GaussianRational arithmetic.

    Slow; kept as the independent oracle for :func:`exact_rank`.
    """
    m = [[to_gaussian(v) for v in row] for row in rows]
    if not m:
        return 0
    ncols = len(m[0])
    rank = 0
    for c in range(ncols):
        piv = next((r for r in range(rank, len(m)) if m[r][c]), None)
        if piv is None:
            continue
        m[rank], m[piv] = m[piv], m[rank]
        inv = m[rank][c].inverse()
        m[rank] = [v * inv for v in m[rank]]
        for r in range(len(m)):
            if r != rank and m[r][c]:
                f = m[r][c]
                m[r] = [a - f * b for a, b in zip(m[r], m[rank])]
        rank += 1
    return rank
