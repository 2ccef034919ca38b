"""Pure-Python hot kernels.

These are the reference versions of the routines in ``_kernels.pyx``; both
modules expose the same functions with the same signatures and must return
identical results.  Values are Gaussian integers stored as parallel ``re`` /
``im`` lists of Python ints, so arbitrary precision is preserved.
"""

BACKEND = "python"


def jet_mul(a_re, a_im, b_re, b_im, offsets, js, ks):
    """Truncated product of two dense jets with Gaussian-integer coefficients.

    ``offsets``/``js``/``ks`` is the flattened multiplication table of the jet
    space: for monomial ``i`` the admissible partners are
    ``js[offsets[i]:offsets[i+1]]`` and the product lands in the matching
    entries of ``ks``.
    """
    n = len(a_re)
    out_re = [0] * n
    out_im = [0] * n
    b_real = not any(b_im)
    for i in range(n):
        ar = a_re[i]
        ai = a_im[i]
        if not ar and not ai:
            continue
        lo = offsets[i]
        hi = offsets[i + 1]
        if b_real:
            for p in range(lo, hi):
                br = b_re[js[p]]
                if br:
                    k = ks[p]
                    out_re[k] += ar * br
                    out_im[k] += ai * br
        else:
            for p in range(lo, hi):
                j = js[p]
                br = b_re[j]
                bi = b_im[j]
                if br or bi:
                    k = ks[p]
                    out_re[k] += ar * br - ai * bi
                    out_im[k] += ar * bi + ai * br
    return out_re, out_im


def _gdiv(ar, ai, br, bi):
    # exact division in Z[i]
    n = br * br + bi * bi
    qr, rr = divmod(ar * br + ai * bi, n)
    qi, ri = divmod(ai * br - ar * bi, n)
    if rr or ri:
        raise ArithmeticError("inexact Gaussian-integer division in Bareiss step")
    return qr, qi


def bareiss_rank(re_rows, im_rows):
    """Rank of a Gaussian-integer matrix by fraction-free elimination.

    The input lists are consumed (modified in place).
    """
    m = len(re_rows)
    if m == 0:
        return 0
    ncols = len(re_rows[0])
    R = re_rows
    Im = im_rows
    rank = 0
    pr, pi = 1, 0
    for c in range(ncols):
        if rank == m:
            break
        piv = -1
        for r in range(rank, m):
            if R[r][c] or Im[r][c]:
                piv = r
                break
        if piv < 0:
            continue
        if piv != rank:
            R[piv], R[rank] = R[rank], R[piv]
            Im[piv], Im[rank] = Im[rank], Im[piv]
        Rk = R[rank]
        Ik = Im[rank]
        kr = Rk[c]
        ki = Ik[c]
        for r in range(rank + 1, m):
            Rr = R[r]
            Ir = Im[r]
            xr = Rr[c]
            xi = Ir[c]
            for j in range(c + 1, ncols):
                # M[r][j] = (pivot * M[r][j] - M[r][c] * M[rank][j]) / prev
                yr = Rr[j]
                yi = Ir[j]
                zr = Rk[j]
                zi = Ik[j]
                nr = kr * yr - ki * yi - (xr * zr - xi * zi)
                ni = kr * yi + ki * yr - (xr * zi + xi * zr)
                if nr or ni:
                    if pr == 1 and pi == 0:
                        Rr[j] = nr
                        Ir[j] = ni
                    else:
                        Rr[j], Ir[j] = _gdiv(nr, ni, pr, pi)
                else:
                    Rr[j] = 0
                    Ir[j] = 0
            Rr[c] = 0
            Ir[c] = 0
        pr, pi = kr, ki
        rank += 1
    return rank
