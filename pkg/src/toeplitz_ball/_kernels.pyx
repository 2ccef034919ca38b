# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled twins of the kernels in ``_kernels_py``.

Coefficients stay Python ints (arbitrary precision); the gain comes from
C-level loops and index arithmetic over the multiplication table.
"""

BACKEND = "cython"


def jet_mul(list a_re, list a_im, list b_re, list b_im, offsets, js, ks):
    cdef Py_ssize_t n = len(a_re)
    cdef const int[:] off = offsets
    cdef const int[:] jv = js
    cdef const int[:] kv = ks
    cdef Py_ssize_t i, p, lo, hi, j, k
    cdef list out_re = [0] * n
    cdef list out_im = [0] * n
    cdef object ar, ai, br, bi
    cdef bint b_real = not any(b_im)
    for i in range(n):
        ar = a_re[i]
        ai = a_im[i]
        if not ar and not ai:
            continue
        lo = off[i]
        hi = off[i + 1]
        if b_real:
            for p in range(lo, hi):
                br = b_re[jv[p]]
                if br:
                    k = kv[p]
                    out_re[k] = out_re[k] + ar * br
                    out_im[k] = out_im[k] + ai * br
        else:
            for p in range(lo, hi):
                j = jv[p]
                br = b_re[j]
                bi = b_im[j]
                if br or bi:
                    k = kv[p]
                    out_re[k] = out_re[k] + (ar * br - ai * bi)
                    out_im[k] = out_im[k] + (ar * bi + ai * br)
    return out_re, out_im


cdef tuple _gdiv(object ar, object ai, object br, object bi):
    cdef object n = br * br + bi * bi
    qr, rr = divmod(ar * br + ai * bi, n)
    qi, ri = divmod(ai * br - ar * bi, n)
    if rr or ri:
        raise ArithmeticError("inexact Gaussian-integer division in Bareiss step")
    return qr, qi


def bareiss_rank(list re_rows, list im_rows):
    cdef Py_ssize_t m = len(re_rows)
    if m == 0:
        return 0
    cdef Py_ssize_t ncols = len(re_rows[0])
    cdef Py_ssize_t rank = 0, c, r, j, piv
    cdef object pr = 1, pi = 0, kr, ki, xr, xi, yr, yi, zr, zi, nr, ni
    cdef list Rk, Ik, Rr, Ir
    cdef bint unit_prev
    for c in range(ncols):
        if rank == m:
            break
        piv = -1
        for r in range(rank, m):
            if re_rows[r][c] or im_rows[r][c]:
                piv = r
                break
        if piv < 0:
            continue
        if piv != rank:
            re_rows[piv], re_rows[rank] = re_rows[rank], re_rows[piv]
            im_rows[piv], im_rows[rank] = im_rows[rank], im_rows[piv]
        Rk = re_rows[rank]
        Ik = im_rows[rank]
        kr = Rk[c]
        ki = Ik[c]
        unit_prev = (pr == 1 and pi == 0)
        for r in range(rank + 1, m):
            Rr = re_rows[r]
            Ir = im_rows[r]
            xr = Rr[c]
            xi = Ir[c]
            for j in range(c + 1, ncols):
                yr = Rr[j]
                yi = Ir[j]
                zr = Rk[j]
                zi = Ik[j]
                nr = kr * yr - ki * yi - (xr * zr - xi * zi)
                ni = kr * yi + ki * yr - (xr * zi + xi * zr)
                if nr or ni:
                    if unit_prev:
                        Rr[j] = nr
                        Ir[j] = ni
                    else:
                        Rr[j], Ir[j] = _gdiv(nr, ni, pr, pi)
                else:
                    Rr[j] = 0
                    Ir[j] = 0
            Rr[c] = 0
            Ir[c] = 0
        pr = kr
        pi = ki
        rank += 1
    return rank
