# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled versions of the hot kernels (see ``_kernels_py`` for the reference).

All arithmetic is on ``long long`` with moduli below 2**31, so products of two
reduced residues never overflow.
"""

from libc.stdlib cimport malloc, free, calloc
from libc.string cimport memcpy

ctypedef long long i64

MAX_MODULUS = 1 << 31


cdef inline i64 _mod(i64 x, i64 n) nogil:
    x %= n
    if x < 0:
        x += n
    return x


cdef i64 _inv(i64 a, i64 n):
    cdef i64 t = 0, newt = 1, r = n, newr = _mod(a, n), q, tmp
    while newr != 0:
        q = r // newr
        tmp = t - q * newt
        t = newt
        newt = tmp
        tmp = r - q * newr
        r = newr
        newr = tmp
    if r != 1:
        raise ZeroDivisionError("not a unit")
    return _mod(t, n)


cdef inline int _val(i64 x, i64 p, int l) nogil:
    cdef int v = 0
    if x == 0:
        return l
    while x % p == 0:
        x //= p
        v += 1
    return v


cdef inline bint _nonzero(i64* r, int n) nogil:
    cdef int k
    for k in range(n):
        if r[k] != 0:
            return True
    return False


def howell_form(rows, i64 p, int l):
    cdef i64 N = 1
    cdef int k
    for k in range(l):
        N *= p
    if N >= MAX_MODULUS:
        from deformary import _kernels_py
        return _kernels_py.howell_form(rows, p, l)
    if not rows:
        return []
    cdef int ncols = len(rows[0])
    cdef int nrows = len(rows)
    # capacity: every pivot may append one annihilator row
    cdef int cap = nrows + ncols + 1
    cdef i64* pend = <i64*> calloc(<size_t> cap * max(ncols, 1), sizeof(i64))
    cdef i64* outbuf = <i64*> calloc(<size_t> (ncols + 1) * max(ncols, 1), sizeof(i64))
    cdef i64* tmp = <i64*> malloc(sizeof(i64) * max(ncols, 1))
    if pend == NULL or outbuf == NULL or tmp == NULL:
        free(pend); free(outbuf); free(tmp)
        raise MemoryError()
    cdef int npend = 0, nout = 0, i, j, col, best, bestv, v
    cdef i64 x, pk, u, uinv, q, ann
    cdef i64* r
    cdef i64* piv
    try:
        for row in rows:
            r = pend + <size_t> npend * ncols
            for k in range(ncols):
                r[k] = _mod(row[k], N)
            if _nonzero(r, ncols):
                npend += 1
        for col in range(ncols):
            best = -1
            bestv = l
            for i in range(npend):
                x = pend[<size_t> i * ncols + col]
                if x != 0:
                    v = _val(x, p, l)
                    if v < bestv:
                        bestv = v
                        best = i
                        if v == 0:
                            break
            if best < 0:
                continue
            # move pivot row into tmp, close the gap
            memcpy(tmp, pend + <size_t> best * ncols, sizeof(i64) * ncols)
            for i in range(best, npend - 1):
                memcpy(pend + <size_t> i * ncols, pend + <size_t> (i + 1) * ncols, sizeof(i64) * ncols)
            npend -= 1
            pk = 1
            for k in range(bestv):
                pk *= p
            u = tmp[col] // pk
            uinv = _inv(u, N)
            for k in range(ncols):
                tmp[k] = (tmp[k] * uinv) % N
            j = 0
            for i in range(npend):
                r = pend + <size_t> i * ncols
                x = r[col]
                if x != 0:
                    q = x // pk
                    for k in range(ncols):
                        r[k] = _mod(r[k] - q * tmp[k], N)
                if _nonzero(r, ncols):
                    if j != i:
                        memcpy(pend + <size_t> j * ncols, r, sizeof(i64) * ncols)
                    j += 1
            npend = j
            if bestv > 0:
                ann = 1
                for k in range(l - bestv):
                    ann *= p
                r = pend + <size_t> npend * ncols
                for k in range(ncols):
                    r[k] = (tmp[k] * ann) % N
                if _nonzero(r, ncols):
                    npend += 1
            for i in range(nout):
                r = outbuf + <size_t> i * ncols
                x = r[col]
                if x >= pk:
                    q = x // pk
                    for k in range(ncols):
                        r[k] = _mod(r[k] - q * tmp[k], N)
            memcpy(outbuf + <size_t> nout * ncols, tmp, sizeof(i64) * ncols)
            nout += 1
        result = []
        for i in range(nout):
            result.append([outbuf[<size_t> i * ncols + k] for k in range(ncols)])
        return result
    finally:
        free(pend)
        free(outbuf)
        free(tmp)


def fl_orbit_sizes(xm, i64 p, int l):
    cdef i64 N = 1, m = 1
    cdef int k
    for k in range(l):
        N *= p
    m = N // p
    if N >= MAX_MODULUS:
        from deformary import _kernels_py
        return _kernels_py.fl_orbit_sizes(xm, p, l)
    cdef i64 x00 = _mod(xm[0], p), x01 = _mod(xm[1], p), x10 = _mod(xm[2], p), x11 = _mod(xm[3], p)
    cdef i64 nlift = m * m * m * m
    cdef i64 ng = m * m * m
    cdef unsigned char* seen = <unsigned char*> calloc(<size_t> nlift, 1)
    cdef i64* grp = <i64*> malloc(sizeof(i64) * 6 * <size_t> ng)
    if seen == NULL or grp == NULL:
        free(seen); free(grp)
        raise MemoryError()
    cdef i64 s00, s11, s10, a, c, d, ai, di, ci, g = 0
    cdef i64 idx, rest, z0, z1, z2, z3, y00, y01, y10, y11
    cdef i64 t00, t01, t10, t11, w00, w01, w10, w11, jj, size
    cdef i64* gp
    sizes = []
    try:
        for s00 in range(m):
            a = (1 + p * s00) % N
            ai = _inv(a, N)
            for s11 in range(m):
                d = (1 + p * s11) % N
                di = _inv(d, N)
                for s10 in range(m):
                    c = (p * s10) % N
                    ci = _mod(-((c * ai) % N) * di, N)
                    gp = grp + 6 * g
                    gp[0] = a; gp[1] = c; gp[2] = d; gp[3] = ai; gp[4] = ci; gp[5] = di
                    g += 1
        for idx in range(nlift):
            if seen[idx]:
                continue
            z0 = idx % m
            rest = idx // m
            z1 = rest % m
            rest //= m
            z2 = rest % m
            z3 = rest // m
            y00 = x00 + p * z0
            y01 = x01 + p * z1
            y10 = x10 + p * z2
            y11 = x11 + p * z3
            size = 0
            with nogil:
                for g in range(ng):
                    gp = grp + 6 * g
                    a = gp[0]; c = gp[1]; d = gp[2]; ai = gp[3]; ci = gp[4]; di = gp[5]
                    t00 = (a * y00) % N
                    t01 = (a * y01) % N
                    t10 = (c * y00 + d * y10) % N
                    t11 = (c * y01 + d * y11) % N
                    w00 = (t00 * ai + t01 * ci) % N
                    w01 = (t01 * di) % N
                    w10 = (t10 * ai + t11 * ci) % N
                    w11 = (t11 * di) % N
                    jj = ((w00 - x00) // p) + m * (((w01 - x01) // p) + m * (((w10 - x10) // p) + m * ((w11 - x11) // p)))
                    if not seen[jj]:
                        seen[jj] = 1
                        size += 1
            sizes.append(size)
        return sizes
    finally:
        free(seen)
        free(grp)
