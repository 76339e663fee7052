"""Pure-Python versions of the hot kernels.

Kept line-for-line parallel with ``_kernels.pyx``; the two are checked against
each other in the test suite and timed against each other in ``benchmarks/``.
"""


def _valuation(x, p, l):
    if x == 0:
        return l
    v = 0
    while x % p == 0:
        x //= p
        v += 1
    return v


def howell_form(rows, p, l):
    """Howell normal form of an integer matrix over Z/p^l.

    ``rows`` is a list of equal-length integer lists. Returns the nonzero rows of
    the form, ordered by pivot column, each pivot normalized to a power of p and
    entries above each pivot reduced modulo that pivot.
    """
    N = p**l
    if not rows:
        return []
    ncols = len(rows[0])
    pending = [[x % N for x in r] for r in rows]
    pending = [r for r in pending if any(r)]
    out = []
    pivcols = []
    for col in range(ncols):
        best = -1
        bestv = l
        for i, r in enumerate(pending):
            x = r[col]
            if x:
                v = _valuation(x, p, l)
                if v < bestv:
                    bestv, best = v, i
                    if v == 0:
                        break
        if best < 0:
            continue
        piv = pending.pop(best)
        pk = p**bestv
        u = piv[col] // pk
        uinv = pow(u, -1, N)
        piv = [(x * uinv) % N for x in piv]
        keep = []
        for r in pending:
            x = r[col]
            if x:
                q = x // pk
                r = [(a - q * b) % N for a, b in zip(r, piv)]
            if any(r):
                keep.append(r)
        if bestv:
            ann = [(x * p ** (l - bestv)) % N for x in piv]
            if any(ann):
                keep.append(ann)
        pending = keep
        # reduce rows above this pivot
        for j, r in enumerate(out):
            x = r[col]
            if x >= pk:
                q = x // pk
                out[j] = [(a - q * b) % N for a, b in zip(r, piv)]
        out.append(piv)
        pivcols.append(col)
    return out


def fl_orbit_sizes(xm, p, l):
    """Orbit sizes of lifts of a 2x2 matrix under lower-triangular conjugation.

    Lifts are X = xm + p*Z over Z/p^l; the group is R = I + p*S with S lower
    triangular, which is the congruence kernel of the filtration-preserving
    matrices for the line spanned by e2. Orbits are listed in order of their
    minimal lift index, which is the canonical representative.
    """
    N = p**l
    m = p ** (l - 1)
    x00, x01, x10, x11 = (v % p for v in xm)
    nlift = m**4
    seen = bytearray(nlift)
    group = []
    for s00 in range(m):
        a = (1 + p * s00) % N
        ainv = pow(a, -1, N)
        for s11 in range(m):
            d = (1 + p * s11) % N
            dinv = pow(d, -1, N)
            for s10 in range(m):
                c = (p * s10) % N
                cinv = (-c * ainv * dinv) % N
                group.append((a, c, d, ainv, cinv, dinv))
    sizes = []
    for idx in range(nlift):
        if seen[idx]:
            continue
        z0, rest = idx % m, idx // m
        z1, rest = rest % m, rest // m
        z2, z3 = rest % m, rest // m
        y00 = x00 + p * z0
        y01 = x01 + p * z1
        y10 = x10 + p * z2
        y11 = x11 + p * z3
        size = 0
        for a, c, d, ai, ci, di in group:
            # R Y with R = [[a,0],[c,d]]
            t00 = a * y00
            t01 = a * y01
            t10 = c * y00 + d * y10
            t11 = c * y01 + d * y11
            # (R Y) R^-1 with R^-1 = [[ai,0],[ci,di]]
            w00 = (t00 * ai + t01 * ci) % N
            w01 = (t01 * di) % N
            w10 = (t10 * ai + t11 * ci) % N
            w11 = (t11 * di) % N
            j = (
                ((w00 - x00) // p)
                + m * (((w01 - x01) // p) + m * (((w10 - x10) // p) + m * ((w11 - x11) // p)))
            )
            if not seen[j]:
                seen[j] = 1
                size += 1
        sizes.append(size)
    return sizes
