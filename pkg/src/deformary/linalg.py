"""Integer linear algebra over Z/p^l built on the Howell form kernel."""

from __future__ import annotations

from deformary import kernels


def valuation(x: int, p: int, l: int) -> int:
    x %= p**l
    if x == 0:
        return l
    v = 0
    while x % p == 0:
        x //= p
        v += 1
    return v


def howell_form(rows: list[list[int]], p: int, l: int) -> list[list[int]]:
    return kernels.howell_form([list(r) for r in rows], p, l)


def kernel_mod(rows: list[list[int]], ncols: int, p: int, l: int) -> tuple[int, list[list[int]]]:
    """Kernel of x -> A x over Z/p^l for A given by ``rows`` (m x ncols).

    Returns ``(log_p |ker|, generators)``. The generators are in Howell form, so
    the log-cardinality is the sum of ``l - v(pivot)`` over them.
    """
    m = len(rows)
    aug = []
    for j in range(ncols):
        aug.append([rows[i][j] for i in range(m)] + [1 if k == j else 0 for k in range(ncols)])
    if not aug:
        return 0, []
    H = howell_form(aug, p, l)
    gens = []
    logcard = 0
    for r in H:
        if any(r[:m]):
            continue
        g = r[m:]
        gens.append(g)
        piv = next(x for x in g if x)
        logcard += l - valuation(piv, p, l)
    return logcard, gens


def solve_mod(rows: list[list[int]], rhs: list[int], ncols: int, p: int, l: int) -> list[int] | None:
    """One solution of A x = b over Z/p^l, or None when the system is inconsistent."""
    N = p**l
    m = len(rows)
    # unknowns (t, x); constraint -b t + A x = 0 with t = 1
    ext = [[(-rhs[i]) % N] + list(rows[i]) for i in range(m)]
    _, gens = kernel_mod(ext, ncols + 1, p, l)
    for g in gens:
        if g[0] % N:
            if g[0] % p == 0:
                return None
            inv = pow(g[0], -1, N)
            return [(x * inv) % N for x in g[1:]]
        break
    return None


def rank_mod_p(rows: list[list[int]], p: int) -> int:
    return len(howell_form(rows, p, 1)) if rows and rows[0] else 0


def nullspace_mod_p(rows: list[list[int]], ncols: int, p: int) -> list[list[int]]:
    """Basis of the right null space over F_p (one vector per free direction)."""
    return kernel_mod(rows, ncols, p, 1)[1]


def sparse_rank_mod_p(rows, p: int) -> int:
    """Rank over F_p of rows given as ``{column: value}`` dicts (streamed, eliminated on arrival)."""
    pivots: dict[int, dict[int, int]] = {}
    for row in rows:
        r = {c: v % p for c, v in row.items() if v % p}
        while r:
            c = min(r)
            piv = pivots.get(c)
            if piv is None:
                inv = pow(r[c], -1, p)
                pivots[c] = {k: (v * inv) % p for k, v in r.items()}
                break
            f = r[c]
            for k, v in piv.items():
                x = (r.get(k, 0) - f * v) % p
                if x:
                    r[k] = x
                else:
                    r.pop(k, None)
    return len(pivots)
