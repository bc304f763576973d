"""Independent brute-force oracles used across the test suite.

Everything here is deliberately naive and self-contained (plain Python
ints and lists, no library imports beyond numpy for array plumbing) so
that the oracles cannot share a bug with the code paths they check.
"""

from __future__ import annotations

import numpy as np

# ---------------------------------------------------------------------------
# dense matrices as list-of-list of python ints, classic residues


def naive_gemm(a, b, p):
    """Triple-loop product mod p on lists of lists."""
    m, k = len(a), len(a[0]) if a else 0
    n = len(b[0]) if b else 0
    out = [[0] * n for _ in range(m)]
    for i in range(m):
        for j in range(n):
            s = 0
            for l in range(k):
                s += a[i][l] * b[l][j]
            out[i][j] = s % p
    return out


def naive_matvec(a, v, p):
    return [sum(ai * vi for ai, vi in zip(row, v)) % p for row in a]


def naive_rank(a, p):
    """Row reduction mod p, fresh implementation."""
    rows = [[x % p for x in row] for row in a]
    m = len(rows)
    n = len(rows[0]) if m else 0
    rank = 0
    for col in range(n):
        piv = None
        for i in range(rank, m):
            if rows[i][col] % p:
                piv = i
                break
        if piv is None:
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        inv = pow(rows[rank][col], p - 2, p)
        for i in range(m):
            if i != rank and rows[i][col]:
                f = rows[i][col] * inv % p
                rows[i] = [(x - f * y) % p for x, y in zip(rows[i], rows[rank])]
        rank += 1
        if rank == m:
            break
    return rank


def laplace_det(a, p):
    """Cofactor expansion mod p (n <= 6)."""
    n = len(a)
    if n == 0:
        return 1
    if n == 1:
        return a[0][0] % p
    det = 0
    for j in range(n):
        if a[0][j] % p == 0:
            continue
        minor = [row[:j] + row[j + 1 :] for row in a[1:]]
        term = a[0][j] * laplace_det(minor, p)
        det = (det - term if j % 2 else det + term) % p
    return det % p


# ---------------------------------------------------------------------------
# polynomials as coefficient lists (low degree first), classic residues


def ptrim(f):
    while f and f[-1] == 0:
        f.pop()
    return f


def padd(f, g, p):
    out = [0] * max(len(f), len(g))
    for i, c in enumerate(f):
        out[i] = c
    for i, c in enumerate(g):
        out[i] = (out[i] + c) % p
    return ptrim(out)


def psub(f, g, p):
    out = [0] * max(len(f), len(g))
    for i, c in enumerate(f):
        out[i] = c
    for i, c in enumerate(g):
        out[i] = (out[i] - c) % p
    return ptrim(out)


def pmul(f, g, p):
    if not f or not g:
        return []
    out = [0] * (len(f) + len(g) - 1)
    for i, a in enumerate(f):
        if a:
            for j, b in enumerate(g):
                out[i + j] = (out[i + j] + a * b) % p
    return ptrim(out)


def pdivmod(f, g, p):
    f = [c % p for c in f]
    g = ptrim([c % p for c in g])
    if not g:
        raise ZeroDivisionError
    inv = pow(g[-1], p - 2, p)
    rem = list(f)
    q = [0] * max(0, len(rem) - len(g) + 1)
    for i in range(len(rem) - 1, len(g) - 2, -1):
        c = rem[i] % p
        if c:
            coef = c * inv % p
            q[i - len(g) + 1] = coef
            for j, gc in enumerate(g):
                rem[i - len(g) + 1 + j] = (rem[i - len(g) + 1 + j] - coef * gc) % p
    return ptrim(q), ptrim(rem[: len(g) - 1])


def pgcd(f, g, p):
    f, g = ptrim([c % p for c in f]), ptrim([c % p for c in g])
    while g:
        f, g = g, pdivmod(f, g, p)[1]
    if f:
        inv = pow(f[-1], p - 2, p)
        f = [c * inv % p for c in f]
    return f


def charpoly_cofactor(a, p):
    """det(xI - A) by cofactor expansion over the polynomial ring (n <= 5)."""
    n = len(a)
    grid = [[[(-a[i][j]) % p] for j in range(n)] for i in range(n)]
    for i in range(n):
        grid[i][i] = ptrim([(-a[i][i]) % p, 1])

    def pdet(g):
        k = len(g)
        if k == 0:
            return [1]
        if k == 1:
            return g[0][0]
        acc = []
        for j in range(k):
            if not g[0][j]:
                continue
            minor = [row[:j] + row[j + 1 :] for row in g[1:]]
            term = pmul(g[0][j], pdet(minor), p)
            acc = padd(acc, term, p) if j % 2 == 0 else psub(acc, term, p)
        return acc

    return pdet(grid)


# brute-force distinct irreducible factor degrees, deg(f) <= 8 ---------------

_IRRED_CACHE: dict[tuple[int, int], list[list[int]]] = {}


def _irreducibles(p, d):
    """All monic irreducibles of degree d over GF(p), by trial division."""
    key = (p, d)
    if key in _IRRED_CACHE:
        return _IRRED_CACHE[key]
    smaller = []
    for dd in range(1, d // 2 + 1):
        smaller.extend(_irreducibles(p, dd))
    out = []
    for idx in range(p**d):
        coeffs = []
        v = idx
        for _ in range(d):
            v, r = divmod(v, p)
            coeffs.append(r)
        coeffs.append(1)
        if all(pdivmod(coeffs, s, p)[1] for s in smaller):
            out.append(coeffs)
    _IRRED_CACHE[key] = out
    return out


def brute_factor_degrees(f, p):
    """Degrees of distinct monic irreducible factors of f (deg <= 8)."""
    rem = ptrim([c % p for c in f])
    assert rem, "zero polynomial"
    degs = []
    d = 1
    while len(rem) - 1 > 0:
        if 2 * d > len(rem) - 1:
            degs.append(len(rem) - 1)
            break
        for cand in _irreducibles(p, d):
            if len(rem) - 1 < d:
                break
            divided = False
            while True:
                q, r = pdivmod(rem, cand, p)
                if r:
                    break
                rem = q
                divided = True
            if divided:
                degs.append(d)
        d += 1
    return sorted(degs)


# ---------------------------------------------------------------------------
# GF(2)/GF(3) oracles


def gf2_naive_mul(a, b):
    """0/1 numpy arrays -> product mod 2."""
    return (a.astype(np.int64) @ b.astype(np.int64)) % 2


MOD3_ADD = {(x, y): (x + y) % 3 for x in range(3) for y in range(3)}
MOD3_SUB = {(x, y): (x - y) % 3 for x in range(3) for y in range(3)}


def redq_digit_oracle(digits, p, q):
    """Per-digit reduction: the REDQ contract, computed independently."""
    mu = [d % p for d in digits]
    rho = 0
    for d in reversed(mu):
        rho = rho * q + d
    return rho, mu


# ---------------------------------------------------------------------------
# Smith form of xI - A over GF(p)[x]  (tiny n): invariant factors


def smith_invariant_factors(a, p):
    """Invariant factors s_1 | s_2 | ... of A via the Smith normal form of
    xI - A, largest degree first (s_1 = minimal polynomial).  n <= 6."""
    n = len(a)
    m = [[ptrim([(-a[i][j]) % p, 1 if i == j else 0]) for j in range(n)] for i in range(n)]

    diag = []
    r = 0
    while r < n:
        # nonzero entry of least degree in the trailing block -> pivot
        best = None
        for i in range(r, n):
            for j in range(r, n):
                if m[i][j] and (best is None or len(m[i][j]) < len(m[best[0]][best[1]])):
                    best = (i, j)
        assert best is not None, "xI - A is nonsingular"
        bi, bj = best
        m[r], m[bi] = m[bi], m[r]
        for row in m:
            row[r], row[bj] = row[bj], row[r]
        clean = True
        for i in range(r + 1, n):
            if m[i][r]:
                q, _ = pdivmod(m[i][r], m[r][r], p)
                for j in range(r, n):
                    m[i][j] = psub(m[i][j], pmul(q, m[r][j], p), p)
                if m[i][r]:
                    clean = False
        for j in range(r + 1, n):
            if m[r][j]:
                q, _ = pdivmod(m[r][j], m[r][r], p)
                for i in range(r, n):
                    m[i][j] = psub(m[i][j], pmul(q, m[i][r], p), p)
                if m[r][j]:
                    clean = False
        if not clean:
            continue  # redo the pivot with the reduced entries
        # divisibility: m[r][r] must divide every trailing entry
        ok = True
        for i in range(r + 1, n):
            for j in range(r + 1, n):
                if m[i][j] and pdivmod(m[i][j], m[r][r], p)[1]:
                    for jj in range(r, n):
                        m[r][jj] = padd(m[r][jj], m[i][jj], p)
                    ok = False
                    break
            if not ok:
                break
        if not ok:
            continue
        diag.append(m[r][r])
        r += 1
    # monic, drop unit factors; invariant factors ordered largest first
    invs = []
    for f in diag:
        if len(f) <= 1:
            continue
        lead_inv = pow(f[-1], p - 2, p)
        invs.append([c * lead_inv % p for c in f])
    invs.sort(key=len, reverse=True)
    return invs
