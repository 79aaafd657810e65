"""Mod-p route to the Eisenstein multiplicity at large prime level.

The exact integer pipeline keeps every lattice saturated, which is the
right default at small level but needlessly slow once N has four
digits: the Smith normal form over Z of an (N/3) x (N/2) relation
matrix dominates everything.  For the multiplicity g_p alone nothing
integral is required — the torsion of the Manin-symbol quotient is
supported at 2 and 3 while p >= 5, so reducing the presentation mod p
first and doing plain linear algebra over F_p yields the same number.

All arithmetic runs through float64 BLAS; each product is bounded in
advance by p^2 times a matrix dimension, far below 2^53, so nothing
ever rounds.  The Eisenstein generators are applied in increasing
Hecke index, cutting the candidate space down after each one, so the
large Merel families near the Sturm bound only ever act on a handful
of surviving vectors.
"""

import numpy as np

from .exact_linalg import is_prime, kronecker, primes_up_to
from .modsym import merel_matrices

_S = ((0, -1), (1, 0))
_T = ((0, -1), (1, -1))


def _rref_mod_p(a, p, block=128):
    """Reduced row echelon form over F_p, processing pivot rows in
    panels so the bulk elimination happens in matrix products.

    Returns (rows, pivot_cols): `rows` has a unit entry at its own
    pivot column and zeros at every other pivot column.
    """
    a = np.asarray(a, dtype=np.float64) % p
    inv = [0] + [pow(x, -1, p) for x in range(1, p)]
    done = np.empty((0, a.shape[1]))
    pcols = []
    for lo in range(0, a.shape[0], block):
        panel = a[lo:lo + block].copy()
        if pcols:
            panel = (panel - panel[:, pcols] @ done) % p
        new_cols = []
        r = 0
        j = 0
        while j < panel.shape[1] and r < panel.shape[0]:
            col = panel[r:, j]
            nz = np.flatnonzero(col)
            if nz.size == 0:
                j += 1
                continue
            i = r + nz[0]
            if i != r:
                panel[[r, i]] = panel[[i, r]]
            panel[r] = panel[r] * inv[int(panel[r, j])] % p
            factor = panel[:, j].copy()
            factor[r] = 0
            panel -= np.outer(factor, panel[r])
            panel %= p
            new_cols.append(j)
            r += 1
            j += 1
        if r:
            new = panel[:r]
            if pcols:
                done = (done - done[:, new_cols] @ new) % p
            done = np.vstack([done, new])
            pcols += new_cols
    # canonical form: rows ordered by pivot column
    order = np.argsort(pcols) if pcols else []
    return done[order], [pcols[i] for i in order]


def _left_nullspace_mod_p(m, p):
    """Basis rows of {x : x m = 0 over F_p}, carrying an identity minor
    at the returned column list so restrictions read off directly."""
    rr, pc = _rref_mod_p(np.asarray(m).T, p)
    n = m.shape[0]
    pset = set(pc)
    free = [j for j in range(n) if j not in pset]
    basis = np.zeros((len(free), n))
    basis[np.arange(len(free)), free] = 1
    if pc:
        basis[:, pc] = (-rr[:, free].T) % p
    return basis, free


def g_p_dimension_modp(N, p):
    """dim over F_p of the joint generalized kernel of the Eisenstein
    generators on the plus quotient — the same number the exact route
    computes, at a fraction of the cost for levels in the thousands."""
    if not is_prime(N) or N < 5:
        raise ValueError("level must be a prime >= 5")
    if not is_prime(p) or p < 5:
        raise ValueError("need a prime p >= 5")
    if (N - 1) % p or ((N - 1) // p) % p == 0:
        raise ValueError("hypothesis p || N-1 violated")
    assert p * p * (N + 2) < 2**53 and p * 4_000_000 < 2**53

    n = N + 1
    inv = np.zeros(N, dtype=np.int64)
    inv[1:] = [pow(u, N - 2, N) for u in range(1, N)]
    cs = np.concatenate(([0], np.ones(N, dtype=np.int64)))
    ds = np.concatenate(([1], np.arange(N, dtype=np.int64)))

    def perm(g):
        u = (cs * g[0][0] + ds * g[1][0]) % N
        v = (cs * g[0][1] + ds * g[1][1]) % N
        return np.where(u == 0, 0, 1 + v * inv[u] % N)

    sigma, tau = perm(_S), perm(_T)

    # fold the two-term relations exactly as the integral construction
    var_of = [-1] * n
    sign_of = [0] * n
    reps = []
    sfixed = []
    for i in range(n):
        if var_of[i] >= 0:
            continue
        j = int(sigma[i])
        var_of[i] = len(reps)
        sign_of[i] = 1
        if j == i:
            sfixed.append(len(reps))
        else:
            var_of[j] = len(reps)
            sign_of[j] = -1
        reps.append(i)
    nvars = len(reps)

    # one relation row per tau-orbit, plus 2x = 0 for self-paired symbols
    tri = []
    seen = [False] * n
    nrel = 0
    for i in range(n):
        if seen[i]:
            continue
        j = i
        while True:
            seen[j] = True
            tri.append((nrel, var_of[j], sign_of[j]))
            j = int(tau[j])
            if j == i:
                break
        nrel += 1
    for v in sfixed:
        tri.append((nrel, v, 2))
        nrel += 1
    rel = np.zeros((nrel, nvars))
    rr, cc, vv = (np.array(t) for t in zip(*tri))
    np.add.at(rel, (rr, cc), vv)

    rref_rows, pivot_cols = _rref_mod_p(rel % p, p)
    pset = set(pivot_cols)
    free = [j for j in range(nvars) if j not in pset]
    k = len(free)
    nu2 = 1 + kronecker(-4, N)
    nu3 = 1 + kronecker(-3, N)
    genus = (N + 1 - 3 * nu2 - 4 * nu3) // 12
    assert k == 2 * genus + 1  # p >= 5 kills exactly the torsion

    red_vars = np.zeros((nvars, k))
    red_vars[np.array(free), np.arange(k)] = 1
    if pivot_cols:
        red_vars[np.array(pivot_cols)] = (-rref_rows[:, free]) % p
    red_p = red_vars[np.array(var_of)] * np.array(sign_of, dtype=np.float64)[:, None] % p
    coord_gen = np.array([reps[f] for f in free])  # one generator per coordinate
    assert (red_p[coord_gen] == np.eye(k)).all()

    # plus quotient: boundary zero and fixed by the star involution
    bd = np.zeros((n, 2))
    bd[np.arange(n), (cs % N == 0).astype(int)] += 1
    bd[np.arange(n), (ds % N == 0).astype(int)] -= 1
    u_iota = (-cs) % N
    iota = np.where(u_iota == 0, 0, 1 + ds * inv[u_iota] % N)
    cond = np.hstack([bd[coord_gen] % p, (red_p[iota[coord_gen]] - np.eye(k)) % p])
    vecs, vcols = _left_nullspace_mod_p(cond, p)
    assert vecs.shape[0] == genus

    crep = cs[coord_gen]
    drep = ds[coord_gen]

    def apply_family(rows, fam, drop):
        """Images of quotient row vectors under a Merel-family operator."""
        m = rows.shape[0]
        z = np.zeros((m, n))
        step = max(1, 2_000_000 // k)
        for lo in range(0, len(fam), step):
            a, b, c2, d2 = (fam[lo:lo + step, t][:, None] for t in range(4))
            u = (crep[None, :] * a + drep[None, :] * c2) % N
            v = (crep[None, :] * b + drep[None, :] * d2) % N
            tgt = np.where(u == 0, 0, 1 + v * inv[u] % N)
            if drop:
                keep = (u != 0) | (v != 0)  # (0:0) images die; only for U_N
                tgt = tgt[keep]
                for i in range(m):
                    w = np.broadcast_to(rows[i], keep.shape)[keep]
                    z[i] += np.bincount(tgt, weights=w, minlength=n)
            else:
                flat = tgt.ravel()
                for i in range(m):
                    w = np.broadcast_to(rows[i], tgt.shape).ravel()
                    z[i] += np.bincount(flat, weights=w, minlength=n)
            z %= p
        return z @ red_p % p

    def cut(rows, cols, images, eigen):
        """Shrink span(rows) to the generalized (op - eigen)-kernel."""
        m = rows.shape[0]
        restr = images[:, cols]
        assert ((restr @ rows - images) % p == 0).all()
        q = (restr - eigen % p * np.eye(m)) % p
        e = 1
        while e < m:
            q = q @ q % p
            e *= 2
        ker, _ = _left_nullspace_mod_p(q, p)
        if ker.shape[0] == m:
            return rows, cols
        return _rref_mod_p(ker @ rows % p, p)

    sturm = -(-(N + 1) // 6)
    first = True
    for ell in primes_up_to(sturm) + [N]:
        if not vecs.shape[0]:
            break
        eigen = 1 if ell == N else ell + 1
        fam = merel_matrices(ell)
        if first:
            # dense k x k matrix once, while the candidate space is large
            tm = np.zeros((k, k))
            for a, b, c2, d2 in fam:
                u = (crep * int(a) + drep * int(c2)) % N
                v = (crep * int(b) + drep * int(d2)) % N
                tm += red_p[np.where(u == 0, 0, 1 + v * inv[u] % N)]
            images = vecs @ (tm % p) % p
            first = False
        else:
            images = apply_family(vecs, fam, drop=ell == N)
        vecs, vcols = cut(vecs, vcols, images, eigen)
    return vecs.shape[0]
