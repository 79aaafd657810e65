"""Weight-2 modular symbols for Gamma_0(N), N prime, over Z.

The presentation is the classical one on Manin symbols indexed by
P^1(Z/NZ): generators x_(c:d) subject to x + xS = 0 and
x + xT + xT^2 = 0, with S = [[0,-1],[1,0]], T = [[0,-1],[1,-1]] acting
on the right.  The two-term relations are folded away by hand (they
pair up symbols, possibly killing self-paired ones into torsion), the
remaining three-term relations go through an exact Smith normal form,
and the free quotient is the relative homology lattice M_rel of rank
2g + 1.  All reductions and sections are integral matrices, so every
later computation (boundary, star involution, Hecke action, theta
elements) is exact.

Hecke operators use Merel's determinant-l family of upper-ish
triangular-ish matrices {(a,b;c,d): a > b >= 0, d > c >= 0, ad-bc = l};
for l = N the same family computes U_N once the symbols that die on
P^1 (image (0:0)) are dropped.  Products with the integer reduction
and section matrices go through int64 matrix multiplication when a
proven bound certifies no overflow, with a big-integer fallback.
"""

from dataclasses import dataclass
from math import gcd

import numpy as np

from .exact_linalg import (
    IntMatrix,
    is_prime,
    left_kernel,
    snf,
    solve_left,
    unimodular_inverse,
)
from .quadfield import is_fundamental

_S = ((0, -1), (1, 0))
_T = ((0, -1), (1, -1))


@dataclass(frozen=True)
class ModularSymbolSpace:
    """Immutable exact model of H_1(X_0(N), cusps; Z) and its pieces.

    Matrix conventions: everything acts on row vectors from the right.
    `reduction` maps Manin-symbol coordinates to M_rel coordinates,
    `relation_kernel_basis` (the section) lifts M_rel back to symbols,
    and reduction o section = identity.  `cuspidal_basis` rows span
    M = ker(boundary) inside M_rel; `star`, `plus_basis`, `minus_basis`
    live in cuspidal-basis coordinates.
    """

    N: int
    generators: tuple  # the N+1 points (c, d) of P^1(Z/NZ)
    relation_kernel_basis: IntMatrix  # section: M_rel -> symbols
    reduction: IntMatrix  # symbols -> M_rel
    boundary: IntMatrix  # M_rel -> Z^2 (cusp classes [0], [oo])
    cuspidal_basis: IntMatrix  # rows: basis of M in M_rel coordinates
    star: IntMatrix  # involution on M, cuspidal-basis coordinates
    plus_basis: IntMatrix  # rows: basis of M^+ in cuspidal coordinates
    minus_basis: IntMatrix
    genus: int
    _inv: tuple  # inverses mod N (index 0 unused)
    _iota: tuple  # index permutation of (c:d) -> (-c:d)

    def index(self, u, v):
        """P^1(Z/NZ) index of (u : v); None for the degenerate (0:0)."""
        u %= self.N
        v %= self.N
        if u == 0:
            return 0 if v else None
        return 1 + v * self._inv[u] % self.N


@dataclass(frozen=True)
class HeckeOp:
    """A Hecke operator restricted to the cuspidal lattice M (index N
    means U_N; anything else is T_index for index prime to N)."""

    index: int
    matrix: IntMatrix


@dataclass(frozen=True)
class ThetaElement:
    """Theta element of a fundamental discriminant: the chain
    sum_a chi_D(a) {0, a/|D|} written in the cuspidal basis."""

    D: int
    coords: tuple
    sign: int


def _act(c, d, g):
    return c * g[0][0] + d * g[1][0], c * g[0][1] + d * g[1][1]


def build_space(N):
    """Construct the full modular-symbol space at prime level N >= 5."""
    if not is_prime(N) or N < 5:
        raise ValueError("level must be a prime >= 5")
    gens = [(0, 1)] + [(1, y) for y in range(N)]
    n = N + 1
    inv = [0] + [pow(u, N - 2, N) for u in range(1, N)]

    def index(u, v):
        u %= N
        v %= N
        if u == 0:
            return 0 if v else None
        return 1 + v * inv[u] % N

    sigma = [index(*_act(c, d, _S)) for c, d in gens]
    tau = [index(*_act(c, d, _T)) for c, d in gens]
    iota = [index(-c, d) for c, d in gens]

    # fold the two-term relations: x_j = -x_i for j = sigma(i) != i
    var_of = [-1] * n
    sign_of = [0] * n
    reps = []  # generator representing each folded variable
    sfixed = []
    for i in range(n):
        if var_of[i] >= 0:
            continue
        j = sigma[i]
        var_of[i] = len(reps)
        sign_of[i] = 1
        if j == i:
            sfixed.append(len(reps))  # 2x = 0 relation to impose
        else:
            var_of[j] = len(reps)
            sign_of[j] = -1
        reps.append(i)
    nvars = len(reps)

    # three-term relations, one row per tau-orbit, in folded variables
    rows = []
    done = [False] * n
    for i in range(n):
        if done[i]:
            continue
        row = [0] * nvars
        j = i
        while True:
            done[j] = True
            row[var_of[j]] += sign_of[j]
            j = tau[j]
            if j == i:
                break
        rows.append(row)
    for v in sfixed:
        row = [0] * nvars
        row[v] = 2
        rows.append(row)

    sd = snf(IntMatrix.from_rows(rows))
    free = [
        j
        for j in range(nvars)
        if j >= len(sd.diag) or sd.diag[j] == 0
    ]
    k = len(free)
    vinv = unimodular_inverse(sd.right)
    red_vars = [[sd.right.entries[v][j] for j in free] for v in range(nvars)]
    reduction = [
        [sign_of[i] * x for x in red_vars[var_of[i]]] for i in range(n)
    ]
    section = [[0] * n for _ in range(k)]
    for jj, j in enumerate(free):
        for v in range(nvars):
            section[jj][reps[v]] = vinv.entries[j][v]
    red_m = IntMatrix.from_rows(reduction)
    sec_m = IntMatrix.from_rows(section)
    assert sec_m * red_m == IntMatrix.identity(k)

    # boundary: symbol (c:d) is the path {b/d, a/c} for any SL2 lift,
    # and at prime level the cusp p/q sits at oo iff N | q, else at 0,
    # so only the bottom row (c, d) matters
    bd_gens = []
    for c, d in gens:
        row = [0, 0]
        row[1 if c % N == 0 else 0] += 1
        row[1 if d % N == 0 else 0] -= 1
        bd_gens.append(row)
    boundary = sec_m * IntMatrix.from_rows(bd_gens)

    cusp_rows = left_kernel(boundary)
    cuspidal = IntMatrix.from_rows(cusp_rows)

    star_rel = sec_m * IntMatrix.from_rows([reduction[iota[i]] for i in range(n)])
    star_m = solve_left(cuspidal, cuspidal * star_rel)
    ident = IntMatrix.identity(star_m.rows)
    plus = IntMatrix.from_rows(
        left_kernel(IntMatrix.from_rows(
            [[x - y for x, y in zip(r, i)] for r, i in zip(star_m.entries, ident.entries)]
        ))
    )
    minus = IntMatrix.from_rows(
        left_kernel(IntMatrix.from_rows(
            [[x + y for x, y in zip(r, i)] for r, i in zip(star_m.entries, ident.entries)]
        ))
    )
    genus = cuspidal.rows // 2
    assert cuspidal.rows == 2 * genus and k == 2 * genus + 1
    assert plus.rows == genus and minus.rows == genus

    return ModularSymbolSpace(
        N=N,
        generators=tuple(gens),
        relation_kernel_basis=sec_m,
        reduction=red_m,
        boundary=boundary,
        cuspidal_basis=cuspidal,
        star=star_m,
        plus_basis=plus,
        minus_basis=minus,
        genus=genus,
        _inv=tuple(inv),
        _iota=tuple(iota),
    )


def star_decompose(space):
    """Saturated eigenlattices of the star involution inside M, as rows
    in cuspidal-basis coordinates (recomputed from the matrix)."""
    ident = IntMatrix.identity(space.star.rows)
    out = []
    for eps in (1, -1):
        mat = IntMatrix.from_rows(
            [
                [x - eps * y for x, y in zip(r, i)]
                for r, i in zip(space.star.entries, ident.entries)
            ]
        )
        out.append(IntMatrix.from_rows(left_kernel(mat)))
    return out[0], out[1]


# ---------------------------------------------------------------------------
# Merel's determinant-l family

_MEREL_CACHE = {}


def merel_matrices(ell):
    """Merel's family {(a,b;c,d): a > b >= 0, d > c >= 0, ad - bc = l}
    as an int64 array of rows (a, b, c, d).

    The boundary strips (b = 0 or c = 0, only possible for a | l) are
    written down directly; interior entries are found by scanning, for
    each (a, d), the divisors b of ad - l inside the window forced by
    c < d — vectorized because the scan is quadratic-ish in l.
    """
    if ell in _MEREL_CACHE:
        return _MEREL_CACHE[ell]
    out = [(1, 0, 0, ell), (ell, 0, 0, 1)]
    out += [(1, 0, c, ell) for c in range(1, ell)]
    out += [(ell, b, 0, 1) for b in range(1, ell)]
    if ell > 1:
        chunks = [np.array(out, dtype=np.int64)]
        for a in range(2, ell + 1):
            dlo = -(-ell // a)
            dhi = ell + 1 - a
            if a * dlo == ell:
                dlo += 1  # ad = l handled by the boundary strips
            if dlo > dhi:
                continue
            d = np.arange(dlo, dhi + 1, dtype=np.int64)
            bc = a * d - ell
            blo = (bc - 1) // (d - 1) + 1
            np.maximum(blo, 1, out=blo)
            counts = a - blo
            counts[counts < 0] = 0
            total = int(counts.sum())
            if not total:
                continue
            drep = np.repeat(d, counts)
            bcrep = np.repeat(bc, counts)
            offs = np.repeat(np.cumsum(counts) - counts, counts)
            b = np.arange(total, dtype=np.int64) - offs + np.repeat(blo, counts)
            ok = bcrep % b == 0
            b, drep, bcrep = b[ok], drep[ok], bcrep[ok]
            rows = np.empty((len(b), 4), dtype=np.int64)
            rows[:, 0] = a
            rows[:, 1] = b
            rows[:, 2] = bcrep // b
            rows[:, 3] = drep
            chunks.append(rows)
        arr = np.concatenate(chunks)
    else:
        arr = np.array(out, dtype=np.int64)
    assert (arr[:, 0] * arr[:, 3] - arr[:, 1] * arr[:, 2] == ell).all()
    _MEREL_CACHE[ell] = arr
    return arr


def _exact_mul(a_rows, b_rows):
    bt = list(zip(*b_rows))
    return [[sum(x * y for x, y in zip(r, c)) for c in bt] for r in a_rows]


def _bounded_mul(A, B):
    """Exact product of integer matrices, via int64 BLAS when a proven
    bound rules out overflow, else arbitrary precision."""
    amax = max((abs(x) for r in A for x in r), default=0)
    bmax = max((abs(x) for r in B for x in r), default=0)
    if amax * bmax * len(B) < 2**62:
        prod = np.array(A, dtype=np.int64) @ np.array(B, dtype=np.int64)
        return [[int(x) for x in row] for row in prod]
    return _exact_mul(A, B)


def hecke(space, ell):
    """T_ell for ell prime to N, or U_N for ell = N, on the cuspidal
    lattice (computed on Manin symbols through Merel's family)."""
    if not is_prime(ell):
        raise ValueError("Hecke index must be prime")
    N = space.N
    n = N + 1
    cs = np.array([c for c, _ in space.generators], dtype=np.int64)
    ds = np.array([d for _, d in space.generators], dtype=np.int64)
    invarr = np.array(space._inv, dtype=np.int64)
    counts = np.zeros((n, n), dtype=np.int64)
    rows_idx = np.arange(n)
    for a, b, c2, d2 in merel_matrices(ell):
        u = (cs * a + ds * c2) % N
        v = (cs * b + ds * d2) % N
        tgt = np.where(u == 0, 0, 1 + v * invarr[u] % N)
        keep = (u != 0) | (v != 0)  # (0:0) happens only when ell = N
        np.add.at(counts, (rows_idx[keep], tgt[keep]), 1)
    hred = _bounded_mul([list(map(int, r)) for r in counts],
                        [list(r) for r in space.reduction.entries])
    t_rel = IntMatrix.from_rows(
        _bounded_mul([list(r) for r in space.relation_kernel_basis.entries], hred)
    )
    t_m = solve_left(space.cuspidal_basis, space.cuspidal_basis * t_rel)
    return HeckeOp(index=ell, matrix=t_m)


def restrict_to_sign(space, op_matrix, sign):
    """Restrict an operator on M (cuspidal coordinates) to M^+ or M^-."""
    basis = space.plus_basis if sign > 0 else space.minus_basis
    return solve_left(basis, basis * op_matrix)


# ---------------------------------------------------------------------------
# paths and theta elements

def _symbol_stream(a, m):
    """Manin symbols of the unimodular path chain of {0, a/m}: yields
    (q_k, +-q_{k-1}) over the continued-fraction convergents, seeded
    with the {0, oo} term."""
    yield 0, 1
    pm2, pm1 = 0, 1
    qm2, qm1 = 1, 0
    sign = -1  # (-1)^(k-1) for k = 0
    x, y = a, m
    while y:
        q, r = divmod(x, y)
        x, y = y, r
        pm2, pm1 = pm1, q * pm1 + pm2
        qm2, qm1 = qm1, q * qm1 + qm2
        yield qm1, sign * qm2
        sign = -sign


def path_to_chain(space, a, m):
    """Coordinates in M_rel of the modular symbol {0, a/m}."""
    if m <= 0 or gcd(a, m) != 1:
        raise ValueError("need m > 0 and gcd(a, m) = 1")
    red = space.reduction.entries
    coords = [0] * space.reduction.cols
    for u, v in _symbol_stream(a, m):
        row = red[space.index(u, v)]
        for i, x in enumerate(row):
            coords[i] += x
    return tuple(coords)


def theta_element(space, D):
    """Theta element: sum over a mod |D| of chi_D(a) {0, a/|D|}."""
    from .exact_linalg import kronecker

    if abs(D) <= 1 or not is_fundamental(D) or gcd(D, space.N) != 1:
        raise ValueError("need a fundamental discriminant prime to N")
    m = abs(D)
    acc = [0] * (space.N + 1)
    for a in range(1, m):
        chi = kronecker(D, a)
        if not chi:
            continue
        for u, v in _symbol_stream(a, m):
            acc[space.index(u, v)] += chi
    red = space.reduction.entries
    k = space.reduction.cols
    coords = [0] * k
    for i, c in enumerate(acc):
        if c:
            row = red[i]
            for j in range(k):
                coords[j] += c * row[j]
    rel = IntMatrix.from_rows([coords])
    bd = rel * space.boundary
    if any(bd.entries[0]):
        raise ValueError("theta chain has nonzero boundary")
    in_m = solve_left(space.cuspidal_basis, rel)
    return ThetaElement(D=D, coords=tuple(in_m.entries[0]), sign=1 if D > 0 else -1)
