"""The p-Eisenstein filtration on the signed cuspidal lattices.

At prime level N with p dividing N - 1 exactly once, the Eisenstein
ideal I is generated (after Sturm-bound truncation) by T_l - l - 1 for
primes l up to ceil((N+1)/6) together with U_N - 1.  Restricting those
operators to M^+ or M^- gives a descending chain of finite-index
sublattices W_n = I^n M^{+-}, computed as exact Hermite normal forms.
The Smith form of each W_n then turns membership questions "x in W_n
up to prime-to-p index" into coordinate-wise divisibility tests, which
is how local-at-p valuations of theta elements are read off.
"""

from dataclasses import dataclass
from math import gcd

from .exact_linalg import (
    IntMatrix,
    LogMap,
    hnf,
    is_prime,
    log_to_p,
    primes_up_to,
    snf,
    solve_left,
)
from .modsym import hecke, path_to_chain, restrict_to_sign


@dataclass(frozen=True)
class EisensteinContext:
    """Everything needed to valuate elements against the W_n chain at
    one sign.  W, snf_of_W and e are indexed by n = 0 .. n_max + 1; the
    extra level lets "valuation >= n_max + 1" be certified honestly."""

    space: object
    p: int
    n_max: int
    sign: int
    sturm_bound: int
    eis_generators: tuple  # restricted operators spanning I on M^sign
    W: tuple  # HNF bases of I^n M^sign, in signed coordinates
    snf_of_W: tuple
    e: tuple  # p-exponent of M^sign / W_n
    logmap: LogMap


def _vp(n, p):
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def _next_primes(start, count):
    out = []
    q = start
    while len(out) < count:
        q += 1
        if is_prime(q):
            out.append(q)
    return out


def build_context(space, p, n_max=3, sign=1):
    """Assemble the Eisenstein filtration on M^sign at the prime p."""
    N = space.N
    if not is_prime(p) or p < 5:
        raise ValueError("need a prime p >= 5")
    if (N - 1) % p or ((N - 1) // p) % p == 0:
        raise ValueError("hypothesis p || N-1 violated")
    if sign not in (1, -1):
        raise ValueError("sign must be +1 or -1")

    sturm = -(-(N + 1) // 6)
    gens = []
    for ell in primes_up_to(sturm):
        if ell == N:
            continue
        t = restrict_to_sign(space, hecke(space, ell).matrix, sign)
        gens.append(IntMatrix.from_rows(
            [[x - (ell + 1 if i == j else 0) for j, x in enumerate(row)]
             for i, row in enumerate(t.entries)]
        ))
    u = restrict_to_sign(space, hecke(space, N).matrix, sign)
    gens.append(IntMatrix.from_rows(
        [[x - (1 if i == j else 0) for j, x in enumerate(row)]
         for i, row in enumerate(u.entries)]
    ))

    g = gens[0].rows

    def step(basis_rows, ops):
        stacked = [
            list(row)
            for op in ops
            for row in (IntMatrix.from_rows(basis_rows) * op).entries
        ]
        h = hnf(IntMatrix.from_rows(stacked))
        rows = [list(r) for r in h.entries if any(r)]
        if len(rows) != g:
            raise ValueError("Eisenstein sublattice dropped rank")
        return rows

    ident = [[1 if i == j else 0 for j in range(g)] for i in range(g)]
    w_rows = [ident]
    for _ in range(n_max + 1):
        w_rows.append(step(w_rows[-1], gens))

    # Sturm saturation check: three more Hecke primes must not shrink W_1
    extra = []
    for q in _next_primes(max(N, sturm), 3):
        t = restrict_to_sign(space, hecke(space, q).matrix, sign)
        extra.append(IntMatrix.from_rows(
            [[x - (q + 1 if i == j else 0) for j, x in enumerate(row)]
             for i, row in enumerate(t.entries)]
        ))
    if step(ident, gens + extra) != w_rows[1]:
        raise ValueError("Sturm-bound generator set failed saturation check")

    w_mats = tuple(IntMatrix.from_rows(r) for r in w_rows)
    smiths = tuple(snf(w) for w in w_mats)
    es = tuple(max(_vp(d, p) for d in sd.diag) for sd in smiths)
    return EisensteinContext(
        space=space,
        p=p,
        n_max=n_max,
        sign=sign,
        sturm_bound=sturm,
        eis_generators=tuple(gens),
        W=w_mats,
        snf_of_W=smiths,
        e=es,
        logmap=LogMap(N, p),
    )


def _in_w_up_to_p(ctx, n, x):
    """Does x lie in W_n + p^{e_n} M^sign (i.e. in W_n locally at p)?"""
    sd = ctx.snf_of_W[n]
    right = sd.right.entries
    g = len(x)
    pe = ctx.p ** ctx.e[n]
    for j in range(g):
        y = sum(x[i] * right[i][j] for i in range(g))
        if y % gcd(sd.diag[j], pe):
            return False
    return True


def p_local_valuation(ctx, x):
    """Largest n <= n_max with x in W_n locally at p; n_max + 1 means
    the valuation is at least n_max + 1 (e.g. x = 0)."""
    x = list(x)
    g = ctx.W[0].rows
    if len(x) != g or not all(isinstance(t, int) for t in x):
        raise ValueError("x is not a lattice vector of the right size")
    val = 0
    for n in range(1, ctx.n_max + 2):
        if not _in_w_up_to_p(ctx, n, x):
            break
        val = n
    return val


def theta_valuation(ctx, theta):
    """Valuation of a theta element against the context's sign chain."""
    if theta.sign != ctx.sign:
        raise ValueError("theta element has the wrong star sign")
    basis = ctx.space.plus_basis if ctx.sign > 0 else ctx.space.minus_basis
    coords = solve_left(basis, IntMatrix.from_rows([list(theta.coords)]))
    return p_local_valuation(ctx, list(coords.entries[0]))


# ---------------------------------------------------------------------------
# mod-p linear algebra (sizes here are the genus, so plain Gaussian
# elimination is fine)

def _fp_mul(a, b, p):
    bt = list(zip(*b))
    return [[sum(x * y for x, y in zip(r, c)) % p for c in bt] for r in a]


def _fp_pow(a, e, p):
    n = len(a)
    out = [[1 if i == j else 0 for j in range(n)] for i in range(n)]
    base = [row[:] for row in a]
    while e:
        if e & 1:
            out = _fp_mul(out, base, p)
        base = _fp_mul(base, base, p)
        e >>= 1
    return out


def _fp_rank(rows, p):
    mat = [[x % p for x in r] for r in rows]
    rank = 0
    cols = len(mat[0]) if mat else 0
    for c in range(cols):
        piv = next((r for r in range(rank, len(mat)) if mat[r][c]), None)
        if piv is None:
            continue
        mat[rank], mat[piv] = mat[piv], mat[rank]
        inv = pow(mat[rank][c], p - 2, p)
        mat[rank] = [x * inv % p for x in mat[rank]]
        for r in range(len(mat)):
            if r != rank and mat[r][c]:
                f = mat[r][c]
                mat[r] = [(x - f * y) % p for x, y in zip(mat[r], mat[rank])]
        rank += 1
    return rank


def g_p_dimension(ctx):
    """dim over F_p of the intersection of ker(A^d) over the Eisenstein
    generators A, d = rank of the signed lattice: the multiplicity of
    the Eisenstein prime in M^sign mod p."""
    d = ctx.W[0].rows
    p = ctx.p
    concat = [[] for _ in range(d)]
    for gen in ctx.eis_generators:
        power = _fp_pow([list(r) for r in gen.entries], d, p)
        for i in range(d):
            concat[i].extend(power[i])
    return d - _fp_rank(concat, p)


# ---------------------------------------------------------------------------
# the alpha map on the p-part of M^+ / W_1

def _alpha_data(ctx):
    sd = ctx.snf_of_W[1]
    pivots = [j for j, dj in enumerate(sd.diag) if dj % ctx.p == 0]
    if len(pivots) != 1 or _vp(sd.diag[pivots[0]], ctx.p) != 1:
        raise ValueError("p-part of M^+/W_1 is not of order exactly p")
    return sd.right.entries, pivots[0]


def _alpha_of_plus_vector(ctx, y):
    """Value of the alpha functional on a vector of M^+ (signed coords):
    its image in the order-p quotient of M^+/W_1, as an element of F_p."""
    right, jstar = _alpha_data(ctx)
    g = len(y)
    return sum(y[i] * right[i][jstar] for i in range(g)) % ctx.p


def alpha_check(ctx, samples, logmap=None):
    """Do the images of the paths {0, b/d} under alpha equal a single
    nonzero multiple of log(d)?

    Each sample (b, d) needs gcd(b, d) = 1 and gcd(d, N) = 1.  The path
    is symmetrized into M^+ via x + x*iota (which doubles the plus
    projection, so the functional is halved mod p afterwards).
    """
    if ctx.sign != 1:
        raise ValueError("alpha lives on the plus part")
    lm = logmap if logmap is not None else ctx.logmap
    space = ctx.space
    inv2 = pow(2, -1, ctx.p)
    pairs = []
    for b, d in samples:
        if gcd(d, space.N) != 1:
            raise ValueError("sample denominator shares a factor with N")
        chain = IntMatrix.from_rows([list(path_to_chain(space, b, d))])
        x = solve_left(space.cuspidal_basis, chain)
        sym = x + x * space.star
        y = solve_left(space.plus_basis, sym)
        val = _alpha_of_plus_vector(ctx, list(y.entries[0])) * inv2 % ctx.p
        pairs.append((val, log_to_p(d, lm)))
    if all(ld == 0 for _, ld in pairs):
        raise ValueError("uninformative samples")
    first = next((v, ld) for v, ld in pairs if ld != 0)
    lam = first[0] * pow(first[1], -1, ctx.p) % ctx.p
    if lam == 0:
        return False
    return all(v == lam * ld % ctx.p for v, ld in pairs)
