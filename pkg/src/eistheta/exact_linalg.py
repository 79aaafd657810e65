"""Exact integer linear algebra and modular arithmetic primitives.

Everything downstream (modular symbols, lattice filtrations, quadratic
fields) runs on arbitrary-precision integers; nothing here ever rounds.
Normal forms are computed by fraction-free integer elimination with
partial pivoting on the entry of least absolute value, which keeps
intermediate growth tame at the matrix sizes we care about (a few
hundred rows at most).
"""

from dataclasses import dataclass
from math import gcd, isqrt


# ---------------------------------------------------------------------------
# matrices

@dataclass(frozen=True)
class IntMatrix:
    """Immutable integer matrix, row-major."""

    rows: int
    cols: int
    entries: tuple  # tuple of row tuples

    def __post_init__(self):
        if self.rows <= 0 or self.cols <= 0:
            raise ValueError("matrix dimensions must be positive")
        if len(self.entries) != self.rows or any(len(r) != self.cols for r in self.entries):
            raise ValueError("entry shape does not match declared dimensions")

    @classmethod
    def from_rows(cls, data):
        data = [tuple(int(x) for x in row) for row in data]
        return cls(len(data), len(data[0]), tuple(data))

    @classmethod
    def identity(cls, n):
        return cls.from_rows([[1 if i == j else 0 for j in range(n)] for i in range(n)])

    @classmethod
    def zeros(cls, r, c):
        return cls(r, c, tuple((0,) * c for _ in range(r)))

    def to_lists(self):
        return [list(row) for row in self.entries]

    def __mul__(self, other):
        if self.cols != other.rows:
            raise ValueError("dimension mismatch in matrix product")
        bt = list(zip(*other.entries))
        return IntMatrix.from_rows(
            [[sum(a * b for a, b in zip(row, col)) for col in bt] for row in self.entries]
        )

    def __add__(self, other):
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise ValueError("dimension mismatch in matrix sum")
        return IntMatrix.from_rows(
            [[a + b for a, b in zip(r, s)] for r, s in zip(self.entries, other.entries)]
        )

    def __sub__(self, other):
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise ValueError("dimension mismatch in matrix difference")
        return IntMatrix.from_rows(
            [[a - b for a, b in zip(r, s)] for r, s in zip(self.entries, other.entries)]
        )

    def transpose(self):
        return IntMatrix.from_rows(list(zip(*self.entries)))


@dataclass(frozen=True)
class SmithData:
    """Invariant factors d1 | d2 | ... with unimodular transforms.

    left * A * right is diagonal with the stated invariants.
    """

    diag: tuple
    left: IntMatrix
    right: IntMatrix


def _hnf_inplace(data, transform=None):
    """Row-style Hermite form of a list-of-lists, optionally carrying a
    transform matrix (same row operations applied to it)."""
    m = len(data)
    n = len(data[0]) if m else 0
    row = 0
    for col in range(n):
        if row == m:
            break
        # repeatedly reduce the column below `row` by its least nonzero entry
        while True:
            piv, best = -1, 0
            for i in range(row, m):
                v = data[i][col]
                if v and (piv < 0 or abs(v) < best):
                    piv, best = i, abs(v)
            if piv < 0:
                break
            if piv != row:
                data[row], data[piv] = data[piv], data[row]
                if transform is not None:
                    transform[row], transform[piv] = transform[piv], transform[row]
            a = data[row][col]
            done = True
            for i in range(row + 1, m):
                v = data[i][col]
                if v:
                    q = v // a
                    _row_sub(data, i, row, q, col)
                    if transform is not None:
                        _row_sub(transform, i, row, q, 0)
                    if data[i][col]:
                        done = False
            if done:
                break
        if piv < 0:
            continue
        if data[row][col] < 0:
            data[row] = [-x for x in data[row]]
            if transform is not None:
                transform[row] = [-x for x in transform[row]]
        a = data[row][col]
        for i in range(row):
            q = data[i][col] // a
            if q:
                _row_sub(data, i, row, q, col)
                if transform is not None:
                    _row_sub(transform, i, row, q, 0)
        row += 1
    return data


def _row_sub(data, i, j, q, start):
    if q:
        ri, rj = data[i], data[j]
        for k in range(start, len(ri)):
            ri[k] -= q * rj[k]


def hnf(A: IntMatrix) -> IntMatrix:
    """Canonical row-style Hermite normal form (same shape as A; zero
    rows sink to the bottom, pivots positive, entries above a pivot
    reduced into [0, pivot))."""
    return IntMatrix.from_rows(_hnf_inplace(A.to_lists()))


def hnf_with_transform(A: IntMatrix):
    """Return (H, U) with U unimodular and U*A = H in Hermite form."""
    data = A.to_lists()
    u = IntMatrix.identity(A.rows).to_lists()
    _hnf_inplace(data, u)
    return IntMatrix.from_rows(data), IntMatrix.from_rows(u)


def snf(A: IntMatrix) -> SmithData:
    """Smith normal form with transforms, by alternating row/column
    reduction pivoting on the least nonzero entry."""
    s = A.to_lists()
    m, n = A.rows, A.cols
    left = IntMatrix.identity(m).to_lists()
    right = IntMatrix.identity(n).to_lists()

    def col_sub(j, k, q):
        # column_j -= q * column_k, mirrored on `right`
        if q:
            for r in s:
                r[j] -= q * r[k]
            for r in right:
                r[j] -= q * r[k]

    t = 0
    while True:
        # locate least nonzero entry of the trailing block
        piv = None
        best = 0
        for i in range(t, m):
            for j in range(t, n):
                v = s[i][j]
                if v and (piv is None or abs(v) < best):
                    piv, best = (i, j), abs(v)
        if piv is None:
            break
        i, j = piv
        if i != t:
            s[t], s[i] = s[i], s[t]
            left[t], left[i] = left[i], left[t]
        if j != t:
            for r in s:
                r[t], r[j] = r[j], r[t]
            for r in right:
                r[t], r[j] = r[j], r[t]
        while True:
            # clear column t
            for i in range(t + 1, m):
                q = s[i][t] // s[t][t]
                _row_sub(s, i, t, q, 0)
                _row_sub(left, i, t, q, 0)
            if any(s[i][t] for i in range(t + 1, m)):
                # a smaller remainder appeared; make it the pivot
                i = min((i for i in range(t, m) if s[i][t]), key=lambda i: abs(s[i][t]))
                s[t], s[i] = s[i], s[t]
                left[t], left[i] = left[i], left[t]
                continue
            # clear row t
            for j in range(t + 1, n):
                q = s[t][j] // s[t][t]
                col_sub(j, t, q)
            if any(s[t][j] for j in range(t + 1, n)):
                j = min((j for j in range(t, n) if s[t][j]), key=lambda j: abs(s[t][j]))
                for r in s:
                    r[t], r[j] = r[j], r[t]
                for r in right:
                    r[t], r[j] = r[j], r[t]
                continue
            break
        # enforce divisibility of the trailing block by the pivot
        dirty = False
        for i in range(t + 1, m):
            if dirty:
                break
            for j in range(t + 1, n):
                if s[i][j] % s[t][t]:
                    _row_sub(s, t, i, -1, 0)  # row_t += row_i
                    _row_sub(left, t, i, -1, 0)
                    dirty = True
                    break
        if dirty:
            # redo the clearing pass for this t
            continue
        t += 1
        if t == min(m, n):
            break
    for i in range(min(m, n)):
        if s[i][i] < 0:
            s[i] = [-x for x in s[i]]
            left[i] = [-x for x in left[i]]
    return SmithData(
        diag=tuple(s[i][i] for i in range(min(m, n))),
        left=IntMatrix.from_rows(left),
        right=IntMatrix.from_rows(right),
    )


def unimodular_inverse(M: IntMatrix) -> IntMatrix:
    """Inverse of a unimodular integer matrix (HNF of M must be the
    identity, in which case the tracked transform is M^{-1})."""
    h, u = hnf_with_transform(M)
    if h != IntMatrix.identity(M.rows):
        raise ValueError("matrix is not unimodular")
    return u


def left_kernel(A: IntMatrix) -> list:
    """Basis (list of row vectors) of {v : v*A = 0}; always saturated."""
    h, u = hnf_with_transform(A)
    return [list(u.entries[i]) for i in range(A.rows) if not any(h.entries[i])]


def solve_left(B: IntMatrix, C: IntMatrix) -> IntMatrix:
    """Solve X*B = C over the integers for B with full row rank whose row
    lattice is saturated (every rational solution is integral).  Raises
    ValueError if some row of C is outside the row span."""
    h, u = hnf_with_transform(B)
    hr = h.entries
    pivots = []
    for i in range(B.rows):
        nz = [j for j in range(B.cols) if hr[i][j]]
        if not nz:
            raise ValueError("basis matrix does not have full row rank")
        pivots.append(nz[0])
    xs = []
    for crow in C.entries:
        rem = list(crow)
        coeff = [0] * B.rows
        for i, pj in enumerate(pivots):
            q, r = divmod(rem[pj], hr[i][pj])
            if r:
                raise ValueError("vector is not in the row span")
            coeff[i] = q
            if q:
                for k in range(B.cols):
                    rem[k] -= q * hr[i][k]
        if any(rem):
            raise ValueError("vector is not in the row span")
        xs.append(coeff)
    return IntMatrix.from_rows(xs) * u


# ---------------------------------------------------------------------------
# elementary number theory

def xgcd(a, b):
    """Return (g, x, y) with a*x + b*y = g = gcd(a, b) >= 0."""
    x0, x1, y0, y1 = 1, 0, 0, 1
    while b:
        q, r = divmod(a, b)
        a, b = b, r
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    if a < 0:
        a, x0, y0 = -a, -x0, -y0
    return a, x0, y0


def is_prime(n):
    if n < 2:
        return False
    for q in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % q == 0:
            return n == q
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def primes_up_to(n):
    if n < 2:
        return []
    sieve = bytearray([1]) * (n + 1)
    sieve[0] = sieve[1] = 0
    for i in range(2, isqrt(n) + 1):
        if sieve[i]:
            sieve[i * i :: i] = bytearray(len(sieve[i * i :: i]))
    return [i for i in range(n + 1) if sieve[i]]


def factorize(n):
    """Trial-division factorization as {prime: exponent} (desk scale)."""
    out = {}
    d = 2
    while d * d <= n:
        while n % d == 0:
            out[d] = out.get(d, 0) + 1
            n //= d
        d += 1 if d == 2 else 2
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def divisors(n):
    """Sorted positive divisors of n (from trial-division factorization)."""
    out = [1]
    for q, e in factorize(abs(n)).items():
        out = [d * q**i for d in out for i in range(e + 1)]
    return sorted(out)


def kronecker(D, n):
    """Kronecker symbol (D/n)."""
    a, b = int(D), int(n)
    if b == 0:
        return 1 if abs(a) == 1 else 0
    result = 1
    if b < 0:
        b = -b
        if a < 0:
            result = -result
    while b % 2 == 0:
        b //= 2
        if a % 2 == 0:
            return 0
        if a % 8 in (3, 5):
            result = -result
    a %= b
    while a:
        while a % 2 == 0:
            a //= 2
            if b % 8 in (3, 5):
                result = -result
        a, b = b, a
        if a % 4 == 3 and b % 4 == 3:
            result = -result
        a %= b
    return result if b == 1 else 0


def sqrt_mod(a, q):
    """Tonelli-Shanks square root modulo an odd prime q."""
    a %= q
    if a == 0:
        return 0
    if kronecker(a, q) != 1:
        raise ValueError("not a square")
    if q % 4 == 3:
        return pow(a, (q + 1) // 4, q)
    # write q-1 = s * 2^e with s odd
    s, e = q - 1, 0
    while s % 2 == 0:
        s //= 2
        e += 1
    z = 2
    while kronecker(z, q) != -1:
        z += 1
    c = pow(z, s, q)
    x = pow(a, (s + 1) // 2, q)
    t = pow(a, s, q)
    m = e
    while t != 1:
        i, t2 = 0, t
        while t2 != 1:
            t2 = t2 * t2 % q
            i += 1
        b = pow(c, 1 << (m - i - 1), q)
        x = x * b % q
        c = b * b % q
        t = t * c % q
        m = i
    return x


# ---------------------------------------------------------------------------
# the fixed surjection (Z/NZ)* -> Z/pZ

class LogMap:
    """Discrete-log surjection (Z/NZ)* -> Z/pZ for p exactly dividing N-1.

    The generator defaults to the smallest primitive root mod N, so the
    map is deterministic across runs; a different primitive root may be
    supplied to check that downstream answers do not depend on the
    choice.  Lookups use baby-step/giant-step on the full unit group
    (N is desk-scale; O(sqrt N) is plenty).
    """

    def __init__(self, modulus, target, generator=None):
        if not is_prime(modulus) or not is_prime(target):
            raise ValueError("modulus and target must be prime")
        if (modulus - 1) % target or ((modulus - 1) // target) % target == 0:
            raise ValueError("target must divide N-1 exactly once")
        self.modulus = modulus
        self.target = target
        if generator is None:
            generator = self._smallest_primitive_root(modulus)
        else:
            facs = factorize(modulus - 1)
            if any(pow(generator, (modulus - 1) // q, modulus) == 1 for q in facs):
                raise ValueError("generator is not a primitive root")
        self.generator = generator
        m = isqrt(modulus - 1) + 1
        self._m = m
        table = {}
        acc = 1
        for j in range(m):
            table.setdefault(acc, j)
            acc = acc * self.generator % modulus
        self._baby = table
        self._giant = pow(self.generator, -m, modulus)

    @staticmethod
    def _smallest_primitive_root(n):
        facs = factorize(n - 1)
        for g in range(2, n):
            if all(pow(g, (n - 1) // q, n) != 1 for q in facs):
                return g
        raise ValueError("no primitive root found")

    def dlog(self, x):
        """Full discrete log of x base the generator, in Z/(N-1)Z."""
        n = self.modulus
        x %= n
        if x == 0:
            raise ValueError("log of zero residue")
        y = x
        for i in range(self._m):
            j = self._baby.get(y)
            if j is not None:
                return (i * self._m + j) % (n - 1)
            y = y * self._giant % n
        raise ValueError("discrete log not found (modulus not prime?)")


def log_to_p(x, L: LogMap):
    """Image of x under the fixed surjection (Z/NZ)* -> Z/pZ."""
    return L.dlog(x) % L.target
