import math
from math import gcd, isqrt

import pytest

from eistheta.exact_linalg import LogMap, kronecker, log_to_p, xgcd
from eistheta.quadfield import (
    QuadUnit,
    _is_reduced_pos,
    _prime_power_form,
    _rho,
    class_number,
    field_profile,
    fundamental_unit,
    is_fundamental,
    pic_zn_trivial,
    split_prime_data,
    split_root,
    unit_criterion,
    unit_residues,
    validate_discriminant,
)

FUND_NEG = [D for D in range(-1, -200, -1) if is_fundamental(D)]
FUND_POS = [D for D in range(2, 201) if is_fundamental(D)]


# ---------------------------------------------------------------------------
# discriminant admissibility

def test_validate_discriminant_pinned():
    assert validate_discriminant(12, 11, 5, True)
    assert not validate_discriminant(60, 11, 5, True)  # 5 | 60
    assert validate_discriminant(-47, 11, 5, False)
    assert not validate_discriminant(13, 11, 5, True)  # (13/11) = -1
    assert not validate_discriminant(-47, 11, 5, True)  # wrong sign
    assert not validate_discriminant(45, 11, 5, True)  # not fundamental


def test_is_fundamental():
    assert all(is_fundamental(D) for D in (5, 8, 12, 13, -3, -4, -47, 401))
    assert not any(is_fundamental(D) for D in (0, 1, 2, 3, 4, 9, 18, 25, -27, 45))


# ---------------------------------------------------------------------------
# class numbers, against the analytic class number formula

def test_class_number_pinned():
    assert class_number(-3) == 1
    assert class_number(-47) == 5  # (1,1,12), (2,+-1,6), (3,+-1,4)
    assert class_number(12) == 1
    assert class_number(5) == 1
    assert class_number(40) == 2
    assert class_number(229) == 3
    with pytest.raises(ValueError):
        class_number(45)


def test_class_number_neg_matches_character_sum():
    # h = w/(2|D|) * |sum a*chi(a)| for D < 0
    for D in FUND_NEG:
        w = 6 if D == -3 else 4 if D == -4 else 2
        s = sum(a * kronecker(D, a) for a in range(1, abs(D)))
        assert class_number(D) * 2 * abs(D) == w * abs(s), D


def test_class_number_pos_matches_analytic_formula():
    # h = -sum chi(a) log(2 sin(pi a / D)) / (2 log u)
    for D in FUND_POS:
        u = fundamental_unit(D)
        if u.y * isqrt(D) < 10**15:
            log_u = math.log((u.x + u.y * math.sqrt(D)) / 2)
        else:
            log_u = math.log(u.x)  # u = x - conj(u), |conj(u)| < 1
        s = -sum(
            kronecker(D, a) * math.log(2 * math.sin(math.pi * a / D))
            for a in range(1, D)
            if gcd(a, D) == 1
        )
        h = s / (2 * log_u)
        assert abs(h - round(h)) < 1e-6
        assert class_number(D) == round(h), D


# ---------------------------------------------------------------------------
# fundamental units

def brute_unit(D, ymax=10**5):
    for y in range(1, ymax):
        for sgn in (-1, 1):
            t = D * y * y + 4 * sgn
            if t > 0:
                x = isqrt(t)
                if x * x == t:
                    return x, y, sgn
    raise AssertionError("unit not found in range")


def test_fundamental_unit_pinned():
    assert (lambda u: (u.x, u.y, u.norm))(fundamental_unit(5)) == (1, 1, -1)
    assert (lambda u: (u.x, u.y, u.norm))(fundamental_unit(8)) == (2, 1, -1)
    assert (lambda u: (u.x, u.y, u.norm))(fundamental_unit(12)) == (4, 1, 1)
    assert (lambda u: (u.x, u.y, u.norm))(fundamental_unit(37)) == (12, 2, -1)
    with pytest.raises(ValueError):
        fundamental_unit(-3)


def test_fundamental_unit_is_minimal_small_range():
    for D in FUND_POS:
        if D > 50:
            continue
        u = fundamental_unit(D)
        x, y, sgn = brute_unit(D)
        assert (u.x, u.y, u.norm) == (x, y, sgn)


def test_unit_pell_relation_and_parity_to_500():
    for D in range(2, 501):
        if not is_fundamental(D):
            continue
        u = fundamental_unit(D)
        assert u.x * u.x - D * u.y * u.y == 4 * u.norm
        assert (u.norm == -1) == (u.period_parity == 1)
        assert u.x > 0 and u.y > 0


def test_quadunit_rejects_bad_data():
    with pytest.raises(ValueError):
        QuadUnit(5, 2, 1, 1, 0)
    with pytest.raises(ValueError):
        QuadUnit(5, 1, 1, -1, 0)  # parity contradicts norm


# ---------------------------------------------------------------------------
# residues at split primes

def test_unit_residues_pinned():
    assert unit_residues(12, 11) == (10, 7, 8)
    assert unit_residues(37, 11) == (2, 8, 4)
    with pytest.raises(ValueError):
        unit_residues(13, 11)  # inert


def test_tracked_residues_equal_exact_reduction_to_500():
    for N in (11, 31):
        for D in range(2, 501):
            if not is_fundamental(D) or kronecker(D, N) != 1:
                continue
            u = fundamental_unit(D)
            r, res1, res2 = unit_residues(D, N)
            assert r * r % N == D % N
            inv2 = pow(2, -1, N)
            assert res1 == (u.x + u.y * r) * inv2 % N
            assert res2 == (u.x + u.y * (N - r)) * inv2 % N
            # product of the two residues is the norm
            assert res1 * res2 % N == u.norm % N


def test_log1_u_is_minus_log2_u():
    L = LogMap(11, 5)
    for D in range(2, 301):
        if not is_fundamental(D) or kronecker(D, 11) != 1:
            continue
        _, res1, res2 = unit_residues(D, 11)
        assert (log_to_p(res1, L) + log_to_p(res2, L)) % 5 == 0


# ---------------------------------------------------------------------------
# the unit criterion

def test_unit_criterion_pinned():
    assert unit_criterion(12, 11, 5) is False  # 7^1 not a 5th power mod 11
    assert unit_criterion(37, 11, 5) is False
    with pytest.raises(ValueError):
        unit_criterion(60, 11, 5)


def test_unit_criterion_true_at_first_D_with_p_dividing_h():
    D = 2
    while not (validate_discriminant(D, 11, 5, True) and class_number(D) % 5 == 0):
        D += 1
    assert unit_criterion(D, 11, 5) is True


def test_criterion_restatement():
    # criterion <=> (p | h) or (log1_u = 0)
    L = LogMap(11, 5)
    for D in range(2, 400):
        if not validate_discriminant(D, 11, 5, True):
            continue
        h = class_number(D)
        _, res1, _ = unit_residues(D, 11)
        log1_u = log_to_p(res1, L)
        assert unit_criterion(D, 11, 5) == (h % 5 == 0 or log1_u == 0)


# ---------------------------------------------------------------------------
# split-prime ideal data

def test_split_prime_data_pinned():
    # ideal above 11 in Q(sqrt(12)) is generated by 1 + sqrt(12);
    # its conjugate reduces to 2 = g^1 mod the first prime
    assert split_prime_data(12, 11, 5) == (1, 1)


def exact_generator(D, N, k):
    """Redo the principality walk with an exact transform and return the
    generator z = (tw + y*sqrt(D))/2 of the k-th ideal power (test-side
    slow path; the library only ever tracks the transform mod N)."""
    a, b, c = _prime_power_form(D, N, k)
    a0, b0 = a, b
    m0 = isqrt(D)
    g = [[1, 0], [0, 1]]

    def push(t):
        for row in g:
            row[0], row[1] = row[1], row[1] * t - row[0]

    while not _is_reduced_pos(a, b, c, m0, D):
        (a, b, c), t = _rho(a, b, c, m0, D)
        push(t)
    start = (a, b)
    while abs(a) != 1:
        (a, b, c), t = _rho(a, b, c, m0, D)
        push(t)
        if (a, b) == start:
            return None
    x, y = g[0][0], g[1][0]
    tw = 2 * a0 * x + b0 * y
    assert (tw * tw - D * y * y) % 4 == 0
    return tw, y


def test_generator_norm_is_plus_minus_N_to_s():
    for N in (11, 31):
        for D in range(2, 201):
            if not validate_discriminant(D, N, 5, True):
                continue
            s, _ = split_prime_data(D, N, 5)
            tw, y = exact_generator(D, N, s)
            assert abs(tw * tw - D * y * y) == 4 * N**s
            assert class_number(D) % s == 0


def test_tracked_pi2_log_matches_exact_generator():
    # conj(z) mod prime_1 computed from the exact generator must agree
    # with the residue accumulated mod N inside split_prime_data
    L = LogMap(11, 5)
    inv2 = pow(2, -1, 11)
    for D in range(2, 301):
        if not validate_discriminant(D, 11, 5, True):
            continue
        s, log1_pi2 = split_prime_data(D, 11, 5)
        tw, y = exact_generator(D, 11, s)
        r = split_root(D, 11)
        t_exact = (tw - y * r) * inv2 % 11
        assert log_to_p(t_exact, L) == log1_pi2
        # and reducing z itself at prime_2 gives the same residue
        assert (tw + y * (11 - r)) * inv2 % 11 == t_exact


# ---------------------------------------------------------------------------
# order of the split prime class: composition oracle

def principal_form(D):
    m0 = isqrt(D)
    b = m0 if (m0 - D) % 2 == 0 else m0 - 1
    return (1, b, (b * b - D) // 4)


def reduce_form(f, D):
    m0 = isqrt(D)
    while not _is_reduced_pos(*f, m0, D):
        f, _ = _rho(*f, m0, D)
    return f


def cycle_of(f, D):
    m0 = isqrt(D)
    f = reduce_form(f, D)
    start, out = f, []
    while True:
        out.append(f)
        f, _ = _rho(*f, m0, D)
        if f == start:
            return out


def canon(f, D):
    return min(cycle_of(f, D))


def transform(f, g):
    (a, b, c), ((p, q), (r, s)) = f, g
    return (
        a * p * p + b * p * r + c * r * r,
        2 * a * p * q + b * (p * s + q * r) + 2 * c * r * s,
        a * q * q + b * q * s + c * s * s,
    )


def compose(f1, f2, D):
    """Dirichlet composition of primitive forms via united forms."""
    a1, b1, c1 = f1
    a2, b2, c2 = f2
    if gcd(a1, a2) != 1:
        hit = next(
            (x, y)
            for x in range(-9, 10)
            for y in range(-9, 10)
            if gcd(x, y) == 1
            and (v := a2 * x * x + b2 * x * y + c2 * y * y)
            and gcd(v, a1) == 1
        )
        x, y = hit
        _, al, be = xgcd(x, y)
        a2, b2, c2 = transform((a2, b2, c2), ((x, -be), (y, al)))
        assert b2 * b2 - 4 * a2 * c2 == D
    m1, m2 = 2 * a1, 2 * a2
    assert (b2 - b1) % 2 == 0
    k = (b2 - b1) // 2 * pow(m1 // 2, -1, abs(m2) // 2) % (abs(m2) // 2)
    B = b1 + m1 * k
    A = a1 * a2
    assert (B * B - D) % (4 * A) == 0
    return canon((A, B, (B * B - D) // (4 * A)), D)


def order_by_composition(D, N):
    f = canon((lambda t: t)(_prime_power_form(D, N, 1)), D)
    acc = f
    for k in range(1, class_number(D) + 1):
        if any(abs(g[0]) == 1 for g in cycle_of(acc, D)):
            return k
        acc = compose(acc, f, D)
    raise AssertionError("order exceeds class number")


def test_split_prime_order_matches_composition_oracle():
    for N in (11, 31):
        for D in range(2, 201):
            if not validate_discriminant(D, N, 5, True):
                continue
            s, _ = split_prime_data(D, N, 5)
            assert s == order_by_composition(D, N), (D, N)


# ---------------------------------------------------------------------------
# Picard triviality and assembled profiles

def test_pic_zn_trivial_cases():
    assert pic_zn_trivial(12, 11, 5) is True  # h = 1
    # first discriminant where the prime above 11 is principal yet 5 | h:
    # Q(sqrt(4889)) has h = 5 and a generator of norm -11
    assert class_number(4889) == 5
    assert split_prime_data(4889, 11, 5)[0] == 1
    assert pic_zn_trivial(4889, 11, 5) is False
    found_nontrivial = False
    for D in range(2, 5000):
        if not validate_discriminant(D, 11, 5, True):
            continue
        h = class_number(D)
        if h % 5:
            assert pic_zn_trivial(D, 11, 5) is True
        else:
            s, _ = split_prime_data(D, 11, 5, h=h)
            if s % 5:
                assert pic_zn_trivial(D, 11, 5) is False
                found_nontrivial = True
                break
    assert found_nontrivial  # a 5 | h discriminant with principal prime


def test_field_profile_pinned():
    prof = field_profile(12, 11, 5)
    assert prof.h == 1 and prof.h_mod_p == 1
    assert (prof.r, prof.u_mod_N1, prof.u_mod_N2) == (10, 7, 8)
    assert prof.s == 1 and prof.log1_pi2 == 1
    assert prof.log1_u == 2  # 7 = 2^7 mod 11, 7 = 2 mod 5
    assert prof.pic_zn_trivial is True
    assert prof.criterion is False
    with pytest.raises(ValueError):
        field_profile(13, 11, 5)
