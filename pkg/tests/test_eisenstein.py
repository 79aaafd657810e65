"""Eisenstein filtration: lattice chain, valuations, g_p, alpha map."""

import random

import pytest

from eistheta.exact_linalg import IntMatrix, LogMap, solve_left
from eistheta.eisenstein import (
    _alpha_of_plus_vector,
    alpha_check,
    build_context,
    g_p_dimension,
    p_local_valuation,
    theta_valuation,
)
from eistheta.modsym import build_space, theta_element

rng = random.Random(771561)

SP11 = build_space(11)
CTX11 = build_context(SP11, 5)
SP31 = build_space(31)
CTX31 = build_context(SP31, 5)


def test_context_pinned_at_eleven():
    assert CTX11.sturm_bound == 2
    # M^+ has rank 1 and the whole ideal acts as multiplication by -5,
    # so the chain is 5^n Z and every quotient is cyclic
    assert [sd.diag for sd in CTX11.snf_of_W] == [(1,), (5,), (25,), (125,), (625,)]
    assert CTX11.e == (0, 1, 2, 3, 4)
    assert CTX11.e[1] == 1 and CTX11.e[2] <= 2


def test_context_validation():
    with pytest.raises(ValueError, match="hypothesis p \\|\\| N-1 violated"):
        build_context(SP11, 7)
    with pytest.raises(ValueError, match="hypothesis"):
        build_context(build_space(101), 5)  # 25 | 100
    with pytest.raises(ValueError, match="p >= 5"):
        build_context(SP31, 3)  # 3 || 30, but too small a p
    with pytest.raises(ValueError, match="sign"):
        build_context(SP11, 5, sign=0)


def test_g_p_dimension_fixtures_small():
    assert g_p_dimension(CTX11) == 1
    assert g_p_dimension(CTX31) == 2


def test_theta_twelve_valuation_exactly_one():
    th = theta_element(SP11, 12)
    assert theta_valuation(CTX11, th) == 1


def test_zero_vector_valuation_is_sentinel():
    assert p_local_valuation(CTX11, [0]) == CTX11.n_max + 1
    assert p_local_valuation(CTX31, [0, 0]) == CTX31.n_max + 1


def test_valuation_input_validation():
    with pytest.raises(ValueError):
        p_local_valuation(CTX31, [1])  # wrong length
    with pytest.raises(ValueError):
        p_local_valuation(CTX11, [1.5])


def _brute_member(ctx, n, x):
    """Membership in W_n + p^{e_n} M via an honest integer solve."""
    from eistheta.exact_linalg import hnf

    g = ctx.W[0].rows
    pe = ctx.p ** ctx.e[n]
    stacked = hnf(IntMatrix.from_rows(
        [list(r) for r in ctx.W[n].entries]
        + [[pe if i == j else 0 for j in range(g)] for i in range(g)]
    ))
    basis = IntMatrix.from_rows([list(r) for r in stacked.entries if any(r)])
    try:
        solve_left(basis, IntMatrix.from_rows([list(x)]))
        return True
    except ValueError:
        return False


def test_valuation_matches_solve_oracle():
    ctx = CTX31
    g = ctx.W[0].rows
    vectors = []
    for _ in range(25):
        vectors.append([rng.randrange(-9, 10) for _ in range(g)])
    # salt in vectors that sit deep in the chain
    for n in (1, 2, 3, 4):
        w = ctx.W[n].entries
        for _ in range(6):
            c = [rng.randrange(-2, 3) for _ in range(g)]
            vectors.append(
                [sum(c[i] * w[i][j] for i in range(g)) for j in range(g)]
            )
    for x in vectors:
        val = p_local_valuation(ctx, x)
        for n in range(ctx.n_max + 2):
            assert _brute_member(ctx, n, x) == (n <= val)


def test_valuation_scaling_by_p():
    # multiplying by p raises the valuation (capped at the sentinel)
    ctx = CTX11
    x = [3]
    vals = []
    for k in range(6):
        vals.append(p_local_valuation(ctx, [t * 5**k for t in x]))
    assert vals == [0, 1, 2, 3, 4, 4]


def test_saturation_and_determinism():
    again = build_context(SP31, 5)
    assert again.W == CTX31.W
    assert again.snf_of_W[1].diag == CTX31.snf_of_W[1].diag
    shallow = build_context(SP31, 5, n_max=1)
    assert shallow.W == CTX31.W[:3]


def test_minus_side_valuations():
    ctxm = build_context(SP11, 5, sign=-1)
    # h(-3) = 1 is prime to 5: the theta element must be a unit in the chain
    assert theta_valuation(ctxm, theta_element(SP11, -3)) == 0
    # h(-47) = 5: the true side; this chain even vanishes identically
    assert theta_valuation(ctxm, theta_element(SP11, -47)) == ctxm.n_max + 1
    with pytest.raises(ValueError):
        theta_valuation(CTX11, theta_element(SP11, -3))  # sign mismatch
    with pytest.raises(ValueError):
        alpha_check(ctxm, [(1, 2)])


def _random_samples(k):
    out = []
    while len(out) < k:
        d = rng.randrange(2, 500)
        if d % 11 == 0:
            continue
        b = rng.randrange(1, d)
        from math import gcd

        if gcd(b, d) != 1:
            continue
        out.append((b, d))
    return out


def test_alpha_is_log_multiple():
    assert alpha_check(CTX11, _random_samples(50)) is True


def test_alpha_generator_choice_does_not_matter():
    samples = _random_samples(20)
    assert alpha_check(CTX11, samples, logmap=LogMap(11, 5, generator=7))
    assert alpha_check(CTX11, samples, logmap=LogMap(11, 5, generator=8))


def test_alpha_uninformative_samples():
    # denominators congruent to +-1 mod 11 all have log 0
    with pytest.raises(ValueError, match="uninformative"):
        alpha_check(CTX11, [(1, 12), (1, 23), (2, 21)])


def test_alpha_kills_theta_elements():
    for D in (12, 37, 40):
        th = theta_element(SP11, D)
        y = solve_left(
            SP11.plus_basis, IntMatrix.from_rows([list(th.coords)])
        )
        assert _alpha_of_plus_vector(CTX11, list(y.entries[0])) == 0


def test_alpha_rejects_bad_denominator():
    with pytest.raises(ValueError):
        alpha_check(CTX11, [(1, 22)])
