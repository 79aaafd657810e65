"""Rank predictions for the I-Selmer group of an even quadratic twist.

The prediction is a pure decision tree on class-field invariants of
the real quadratic field: whether p divides the class number, whether
the p-part of the class group survives inverting the split prime,
the log of the fundamental unit, and (when needed) the log of the
generator attached to a power of the split prime.  When p divides the
class number the result is only a lower bound — the tree then claims
rank > 1 and nothing finer.
"""

from dataclasses import dataclass


@dataclass(frozen=True)
class SelmerInput:
    """Class-field data feeding the rank tree.

    log1_u and log1_pi2 are residues mod p; log1_pi2 may be None when
    it was never computed (it is only consumed on the branch where p
    does not divide h and the eigenspace is bigger than a line).
    """

    p_divides_h: bool
    pic_zn_trivial: bool
    log1_u: int
    log1_pi2: object
    g_p: int

    def __post_init__(self):
        if self.g_p < 1:
            raise ValueError("g_p is a positive dimension")
        if not self.p_divides_h and not self.pic_zn_trivial:
            raise ValueError(
                "inconsistent input: h prime to p forces the quotient trivial"
            )


@dataclass(frozen=True)
class SelmerRankResult:
    kind: str  # "exact" or "lower_bound"
    value: int
    branch: str

    def __post_init__(self):
        if self.kind not in ("exact", "lower_bound"):
            raise ValueError("kind must be exact or lower_bound")
        if self.value < 1:
            raise ValueError("Selmer rank is always at least 1")


def selmer_rank(inp):
    """The F_p-rank of the I-Selmer group of the even twist, or a lower
    bound when p divides the class number."""
    if not inp.pic_zn_trivial:
        return SelmerRankResult("lower_bound", 2, "class group survives inverting N")
    if inp.p_divides_h:
        return SelmerRankResult("lower_bound", 2, "p divides class number")
    if inp.log1_u % 1 != 0:
        raise ValueError("log1_u must be an integer residue")
    if inp.log1_u != 0:
        return SelmerRankResult("exact", 1, "unit log nonzero")
    if inp.g_p == 1:
        # with a one-dimensional eigenspace both sub-branches collapse to 3
        return SelmerRankResult("exact", 3, "unit log zero, line eigenspace")
    if inp.log1_pi2 is None:
        raise ValueError("split-prime log required on this branch")
    if inp.log1_pi2 != 0:
        return SelmerRankResult("exact", 2, "unit log zero, split-prime log nonzero")
    return SelmerRankResult("exact", 3, "unit log zero, split-prime log zero")


def equivalence_predicate(inp):
    """(rank > 1, unit criterion): nontriviality of the Selmer group and
    the unit-power condition are equivalent, so the pair must agree
    componentwise for every consistent input."""
    result = selmer_rank(inp)
    criterion = inp.p_divides_h or inp.log1_u == 0
    return result.value > 1, criterion
