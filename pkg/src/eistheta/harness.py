"""Discriminant sweeps, fixture checks, persistence and report emission.

Each sweep row packages everything needed to re-derive its verdict by
hand: the class number, the unit/generator logs, the predicted Selmer
rank and the measured Eisenstein valuation of the theta element.  The
consistency boolean encodes the theorem under test — for even (split,
real) discriminants that the valuation is >= 1, is >= 2 exactly when
the unit criterion holds, and that the rank prediction crosses 1 at
the same time; for odd (inert, imaginary) discriminants that the
valuation is >= 1 exactly when p divides the class number.
"""

import hashlib
import json
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

from .eisenstein import build_context, g_p_dimension, theta_valuation
from .exact_linalg import IntMatrix, is_prime
from .modsym import ModularSymbolSpace, build_space, theta_element
from .quadfield import class_number, field_profile, is_fundamental, validate_discriminant
from .selmer import SelmerInput, SelmerRankResult, selmer_rank

FORMAT_VERSION = 1


@dataclass(frozen=True)
class SweepRow:
    N: int
    p: int
    D: int
    h: int
    h_mod_p: int
    log1_u: object  # int, or None on odd rows
    log1_pi2: object
    criterion: bool
    eis_valuation: int
    selmer: object  # SelmerRankResult, or None on odd rows
    consistent: bool


@dataclass(frozen=True)
class SweepReport:
    rows: tuple
    total: int
    passed: int
    failed: int


class CacheVersionError(ValueError):
    pass


class CacheIntegrityError(ValueError):
    pass


def _validate_pair(N, p):
    if not is_prime(N) or N < 5:
        raise ValueError("level must be a prime >= 5")
    if not is_prime(p) or p < 5:
        raise ValueError("need a prime p >= 5")
    if (N - 1) % p or ((N - 1) // p) % p == 0:
        raise ValueError("hypothesis p || N-1 violated")


# ---------------------------------------------------------------------------
# per-discriminant row computations

def even_row(space, ctx, g_p, D):
    profile = field_profile(D, space.N, ctx.p, logmap=ctx.logmap)
    val = theta_valuation(ctx, theta_element(space, D))
    sel = selmer_rank(SelmerInput(
        p_divides_h=profile.h_mod_p == 0,
        pic_zn_trivial=profile.pic_zn_trivial,
        log1_u=profile.log1_u,
        log1_pi2=profile.log1_pi2,
        g_p=g_p,
    ))
    crit = profile.criterion
    consistent = (
        val >= 1 and ((val >= 2) == crit) and ((sel.value > 1) == crit)
    )
    return SweepRow(
        N=space.N, p=ctx.p, D=D, h=profile.h, h_mod_p=profile.h_mod_p,
        log1_u=profile.log1_u, log1_pi2=profile.log1_pi2, criterion=crit,
        eis_valuation=val, selmer=sel, consistent=consistent,
    )


def odd_row(space, ctx, D):
    h = class_number(D)
    val = theta_valuation(ctx, theta_element(space, D))
    crit = h % ctx.p == 0
    return SweepRow(
        N=space.N, p=ctx.p, D=D, h=h, h_mod_p=h % ctx.p,
        log1_u=None, log1_pi2=None, criterion=crit,
        eis_valuation=val, selmer=None,
        consistent=(val >= 1) == crit,
    )


_WORKER = {}


def _init_worker(N, p, n_max, sign):
    space = build_space(N)
    ctx = build_context(space, p, n_max=n_max, sign=sign)
    _WORKER["space"] = space
    _WORKER["ctx"] = ctx
    _WORKER["g_p"] = g_p_dimension(ctx) if sign > 0 else None


def _even_task(D):
    return even_row(_WORKER["space"], _WORKER["ctx"], _WORKER["g_p"], D)


def _odd_task(D):
    return odd_row(_WORKER["space"], _WORKER["ctx"], D)


def _run_sweep(N, p, ds, n_max, jobs, sign, task, serial):
    if jobs and jobs > 1:
        with ProcessPoolExecutor(
            max_workers=jobs, initializer=_init_worker,
            initargs=(N, p, n_max, sign),
        ) as pool:
            rows = list(pool.map(task, ds, chunksize=8))
    else:
        rows = serial(ds)
    passed = sum(1 for r in rows if r.consistent)
    return SweepReport(
        rows=tuple(rows), total=len(rows), passed=passed,
        failed=len(rows) - passed,
    )


def sweep_even(N, p, d_min, d_max, n_max=3, jobs=1, context=None):
    """Rows for every valid fundamental 0 < D in [d_min, d_max] with N
    split in Q(sqrt D), ascending; `context` may carry a preloaded
    (space, ctx) pair from the cache."""
    _validate_pair(N, p)
    if not 0 < d_min <= d_max:
        raise ValueError("need 0 < d_min <= d_max")
    ds = [D for D in range(d_min, d_max + 1)
          if is_fundamental(D) and validate_discriminant(D, N, p, want_split=True)]

    def serial(dlist):
        space, ctx = context if context else (None, None)
        if space is None:
            space = build_space(N)
            ctx = build_context(space, p, n_max=n_max)
        g_p = g_p_dimension(ctx)
        return [even_row(space, ctx, g_p, D) for D in dlist]

    return _run_sweep(N, p, ds, n_max, jobs, 1, _even_task, serial)


def sweep_odd(N, p, d_min, d_max, n_max=3, jobs=1, context=None):
    """Rows for every valid fundamental D < 0 in [d_min, d_max] with N
    inert in Q(sqrt D), ascending by D."""
    _validate_pair(N, p)
    if not d_min <= d_max or d_max >= 0:
        raise ValueError("need d_min <= d_max < 0")
    ds = [D for D in range(d_min, d_max + 1)
          if is_fundamental(D) and validate_discriminant(D, N, p, want_split=False)]

    def serial(dlist):
        space, ctx = context if context else (None, None)
        if space is None:
            space = build_space(N)
            ctx = build_context(space, p, n_max=n_max, sign=-1)
        return [odd_row(space, ctx, D) for D in dlist]

    return _run_sweep(N, p, ds, n_max, jobs, -1, _odd_task, serial)


# ---------------------------------------------------------------------------
# fixtures

FIXTURES_DEFAULT = ((11, 5, 1), (31, 5, 2), (211, 5, 2))
FIXTURES_LARGE = ((1871, 5, 2), (4621, 5, 2), (9931, 5, 2))


def fixture_rows(large=False):
    """(N, p, expected, computed) for each configured fixture pair."""
    out = []
    for N, p, want in FIXTURES_DEFAULT:
        ctx = build_context(build_space(N), p)
        out.append((N, p, want, g_p_dimension(ctx)))
    if large:
        from .modp import g_p_dimension_modp

        for N, p, want in FIXTURES_LARGE:
            out.append((N, p, want, g_p_dimension_modp(N, p)))
    return out


def check_fixtures(large=False):
    """True iff every configured (N, p) reproduces its g_p value."""
    return all(want == got for _, _, want, got in fixture_rows(large))


# ---------------------------------------------------------------------------
# persistence: single-file JSON envelope, checksummed and versioned

def _enc_matrix(m):
    return [[str(x) for x in row] for row in m.entries]


def _dec_matrix(rows):
    return IntMatrix.from_rows([[int(x) for x in row] for row in rows])


def _space_payload(space):
    return {
        "N": str(space.N),
        "genus": str(space.genus),
        "section": _enc_matrix(space.relation_kernel_basis),
        "reduction": _enc_matrix(space.reduction),
        "boundary": _enc_matrix(space.boundary),
        "cuspidal_basis": _enc_matrix(space.cuspidal_basis),
        "star": _enc_matrix(space.star),
        "plus_basis": _enc_matrix(space.plus_basis),
        "minus_basis": _enc_matrix(space.minus_basis),
    }


def _space_from_payload(data):
    N = int(data["N"])
    inv = [0] + [pow(u, N - 2, N) for u in range(1, N)]
    gens = [(0, 1)] + [(1, y) for y in range(N)]

    def index(u, v):
        u %= N
        v %= N
        if u == 0:
            return 0 if v else None
        return 1 + v * inv[u] % N

    return ModularSymbolSpace(
        N=N,
        generators=tuple(gens),
        relation_kernel_basis=_dec_matrix(data["section"]),
        reduction=_dec_matrix(data["reduction"]),
        boundary=_dec_matrix(data["boundary"]),
        cuspidal_basis=_dec_matrix(data["cuspidal_basis"]),
        star=_dec_matrix(data["star"]),
        plus_basis=_dec_matrix(data["plus_basis"]),
        minus_basis=_dec_matrix(data["minus_basis"]),
        genus=int(data["genus"]),
        _inv=tuple(inv),
        _iota=tuple(index(-c, d) for c, d in gens),
    )


def _checksum(payload):
    blob = json.dumps(payload, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(blob.encode()).hexdigest()


def save_context(space, ctx, path):
    payload = {
        "space": _space_payload(space),
        "p": str(ctx.p),
        "n_max": str(ctx.n_max),
        "sign": str(ctx.sign),
        "sturm_bound": str(ctx.sturm_bound),
        "eis_generators": [_enc_matrix(m) for m in ctx.eis_generators],
        "W": [_enc_matrix(m) for m in ctx.W],
        "snf_diag": [[str(d) for d in sd.diag] for sd in ctx.snf_of_W],
        "snf_left": [_enc_matrix(sd.left) for sd in ctx.snf_of_W],
        "snf_right": [_enc_matrix(sd.right) for sd in ctx.snf_of_W],
        "e": [str(x) for x in ctx.e],
    }
    envelope = {
        "format_version": FORMAT_VERSION,
        "checksum": _checksum(payload),
        "payload": payload,
    }
    with open(path, "w") as fh:
        json.dump(envelope, fh, sort_keys=True, separators=(",", ":"))


def load_context(path):
    """Rebuild (space, context) from a cache file, refusing stale or
    corrupted envelopes with distinct errors."""
    from .eisenstein import EisensteinContext
    from .exact_linalg import LogMap, SmithData

    with open(path) as fh:
        envelope = json.load(fh)
    if envelope.get("format_version") != FORMAT_VERSION:
        raise CacheVersionError(
            "cache version mismatch: file has %r, this build reads %r"
            % (envelope.get("format_version"), FORMAT_VERSION)
        )
    payload = envelope["payload"]
    if _checksum(payload) != envelope.get("checksum"):
        raise CacheIntegrityError("cache integrity check failed")
    space = _space_from_payload(payload["space"])
    smiths = tuple(
        SmithData(
            diag=tuple(int(d) for d in diag),
            left=_dec_matrix(left),
            right=_dec_matrix(right),
        )
        for diag, left, right in zip(
            payload["snf_diag"], payload["snf_left"], payload["snf_right"]
        )
    )
    ctx = EisensteinContext(
        space=space,
        p=int(payload["p"]),
        n_max=int(payload["n_max"]),
        sign=int(payload["sign"]),
        sturm_bound=int(payload["sturm_bound"]),
        eis_generators=tuple(_dec_matrix(m) for m in payload["eis_generators"]),
        W=tuple(_dec_matrix(m) for m in payload["W"]),
        snf_of_W=smiths,
        e=tuple(int(x) for x in payload["e"]),
        logmap=LogMap(space.N, int(payload["p"])),
    )
    return space, ctx


# ---------------------------------------------------------------------------
# report emission

CSV_COLUMNS = "N,p,D,h,h_mod_p,log1_u,log1_pi2,criterion,eis_valuation,selmer_rank,selmer_kind,consistent"


def _cell(x):
    if x is None:
        return ""
    if isinstance(x, bool):
        return "true" if x else "false"
    return str(x)


def report_to_csv(report):
    lines = [CSV_COLUMNS]
    for r in report.rows:
        lines.append(",".join(_cell(x) for x in (
            r.N, r.p, r.D, r.h, r.h_mod_p, r.log1_u, r.log1_pi2, r.criterion,
            r.eis_valuation,
            r.selmer.value if r.selmer else None,
            r.selmer.kind if r.selmer else None,
            r.consistent,
        )))
    return "\n".join(lines) + "\n"


def report_to_json(report):
    rows = []
    for r in report.rows:
        rows.append({
            "N": r.N, "p": r.p, "D": r.D, "h": r.h, "h_mod_p": r.h_mod_p,
            "log1_u": r.log1_u, "log1_pi2": r.log1_pi2,
            "criterion": r.criterion, "eis_valuation": r.eis_valuation,
            "selmer_rank": r.selmer.value if r.selmer else None,
            "selmer_kind": r.selmer.kind if r.selmer else None,
            "branch": r.selmer.branch if r.selmer else None,
            "consistent": r.consistent,
        })
    return json.dumps({
        "format_version": FORMAT_VERSION,
        "rows": rows,
        "summary": {
            "total": report.total,
            "passed": report.passed,
            "failed": report.failed,
        },
    }, indent=2) + "\n"
