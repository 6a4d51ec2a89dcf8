"""Chunked, table-driven enumeration of a whole polynomial family.

One pass over b in F_q^(d-s-1) produces every aggregate the statistics
modules need, as exact integers:

  sum_v, sum_v2     brute-force first and second moments (unnormalized)
  hist_n[N]         #{(b, c) : N_b(c) = N} over all q values c per b
  prod_a[m][n]      sum_b A_m(b) A_n(b), A_k(b) = sum_c C(N_b(c), k)
  gamma_closed[r]   |Gamma_r^*(F_q)|: ordered r-tuples (with repeats)
                    whose multiset divides f_b + b0, summed over (b, b0)

The per-chunk kernel is vectorized with numpy over the field tables;
chunks reduce by integer addition, so results are independent of the
chunk partition and of the worker count.  Chunk length is capped so
every int64 intermediate stays far from overflow.

Root multiplicities enter only through critical points (f_b'(t) = 0),
which are located in bulk; their exact multiplicities come from a
cascade of Hasse derivative evaluations (characteristic-safe).
"""

from __future__ import annotations

import multiprocessing
import os
from dataclasses import dataclass
from math import comb

import numpy as np

from .errors import BudgetExceeded
from .family import FamilySpec
from .gf import TABLE_LIMIT, parse_descriptor

MAX_CHUNK = 65536
DEFAULT_BUDGET = 10**6


def falling(n: int, r: int) -> int:
    out = 1
    for i in range(r):
        out *= n - i
    return out if r <= n else 0


@dataclass(frozen=True)
class FamilyStats:
    key: str
    q: int
    d: int
    s: int
    n_b: int
    sum_v: int
    sum_v2: int
    hist_n: tuple
    prod_a: tuple
    gamma_closed: tuple

    def chi(self, r: int) -> int:
        """Incidence count sum_{(b,c)} C(N_b(c), r)."""
        return sum(h * comb(n, r) for n, h in enumerate(self.hist_n))

    def gamma_open(self, r: int) -> int:
        """|Gamma_r(F_q)|: ordered r-tuples of distinct roots."""
        return sum(h * falling(n, r) for n, h in enumerate(self.hist_n))

    def s_mn(self, m: int, n: int) -> int:
        """sum_b [A_m A_n - sum_c C(N,m)C(N,n)]: the c1 != c2 incidences."""
        same_c = sum(h * comb(k, m) * comb(k, n) for k, h in enumerate(self.hist_n))
        return self.prod_a[m - 1][n - 1] - same_c


def exact_tuple_counts(caps, n_simple: int, d: int):
    """W_r for r = 1..d: ordered r-tuples from a multiset of roots.

    caps lists the multiplicities of the non-simple roots; n_simple
    roots have multiplicity 1.  W_r = sum over multiplicity choices of
    the multinomial r!/prod(m_i!), the ordered-tuple count.
    """
    w = [0] * (d + 1)
    w[0] = 1
    for cap in caps:
        nw = [0] * (d + 1)
        for j in range(d + 1):
            acc = 0
            for m in range(0, min(cap, j) + 1):
                if w[j - m]:
                    acc += comb(j, m) * w[j - m]
            nw[j] = acc
        w = nw
    out = [0] * (d + 1)
    for j in range(d + 1):
        acc = 0
        for m in range(0, j + 1):
            if w[j - m]:
                acc += comb(j, m) * falling(n_simple, m) * w[j - m]
        out[j] = acc
    return out[1:]


def _delta2_table(d: int):
    """Correction per class with one double root among N distinct roots."""
    table = np.zeros((d + 1, d), dtype=np.int64)
    for n in range(1, d + 1):
        exact = exact_tuple_counts([2], n - 1, d)
        for r in range(1, d + 1):
            table[n][r - 1] = exact[r - 1] - falling(n, r)
    return table


_WORKER_CACHE: dict = {}


def _chunk_kernel(task):
    (descriptor, d, s, a, lo, hi, with_gamma) = task
    cache_key = (descriptor, d, s, a)
    ctx = _WORKER_CACHE.get(cache_key)
    if ctx is None:
        gf = parse_descriptor(descriptor)
        spec = FamilySpec(gf, d, s, a)
        add_t = gf.add_table()
        mul_t = gf.mul_table()
        # coefficient of T^i in f_b for non-free positions; None marks a
        # free b column
        coef = [None] * (d + 1)
        coef[0] = 0
        coef[d] = 1
        for i, c in enumerate(a):
            coef[d - 1 - i] = c
        delta2 = _delta2_table(d)
        ctx = (gf, spec, add_t, mul_t, coef, delta2)
        _WORKER_CACHE[cache_key] = ctx
    gf, spec, add_t, mul_t, coef, delta2 = ctx
    q, p = gf.q, gf.p
    L = spec.free_len
    n_chunk = hi - lo

    idx = np.arange(lo, hi, dtype=np.int64)
    digits = np.zeros((n_chunk, L), dtype=np.int32)
    for j in range(L - 1, -1, -1):  # column j holds b_{d-s-1-j}
        idx, rem = np.divmod(idx, q)
        digits[:, j] = rem

    def col_for(i):
        # free coefficient b_i sits at digit column d-s-1-i
        return digits[:, d - s - 1 - i][:, None]

    t_row = np.arange(q, dtype=np.int32)[None, :]

    def horner(coef_seq):
        """coef_seq: scalars or (n_chunk, 1) columns, highest degree first."""
        first = coef_seq[0]
        if isinstance(first, np.ndarray):
            acc = np.broadcast_to(first, (n_chunk, q)).copy()
        else:
            acc = np.full((n_chunk, q), first, dtype=np.int32)
        for c in coef_seq[1:]:
            acc = add_t[mul_t[acc, t_row], c]
        return acc

    # values of f_b on all of F_q
    f_seq = []
    for i in range(d, -1, -1):
        f_seq.append(coef[i] if coef[i] is not None else col_for(i))
    val = horner(f_seq)

    # per-b histogram of values, then histogram of root counts N
    flat = (np.arange(n_chunk, dtype=np.int64)[:, None] * q + val).ravel()
    nmat = np.bincount(flat, minlength=n_chunk * q).reshape(n_chunk, q)
    v_per_b = (nmat > 0).sum(axis=1, dtype=np.int64)
    sum_v = int(v_per_b.sum())
    sum_v2 = int((v_per_b * v_per_b).sum())

    hist_n = np.bincount(nmat.ravel(), minlength=d + 1)
    assert len(hist_n) <= d + 1, "a fiber exceeded d roots"
    hist_n = hist_n.astype(object)

    flat_h = (np.arange(n_chunk, dtype=np.int64)[:, None] * (d + 1) + nmat).ravel()
    h_per_b = np.bincount(flat_h, minlength=n_chunk * (d + 1)).reshape(
        n_chunk, d + 1
    )
    binom = np.array(
        [[comb(n, k) for k in range(1, d + 1)] for n in range(d + 1)],
        dtype=np.int64,
    )
    a_cols = h_per_b @ binom
    prod_a = a_cols.T @ a_cols

    gamma_corr = [0] * d
    n_crit = 0
    if with_gamma and d >= 2:
        # critical points: f_b'(t) = 0; these are the only places where
        # f_b - f_b(t) has a multiple root
        dseq = []
        for i in range(d, 0, -1):
            emb = (i % p) if p else 0
            if coef[i] is not None:
                dseq.append(gf.mul(emb, coef[i]))
            else:
                dseq.append(mul_t[emb, digits[:, d - s - 1 - i]][:, None])
        der = horner(dseq)
        rows, ts = np.nonzero(der == 0)
        n_crit = len(rows)
        if n_crit:
            ts = ts.astype(np.int32)
            cvals = val[rows, ts]
            nvals = nmat[rows, cvals]
            mults = _multiplicity_cascade(
                gf, coef, digits, rows, ts, d, s, add_t, mul_t
            )
            gamma_corr = _gamma_corrections(
                rows, cvals, nvals, mults, delta2, d
            )

    return (
        sum_v,
        sum_v2,
        [int(x) for x in hist_n],
        [[int(x) for x in row] for row in prod_a],
        gamma_corr,
        n_crit,
    )


def _multiplicity_cascade(gf, coef, digits, rows, ts, d, s, add_t, mul_t):
    """Exact multiplicity of t in f_b - f_b(t) for critical pairs.

    The multiplicity is the smallest j >= 1 with nonvanishing j-th Hasse
    derivative at t; j = 1 vanished by construction, so start at 2 and
    refine the still-tied pairs level by level.
    """
    p = gf.p
    n_pairs = len(rows)
    mult = np.full(n_pairs, 2, dtype=np.int64)
    pending = np.arange(n_pairs)
    for j in range(2, d + 1):
        if not len(pending):
            break
        sub_rows = rows[pending]
        sub_ts = ts[pending]
        acc = None
        for i in range(d, j - 1, -1):
            emb = comb(i, j) % p
            if coef[i] is not None:
                c = gf.mul(emb, coef[i])
                c_vec = None
            else:
                c_vec = mul_t[emb, digits[sub_rows, d - s - 1 - i]]
                c = None
            if acc is None:
                acc = (
                    np.full(len(pending), c, dtype=np.int32)
                    if c_vec is None
                    else c_vec.astype(np.int32)
                )
            else:
                acc = mul_t[acc, sub_ts]
                acc = add_t[acc, c if c_vec is None else c_vec]
        still = acc == 0
        mult[pending[still]] = j + 1
        pending = pending[still]
    return mult


def _gamma_corrections(rows, cvals, nvals, mults, delta2, d):
    """Replace the all-simple tuple counts on classes with multiple roots."""
    order = np.lexsort((cvals, rows))
    rows_s, cvals_s, nvals_s, mults_s = (
        rows[order],
        cvals[order],
        nvals[order],
        mults[order],
    )
    keys = rows_s.astype(np.int64) * (int(cvals_s.max()) + 1) + cvals_s
    boundaries = np.flatnonzero(np.diff(keys)) + 1
    starts = np.concatenate(([0], boundaries))
    ends = np.concatenate((boundaries, [len(keys)]))
    single = (ends - starts) == 1
    simple_double = single & (mults_s[starts] == 2)

    gamma_corr = np.zeros(d, dtype=np.int64)
    counts = np.bincount(nvals_s[starts[simple_double]], minlength=d + 1)
    gamma_corr += counts @ delta2
    gamma_corr = [int(x) for x in gamma_corr]

    hard = np.flatnonzero(~simple_double)
    for ci in hard:
        caps = mults_s[starts[ci] : ends[ci]].tolist()
        n_distinct = int(nvals_s[starts[ci]])
        exact = exact_tuple_counts(caps, n_distinct - len(caps), d)
        for r in range(1, d + 1):
            gamma_corr[r - 1] += exact[r - 1] - falling(n_distinct, r)
    return gamma_corr


def _merge(results, d):
    sum_v = sum_v2 = 0
    hist = [0] * (d + 1)
    prod = [[0] * d for _ in range(d)]
    corr = [0] * d
    crit = 0
    for sv, sv2, h, pa, gc, nc in results:
        sum_v += sv
        sum_v2 += sv2
        for i, x in enumerate(h):
            hist[i] += x
        for i in range(d):
            for j in range(d):
                prod[i][j] += pa[i][j]
        for i, x in enumerate(gc):
            corr[i] += x
        crit += nc
    return sum_v, sum_v2, hist, prod, corr, crit


def default_workers() -> int:
    env = os.environ.get("VSLAB_WORKERS")
    if env:
        return max(1, int(env))
    return 1


def collect_stats(
    spec: FamilySpec,
    workers: int | None = None,
    budget: int | None = DEFAULT_BUDGET,
    chunk_size: int | None = None,
    with_gamma: bool = True,
) -> FamilyStats:
    """Run the family sweep and assemble exact aggregate statistics."""
    if spec.q > TABLE_LIMIT:
        raise ValueError("the enumeration engine needs table-backed fields")
    n_b = spec.n_b
    if budget is not None and n_b > budget:
        raise BudgetExceeded(
            f"{spec.key}: {n_b} free vectors exceed the budget {budget}"
        )
    if workers is None:
        workers = default_workers()
    if chunk_size is None:
        chunk_size = min(MAX_CHUNK, max(1024, 4_000_000 // spec.q))
    d = spec.d

    tasks = [
        (spec.field.descriptor, d, spec.s, spec.a, lo, min(lo + chunk_size, n_b),
         with_gamma)
        for lo in range(0, n_b, chunk_size)
    ]
    if workers > 1 and len(tasks) > 1:
        ctx = multiprocessing.get_context("fork")
        with ctx.Pool(workers) as pool:
            results = pool.map(_chunk_kernel, tasks, chunksize=1)
    else:
        results = [_chunk_kernel(t) for t in tasks]
    sum_v, sum_v2, hist, prod, corr, _ = _merge(results, d)

    gamma_closed = []
    for r in range(1, d + 1):
        base = sum(h * falling(n, r) for n, h in enumerate(hist))
        gamma_closed.append(base + corr[r - 1])

    return FamilyStats(
        key=spec.key,
        q=spec.q,
        d=d,
        s=spec.s,
        n_b=n_b,
        sum_v=sum_v,
        sum_v2=sum_v2,
        hist_n=tuple(hist),
        prod_a=tuple(tuple(row) for row in prod),
        gamma_closed=tuple(gamma_closed),
    )
