"""Finite-blocklength simulator of the layered random-binning scheme.

Codebooks of strongly typical sequences, superposition coding and binning at
the main encoder, binning at the helper, joint-typicality decoding at the
receiver, and *exact* per-symbol equivocation H(A^n | J, E^n) computed by
enumeration of the source space at small n.

Strong typicality follows the count-based definition: x^n is delta-typical
when |N(a|x^n)/n - p(a)| <= delta for every symbol and N(a|x^n) = 0 wherever
p(a) = 0; conditional typicality compares N(a,b)/n against N(a|x^n)/n p(b|a).

Everything is deterministic given the configuration seed.  Monte Carlo trials
are drawn in fixed-size shards with per-shard derived seeds, so results do
not depend on the worker count and a longer run extends a shorter one.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import BudgetError, ValidationError
from .probability import DistortionMeasure, JointSource, entropy_unchecked
from .regions import AuxiliarySystem

TRIAL_SHARD = 2048          # trials per seeding shard; fixed for reproducibility
_SAMPLE_BATCH = 4096        # candidate draws per rejection-sampling round
_MAX_SAMPLE_ROUNDS = 500


# ---------------------------------------------------------------------------
# typicality machinery
# ---------------------------------------------------------------------------

def _row_counts(rows: np.ndarray, n_vals: int) -> np.ndarray:
    """Occurrence counts per row of an integer matrix; shape (m, n_vals)."""
    m = rows.shape[0]
    off = (np.arange(m, dtype=np.int64) * n_vals)[:, None]
    flat = (rows.astype(np.int64) + off).ravel()
    return np.bincount(flat, minlength=m * n_vals).reshape(m, n_vals)


def typical_rows(seqs: np.ndarray, probs: np.ndarray, delta: float) -> np.ndarray:
    """Boolean mask of delta-typical rows w.r.t. the distribution ``probs``."""
    seqs = np.atleast_2d(seqs)
    n = seqs.shape[1]
    probs = np.asarray(probs, dtype=float).ravel()
    counts = _row_counts(seqs, probs.size)
    ok = (np.abs(counts / n - probs) <= delta + 1e-12).all(axis=1)
    zero = probs == 0.0
    if zero.any():
        ok &= (counts[:, zero] == 0).all(axis=1)
    return ok


def jointly_typical_rows(x_n: np.ndarray, y_rows: np.ndarray, p_xy: np.ndarray,
                         delta: float) -> np.ndarray:
    """Mask of rows y^n with (x^n, y^n) jointly delta-typical w.r.t. p(x, y)."""
    y_rows = np.atleast_2d(y_rows)
    ky = p_xy.shape[1]
    combined = x_n[None, :] * ky + y_rows
    return typical_rows(combined, p_xy.ravel(), delta)


def conditionally_typical_pairs(x_rows: np.ndarray, y_rows: np.ndarray,
                                p_y_given_x: np.ndarray, delta: float) -> np.ndarray:
    """Mask of row pairs (x^n, y^n) with y^n conditionally typical given x^n.

    Requires |N(a,b)/n - N(a|x^n)/n p(b|a)| <= delta for every (a, b) and
    N(a, b) = 0 wherever p(b|a) = 0.  Vectorized over rows.
    """
    x_rows = np.atleast_2d(x_rows)
    y_rows = np.atleast_2d(y_rows)
    n = y_rows.shape[1]
    kx, ky = p_y_given_x.shape
    nx = _row_counts(x_rows, kx)                              # (m, kx)
    target = nx[:, :, None] / n * p_y_given_x[None, :, :]     # (m, kx, ky)
    combined = x_rows.astype(np.int64) * ky + y_rows
    counts = _row_counts(combined, kx * ky)
    ok = (np.abs(counts / n - target.reshape(counts.shape)) <= delta + 1e-12).all(axis=1)
    zero = p_y_given_x.ravel() == 0.0
    if zero.any():
        ok &= (counts[:, zero] == 0).all(axis=1)
    return ok


def conditionally_typical_rows(x_n: np.ndarray, y_rows: np.ndarray, p_y_given_x: np.ndarray,
                               delta: float) -> np.ndarray:
    """Mask of rows y^n in the conditional typical set given one fixed x^n."""
    y_rows = np.atleast_2d(y_rows)
    x_rows = np.broadcast_to(x_n, y_rows.shape)
    return conditionally_typical_pairs(x_rows, y_rows, p_y_given_x, delta)


# ---------------------------------------------------------------------------
# configuration and instance
# ---------------------------------------------------------------------------

def _pow2_count(n: int, rate: float) -> int:
    """ceil(2^(n rate)) with protection against float fuzz just below integers."""
    v = 2.0 ** (n * rate)
    r = round(v)
    if abs(v - r) < 1e-9:
        return max(1, int(r))
    return max(1, int(math.ceil(v)))


@dataclass(frozen=True)
class CodeConfig:
    """Blocklength, bin rates (r1, r2, rc_link), codebook rates (s1, s2, sc),
    typicality slack and seed for one finite-blocklength code."""

    n: int
    r1: float
    r2: float
    rc_link: float
    s1: float
    s2: float
    sc: float
    delta_n: float | None = None
    seed: int = 0

    def __post_init__(self) -> None:
        if self.n < 1:
            raise ValidationError(f"blocklength must be >= 1, got {self.n}")
        for name in ("r1", "r2", "rc_link", "s1", "s2", "sc"):
            if getattr(self, name) < 0:
                raise ValidationError(f"rate {name} must be non-negative")
        if self.s1 < self.r1 - 1e-12 or self.s2 < self.r2 - 1e-12 or self.sc < self.rc_link - 1e-12:
            raise ValidationError("codebook rates must dominate bin rates (s >= r)")
        if self.delta_n is not None and self.delta_n <= 0:
            raise ValidationError("delta_n must be positive")

    @property
    def delta(self) -> float:
        return self.delta_n if self.delta_n is not None else float(self.n) ** (-1.0 / 3.0)

    @property
    def num_u(self) -> int:
        return _pow2_count(self.n, self.s1)

    @property
    def num_v(self) -> int:
        return _pow2_count(self.n, self.s2)

    @property
    def num_w(self) -> int:
        return _pow2_count(self.n, self.sc)

    @property
    def bins_u(self) -> int:
        return _pow2_count(self.n, self.r1)

    @property
    def bins_v(self) -> int:
        return _pow2_count(self.n, self.r2)

    @property
    def bins_w(self) -> int:
        return _pow2_count(self.n, self.rc_link)


@dataclass(frozen=True)
class AliceEncoding:
    s1: int
    s2: int
    r1: int
    r2: int
    failed_u: bool
    failed_v: bool


@dataclass(frozen=True)
class CharlieEncoding:
    s: int
    r: int
    failed: bool


@dataclass(frozen=True)
class DecodeResult:
    success: bool
    n_matches: int
    s1: int
    s2: int
    s: int
    a_hat: np.ndarray


@dataclass(frozen=True)
class CodeInstance:
    """Realized codebooks, round-robin bin maps and cached statistics."""

    config: CodeConfig
    source: JointSource = field(repr=False)
    system: AuxiliarySystem = field(repr=False)
    u_cb: np.ndarray = field(repr=False)      # (num_u, n)
    v_cb: np.ndarray = field(repr=False)      # (num_u, num_v, n)
    w_cb: np.ndarray = field(repr=False)      # (num_w, n)

    def __post_init__(self) -> None:
        uv = self.system.u_given_v.rows
        va = self.system.v_given_a.rows
        wc = self.system.w_given_c.rows
        p_a = self.source.p_a()
        p_uva = np.einsum("vu,av,a->uva", uv, va, p_a)
        p_u = p_uva.sum(axis=(1, 2))
        with np.errstate(invalid="ignore", divide="ignore"):
            p_va_given_u = np.where(
                p_u[:, None, None] > 0, p_uva / np.where(p_u[:, None, None] > 0, p_u[:, None, None], 1.0), 0.0
            )
            p_v_given_u = p_va_given_u.sum(axis=2)
        object.__setattr__(self, "_p_u", p_u)
        object.__setattr__(self, "_p_ua", p_uva.sum(axis=1))
        object.__setattr__(self, "_p_va_given_u", p_va_given_u)
        object.__setattr__(self, "_p_v_given_u", p_v_given_u)
        p_wc = np.einsum("cw,c->wc", wc, self.source.p_c())
        object.__setattr__(self, "_p_w", p_wc.sum(axis=1))
        object.__setattr__(self, "_p_wc", p_wc)
        object.__setattr__(
            self, "_p_uvw",
            np.einsum("vu,av,cw,ac->uvw", uv, va, wc, self.source.p_ac()),
        )
        cfg = self.config
        object.__setattr__(self, "u_bin", np.arange(cfg.num_u) % cfg.bins_u)
        object.__setattr__(self, "v_bin", np.arange(cfg.num_v) % cfg.bins_v)
        object.__setattr__(self, "w_bin", np.arange(cfg.num_w) % cfg.bins_w)
        object.__setattr__(
            self, "u_bin_members",
            [np.nonzero(self.u_bin == b)[0] for b in range(cfg.bins_u)],
        )
        object.__setattr__(
            self, "v_bin_members",
            [np.nonzero(self.v_bin == b)[0] for b in range(cfg.bins_v)],
        )
        object.__setattr__(
            self, "w_bin_members",
            [np.nonzero(self.w_bin == b)[0] for b in range(cfg.bins_w)],
        )

    @property
    def message_count(self) -> int:
        return self.config.bins_u * self.config.bins_v

    # -- encoding ------------------------------------------------------------

    def encode_alice(self, a_n: np.ndarray) -> AliceEncoding:
        a_n = np.asarray(a_n, dtype=np.int64)
        if a_n.shape != (self.config.n,):
            raise ValidationError(f"sequence must have length {self.config.n}")
        s1_arr, f_u = self._alice_stage1(a_n[None, :])
        s1 = int(s1_arr[0])
        s2_arr, f_v = self._alice_stage2(a_n[None, :], s1_arr)
        s2 = int(s2_arr[0])
        return AliceEncoding(
            s1=s1, s2=s2,
            r1=int(self.u_bin[s1]), r2=int(self.v_bin[s2]),
            failed_u=bool(f_u[0]), failed_v=bool(f_v[0]),
        )

    def _alice_stage1(self, a_rows: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        """First u-codeword jointly typical with each row; fallback 0 on failure."""
        idx = _first_typical(self.u_cb, a_rows, self._p_ua, self.config.delta)
        failed = idx < 0
        return np.where(failed, 0, idx), failed

    def _alice_stage2(self, a_rows: np.ndarray, s1: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        """First v-codeword (within codebook s1) pair-typical with a^n given u^n."""
        m = a_rows.shape[0]
        nv, na = self._p_va_given_u.shape[1:]
        p_pair = self._p_va_given_u.reshape(self._p_va_given_u.shape[0], nv * na)
        result = np.full(m, -1, dtype=np.int64)
        for s2 in range(self.config.num_v):
            open_rows = np.nonzero(result < 0)[0]
            if open_rows.size == 0:
                break
            u_rows = self.u_cb[s1[open_rows]].astype(np.int64)
            v_rows = self.v_cb[s1[open_rows], s2].astype(np.int64)
            pair_rows = v_rows * na + a_rows[open_rows]
            ok = conditionally_typical_pairs(u_rows, pair_rows, p_pair, self.config.delta)
            result[open_rows[ok]] = s2
        failed = result < 0
        return np.where(failed, 0, result), failed

    def encode_charlie(self, c_n: np.ndarray) -> CharlieEncoding:
        c_n = np.asarray(c_n, dtype=np.int64)
        if c_n.shape != (self.config.n,):
            raise ValidationError(f"sequence must have length {self.config.n}")
        s_arr, failed = self._charlie_stage(c_n[None, :])
        s = int(s_arr[0])
        return CharlieEncoding(s=s, r=int(self.w_bin[s]), failed=bool(failed[0]))

    def _charlie_stage(self, c_rows: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        idx = _first_typical(self.w_cb, c_rows, self._p_wc, self.config.delta)
        failed = idx < 0
        return np.where(failed, 0, idx), failed

    def alice_message_index(self, a_n: np.ndarray) -> int:
        """The public message J as a flat integer r1 * bins_v + r2."""
        enc = self.encode_alice(a_n)
        return enc.r1 * self.config.bins_v + enc.r2

    def _alice_message_batch(self, a_rows: np.ndarray) -> np.ndarray:
        s1, _ = self._alice_stage1(a_rows)
        s2, _ = self._alice_stage2(a_rows, s1)
        return self.u_bin[s1] * self.config.bins_v + self.v_bin[s2]

    # -- decoding ------------------------------------------------------------

    def decode_bob(self, j: tuple[int, int], k: int) -> DecodeResult:
        r1, r2 = j
        if not (0 <= r1 < self.config.bins_u and 0 <= r2 < self.config.bins_v
                and 0 <= k < self.config.bins_w):
            raise ValidationError("bin index out of range")
        cands1 = self.u_bin_members[r1]
        cands2 = self.v_bin_members[r2]
        cands_w = self.w_bin_members[k]
        matches = []
        first_candidate = None
        for s1 in cands1:
            for s2 in cands2:
                for s in cands_w:
                    if first_candidate is None:
                        first_candidate = (int(s1), int(s2), int(s))
                    if self._triple_typical(int(s1), int(s2), int(s)):
                        matches.append((int(s1), int(s2), int(s)))
        chosen = matches[0] if matches else first_candidate
        s1, s2, s = chosen
        a_hat = self.system.reconstruction[self.v_cb[s1, s2], self.w_cb[s]]
        return DecodeResult(
            success=len(matches) == 1,
            n_matches=len(matches),
            s1=s1, s2=s2, s=s, a_hat=a_hat,
        )

    def _triple_typical(self, s1: int, s2: int, s: int) -> bool:
        nv, nw = self._p_uvw.shape[1:]
        comb = (self.u_cb[s1] * nv + self.v_cb[s1, s2]) * nw + self.w_cb[s]
        return bool(typical_rows(comb[None, :], self._p_uvw.ravel(), self.config.delta)[0])


def _first_typical(cb: np.ndarray, rows: np.ndarray, p_joint: np.ndarray,
                   delta: float) -> np.ndarray:
    """Index of the first codeword jointly typical with each row, else -1."""
    m, n = rows.shape
    ky = p_joint.shape[1]
    flat_p = p_joint.ravel()
    zero = flat_p == 0.0
    result = np.full(m, -1, dtype=np.int64)
    undecided = np.arange(m)
    for s in range(cb.shape[0]):
        if undecided.size == 0:
            break
        comb = cb[s][None, :].astype(np.int64) * ky + rows[undecided]
        counts = _row_counts(comb, flat_p.size)
        ok = (np.abs(counts / n - flat_p) <= delta + 1e-12).all(axis=1)
        if zero.any():
            ok &= (counts[:, zero] == 0).all(axis=1)
        result[undecided[ok]] = s
        undecided = undecided[~ok]
    return result


# ---------------------------------------------------------------------------
# codebook generation
# ---------------------------------------------------------------------------

def _sample_typical(rng, probs: np.ndarray, count: int, n: int, delta: float,
                    what: str) -> np.ndarray:
    """Draw ``count`` i.i.d. sequences from ``probs``, resampling until typical."""
    probs = np.asarray(probs, dtype=float)
    out = np.empty((count, n), dtype=np.int8)
    filled = 0
    for _ in range(_MAX_SAMPLE_ROUNDS):
        if filled >= count:
            return out
        draw = rng.choice(probs.size, size=(_SAMPLE_BATCH, n), p=probs).astype(np.int8)
        ok = typical_rows(draw, probs, delta)
        good = draw[ok]
        take = min(good.shape[0], count - filled)
        out[filled:filled + take] = good[:take]
        filled += take
    raise ValidationError(
        f"could not sample a delta-typical {what} sequence after "
        f"{_MAX_SAMPLE_ROUNDS * _SAMPLE_BATCH} draws; increase n or delta_n"
    )


def _sample_conditionally_typical(rng, given_rows: np.ndarray, p_y_given_x: np.ndarray,
                                  delta: float, what: str) -> np.ndarray:
    """One conditionally typical row per given row, drawn from prod p(y | x_i)."""
    m, n = given_rows.shape
    cdf = np.cumsum(p_y_given_x, axis=1)
    out = np.empty((m, n), dtype=np.int8)
    open_rows = np.arange(m)
    for _ in range(_MAX_SAMPLE_ROUNDS):
        if open_rows.size == 0:
            return out
        u = rng.random((open_rows.size, n))
        draw = (u[:, :, None] > cdf[given_rows[open_rows]][:, :, :]).sum(axis=2).astype(np.int8)
        ok = conditionally_typical_pairs(given_rows[open_rows], draw, p_y_given_x, delta)
        out[open_rows[ok]] = draw[ok]
        open_rows = open_rows[~ok]
    raise ValidationError(
        f"could not sample a conditionally typical {what} sequence; "
        "increase n or delta_n"
    )


def generate_codebooks(source: JointSource, sys: AuxiliarySystem, cfg: CodeConfig,
                       *, entry_budget: int = 1 << 26) -> CodeInstance:
    """Sample all codebooks for one code realization, deterministically.

    Codewords are drawn i.i.d. from the relevant marginal (conditional for the
    refinement layer) and rejected until delta-typical.  Bins are filled
    round-robin by codeword index, making cell sizes equal up to one.
    """
    entries = (cfg.num_u + cfg.num_u * cfg.num_v + cfg.num_w) * cfg.n
    if entries > entry_budget:
        raise BudgetError(
            f"codebooks need {entries} table entries, above the budget of {entry_budget}"
        )
    na, nc, _ = source.alphabet_sizes
    if sys.v_given_a.input_size != na or sys.w_given_c.input_size != nc:
        raise ValidationError("auxiliary system does not match the source alphabets")
    rng = np.random.default_rng(np.random.SeedSequence((cfg.seed, 0)))
    uv, va, wc = sys.u_given_v.rows, sys.v_given_a.rows, sys.w_given_c.rows
    p_a = source.p_a()
    p_uva = np.einsum("vu,av,a->uva", uv, va, p_a)
    p_u = p_uva.sum(axis=(1, 2))
    with np.errstate(invalid="ignore", divide="ignore"):
        p_v_given_u = np.where(
            p_u[:, None] > 0, p_uva.sum(axis=2) / np.where(p_u[:, None] > 0, p_u[:, None], 1.0), 0.0
        )
    p_w = np.einsum("cw,c->w", wc, source.p_c())

    u_cb = _sample_typical(rng, p_u, cfg.num_u, cfg.n, cfg.delta, "u")
    v_cb = np.empty((cfg.num_u, cfg.num_v, cfg.n), dtype=np.int8)
    for s2 in range(cfg.num_v):
        v_cb[:, s2, :] = _sample_conditionally_typical(rng, u_cb, p_v_given_u, cfg.delta, "v")
    w_cb = _sample_typical(rng, p_w, cfg.num_w, cfg.n, cfg.delta, "w")
    return CodeInstance(config=cfg, source=source, system=sys,
                        u_cb=u_cb, v_cb=v_cb, w_cb=w_cb)


# ---------------------------------------------------------------------------
# exact equivocation by enumeration
# ---------------------------------------------------------------------------

def message_equivocation(source: JointSource, n: int, j_of_seq: np.ndarray,
                         num_messages: int, *, work_budget: int = 1 << 31) -> float:
    """Exact H(A^n | J, E^n)/n in bits for a deterministic message map.

    ``j_of_seq`` assigns a message to every source sequence, indexed by the
    integer code sum_i a_i |A|^(n-1-i).  Uses
    H(A^n | J, E^n) = n H(A, E) - H(J, E^n), valid because J is a function of
    A^n, and accumulates p(J, E^n) one message group at a time so memory stays
    at one |E|^n vector.
    """
    na, _, ne = source.alphabet_sizes
    n_seq = na ** n
    if j_of_seq.shape != (n_seq,):
        raise ValidationError(f"j_of_seq must have shape ({n_seq},)")
    if num_messages < 1 or j_of_seq.min() < 0 or j_of_seq.max() >= num_messages:
        raise ValidationError("message indices must lie in [0, num_messages)")
    if n_seq * (ne ** n) > work_budget:
        raise BudgetError(
            f"equivocation enumeration needs ~{n_seq * ne ** n} accumulation steps, "
            f"above the budget of {work_budget}"
        )
    p_a = source.p_a()
    with np.errstate(invalid="ignore", divide="ignore"):
        pe_rows = np.where(p_a[:, None] > 0, source.p_ae() / np.where(p_a[:, None] > 0, p_a[:, None], 1.0), 0.0)

    order = np.argsort(j_of_seq, kind="stable")
    j_sorted = j_of_seq[order]
    group_bounds = np.nonzero(np.diff(j_sorted))[0] + 1
    groups = np.split(order, group_bounds)

    powers = na ** np.arange(n - 1, -1, -1, dtype=np.int64)

    def digits_of(codes: np.ndarray) -> np.ndarray:
        return ((codes[:, None] // powers[None, :]) % na).astype(np.int64)

    h_je = 0.0
    chunk = max(1, (1 << 22) // (ne ** n))
    for members in groups:
        vec = np.zeros(ne ** n)
        for lo in range(0, members.size, chunk):
            codes = members[lo:lo + chunk]
            dig = digits_of(codes)
            w = np.prod(p_a[dig], axis=1)[:, None]
            for i in range(n):
                w = (w[:, :, None] * pe_rows[dig[:, i]][:, None, :]).reshape(w.shape[0], -1)
            vec += w.sum(axis=0)
        nz = vec[vec > 0]
        if nz.size:
            h_je -= float((nz * np.log2(nz)).sum())
    h_ae = entropy_unchecked(source.p_ae())
    equiv = (n * h_ae - h_je) / n
    h_a_e = h_ae - entropy_unchecked(source.p_e())
    if equiv < -1e-9 or equiv > h_a_e + 1e-9:
        raise RuntimeError(f"equivocation {equiv} outside [0, H(A|E) = {h_a_e}]")
    return min(max(equiv, 0.0), h_a_e)


def encoder_message_table(instance: CodeInstance, *, state_budget: int = 1 << 24,
                          chunk: int = 4096) -> np.ndarray:
    """J for every source sequence a^n, as a flat table indexed by integer code."""
    n = instance.config.n
    na = instance.source.alphabet_sizes[0]
    n_seq = na ** n
    if n_seq > state_budget:
        raise BudgetError(
            f"enumerating {n_seq} source sequences exceeds the budget of {state_budget}"
        )
    powers = na ** np.arange(n - 1, -1, -1, dtype=np.int64)
    out = np.empty(n_seq, dtype=np.int64)
    for lo in range(0, n_seq, chunk):
        codes = np.arange(lo, min(lo + chunk, n_seq), dtype=np.int64)
        dig = ((codes[:, None] // powers[None, :]) % na).astype(np.int64)
        out[lo:lo + dig.shape[0]] = instance._alice_message_batch(dig)
    return out


def exact_equivocation(instance: CodeInstance, source: JointSource, *,
                       state_budget: int = 1 << 24, work_budget: int = 1 << 31) -> float:
    """Exact H(A^n | J, E^n)/n of the realized code, by full enumeration."""
    table = encoder_message_table(instance, state_budget=state_budget)
    return message_equivocation(source, instance.config.n, table,
                                instance.message_count, work_budget=work_budget)


def eve_map_bit_error_rate(instance: CodeInstance, source: JointSource, *,
                           state_budget: int = 1 << 18) -> float:
    """Mean bit error rate of Eve's symbol-wise MAP estimate of A^n from (J, E^n).

    Exact enumeration; binary sources at small n only.  The binary-entropy
    bound h2(BER) >= H(A^n | J, E^n)/n sandwiches the exact equivocation.
    """
    n = instance.config.n
    na, _, ne = source.alphabet_sizes
    if na != 2:
        raise ValidationError("BER bound is defined for the binary Hamming case")
    n_seq = na ** n
    if n_seq * (ne ** n) > state_budget * 64:
        raise BudgetError(f"BER enumeration too large for budget {state_budget}")
    table = encoder_message_table(instance, state_budget=state_budget)
    p_a = source.p_a()
    with np.errstate(invalid="ignore", divide="ignore"):
        pe_rows = np.where(p_a[:, None] > 0, source.p_ae() / np.where(p_a[:, None] > 0, p_a[:, None], 1.0), 0.0)
    powers = na ** np.arange(n - 1, -1, -1, dtype=np.int64)
    codes = np.arange(n_seq, dtype=np.int64)
    dig = ((codes[:, None] // powers[None, :]) % na).astype(np.int64)
    w = np.prod(p_a[dig], axis=1)[:, None]
    for i in range(n):
        w = (w[:, :, None] * pe_rows[dig[:, i]][:, None, :]).reshape(w.shape[0], -1)
    # w[a_code, e_code] = p(a^n, e^n); group over j for posteriors
    ber = 0.0
    for j in np.unique(table):
        rows = np.nonzero(table == j)[0]
        block = w[rows]                      # (m, ne^n)
        total = block.sum(axis=0)            # p(j, e^n)
        for i in range(n):
            mass1 = block[dig[rows, i] == 1].sum(axis=0)
            correct = np.maximum(mass1, total - mass1)
            ber += float((total - correct).sum()) / n
    return ber


# ---------------------------------------------------------------------------
# Monte Carlo experiment
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SimReport:
    n: int
    trials: int
    empirical_distortion: float | None
    decode_error_rate: float | None
    decode_ambiguity_rate: float | None
    encode_failure_rates: dict
    exact_equivocation: float | None

    def __post_init__(self) -> None:
        if self.decode_error_rate is not None and not 0.0 <= self.decode_error_rate <= 1.0:
            raise ValidationError("decode_error_rate must lie in [0, 1]")

    def to_json(self) -> str:
        return json.dumps(
            {
                "n": self.n,
                "trials": self.trials,
                "empirical_distortion": self.empirical_distortion,
                "decode_error_rate": self.decode_error_rate,
                "decode_ambiguity_rate": self.decode_ambiguity_rate,
                "encode_failure_rates": self.encode_failure_rates,
                "exact_equivocation": self.exact_equivocation,
            },
            sort_keys=True,
        )


def _run_shard(args):
    instance, d_table, shard_idx, shard_len = args
    cfg = instance.config
    n = cfg.n
    src = instance.source
    rng = np.random.default_rng(np.random.SeedSequence((cfg.seed, 7, shard_idx)))
    flat = src.probs.ravel()
    # always draw the full shard block so a longer run extends a shorter one
    draw = rng.choice(flat.size, size=(TRIAL_SHARD, n), p=flat)[:shard_len]
    na, nc, ne = src.alphabet_sizes
    a = (draw // (nc * ne)).astype(np.int64)
    c = ((draw // ne) % nc).astype(np.int64)

    s1, fail_u = instance._alice_stage1(a)
    s2, fail_v = instance._alice_stage2(a, s1)
    s, fail_w = instance._charlie_stage(c)

    dist = np.empty(shard_len)
    errors = np.empty(shard_len, dtype=bool)
    ambiguous = np.empty(shard_len, dtype=bool)
    for t in range(shard_len):
        j = (int(instance.u_bin[s1[t]]), int(instance.v_bin[s2[t]]))
        k = int(instance.w_bin[s[t]])
        res = instance.decode_bob(j, k)
        dist[t] = d_table[a[t], res.a_hat].mean()
        correct = (res.n_matches == 1 and res.s1 == s1[t]
                   and res.s2 == s2[t] and res.s == s[t])
        errors[t] = not correct
        ambiguous[t] = res.n_matches > 1
    return {
        "distortion_sum": float(dist.sum()),
        "errors": int(errors.sum()),
        "ambiguous": int(ambiguous.sum()),
        "fail_u": int(fail_u.sum()),
        "fail_v": int(fail_v.sum()),
        "fail_w": int(fail_w.sum()),
        "rows": [
            (int(s1[t]), int(s2[t]), int(s[t]), bool(errors[t]), float(dist[t]))
            for t in range(shard_len)
        ],
    }


def run_experiment(
    source: JointSource,
    sys: AuxiliarySystem,
    d: DistortionMeasure,
    cfg: CodeConfig,
    trials: int,
    *,
    workers: int = 1,
    compute_equivocation: bool = True,
    state_budget: int = 1 << 24,
    work_budget: int = 1 << 31,
    trace_path: str | None = None,
) -> SimReport:
    """Generate one code, run Monte Carlo trials, attach exact equivocation.

    Trials are processed in fixed shards of ``TRIAL_SHARD`` with per-shard
    derived seeds: results are identical for any worker count, and the first
    trials of a longer run coincide with a shorter run.
    """
    from .optimize import parallel_map

    if trials < 0:
        raise ValidationError("trials must be non-negative")
    instance = generate_codebooks(source, sys, cfg)
    shard_args = []
    remaining = trials
    idx = 0
    while remaining > 0:
        ln = min(TRIAL_SHARD, remaining)
        shard_args.append((instance, d.table, idx, ln))
        remaining -= ln
        idx += 1
    results = parallel_map(_run_shard, shard_args, workers)

    equiv = None
    if compute_equivocation:
        equiv = exact_equivocation(instance, source,
                                   state_budget=state_budget, work_budget=work_budget)
    if trials == 0:
        report = SimReport(
            n=cfg.n, trials=0, empirical_distortion=None, decode_error_rate=None,
            decode_ambiguity_rate=None, encode_failure_rates={}, exact_equivocation=equiv,
        )
    else:
        dist = sum(r["distortion_sum"] for r in results) / trials
        report = SimReport(
            n=cfg.n,
            trials=trials,
            empirical_distortion=dist,
            decode_error_rate=sum(r["errors"] for r in results) / trials,
            decode_ambiguity_rate=sum(r["ambiguous"] for r in results) / trials,
            encode_failure_rates={
                "alice_u": sum(r["fail_u"] for r in results) / trials,
                "alice_v": sum(r["fail_v"] for r in results) / trials,
                "charlie": sum(r["fail_w"] for r in results) / trials,
            },
            exact_equivocation=equiv,
        )
    if trace_path is not None:
        with open(trace_path, "w", encoding="utf-8") as fh:
            fh.write("trial,s1,s2,s,decode_error,distortion\n")
            t = 0
            for r in results:
                for row in r["rows"]:
                    fh.write(f"{t},{row[0]},{row[1]},{row[2]},{int(row[3])},{row[4]:.6g}\n")
                    t += 1
    return report
