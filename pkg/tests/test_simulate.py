import math

import numpy as np
import pytest

from rdeq import BudgetError, Channel, DistortionMeasure, ValidationError, h2
from rdeq.probability import make_bec_bsc_source, JointSource
from rdeq.regions import AuxiliarySystem, binary_wyner_ziv_point
from rdeq.simulate import (
    CodeConfig,
    conditionally_typical_rows,
    eve_map_bit_error_rate,
    exact_equivocation,
    generate_codebooks,
    jointly_typical_rows,
    message_equivocation,
    run_experiment,
    typical_rows,
)

HAMMING2 = DistortionMeasure.hamming(2)


def degenerate_system():
    return AuxiliarySystem(Channel.constant(1), Channel.constant(2), Channel.constant(3),
                           np.zeros((1, 1), dtype=int))


def wz_system(alpha, w_rows, recon):
    """Single-layer system: U = V = BSC(alpha)(A), coded W from C."""
    return AuxiliarySystem(Channel.identity(2), Channel.bsc(alpha), Channel(w_rows),
                           np.asarray(recon))


# calibrated sweep operating point: single-layer chain at alpha = 0.15 on the
# (p = 0.1, eps = h2(0.1)) source, erasure-thinned ternary W, singleton bins
SWEEP_P = 0.1
SWEEP_ALPHA = 0.15
SWEEP_W = np.array([[0.65, 0.35, 0.0], [0.0, 1.0, 0.0], [0.0, 0.35, 0.65]])
SWEEP_RECON = np.array([[0, 0, 1], [0, 1, 1]])
SWEEP_S1, SWEEP_SC = 0.84, 1.029
# per-n typicality slack, aligned so the integer count windows grow smoothly
SWEEP_DELTA = {8: 0.140, 10: 0.155, 12: 0.190, 14: 0.215}


def sweep_config(n, seed=11):
    return CodeConfig(n=n, r1=SWEEP_S1, r2=0.0, rc_link=SWEEP_SC,
                      s1=SWEEP_S1, s2=0.0, sc=SWEEP_SC,
                      delta_n=SWEEP_DELTA[n], seed=seed)


class TestTypicality:
    def test_typical_rows_counts(self):
        p = np.array([0.5, 0.5])
        seqs = np.array([[0, 1, 0, 1], [0, 0, 0, 0]])
        ok = typical_rows(seqs, p, delta=0.1)
        assert ok.tolist() == [True, False]

    def test_zero_mass_enforced(self):
        p = np.array([1.0, 0.0])
        seqs = np.array([[0, 0, 0, 0], [0, 1, 0, 0]])
        ok = typical_rows(seqs, p, delta=0.9)
        assert ok.tolist() == [True, False]

    def test_joint_counts(self):
        p_xy = np.array([[0.5, 0.0], [0.0, 0.5]])
        x = np.array([0, 1, 0, 1])
        ys = np.array([[0, 1, 0, 1], [1, 0, 1, 0]])
        ok = jointly_typical_rows(x, ys, p_xy, delta=0.05)
        assert ok.tolist() == [True, False]

    def test_conditional_uses_given_counts(self):
        # target is N(a|x)/n p(b|a), not p(a) p(b|a)
        p_y_given_x = np.array([[1.0, 0.0], [0.0, 1.0]])
        x = np.array([0, 0, 0, 1])  # unbalanced given sequence
        y_match = np.array([[0, 0, 0, 1]])
        y_flip = np.array([[0, 0, 1, 1]])
        assert conditionally_typical_rows(x, y_match, p_y_given_x, 0.05)[0]
        assert not conditionally_typical_rows(x, y_flip, p_y_given_x, 0.05)[0]


class TestCodeConfig:
    def test_counts_round_up(self):
        cfg = CodeConfig(n=8, r1=0.5, r2=0.0, rc_link=0.3, s1=0.6, s2=0.0, sc=0.4)
        assert cfg.bins_u == 16
        assert cfg.num_u == 28  # ceil(2^4.8)
        assert cfg.num_v == 1
        assert cfg.delta == pytest.approx(8 ** (-1 / 3))

    def test_rate_validation(self):
        with pytest.raises(ValidationError):
            CodeConfig(n=8, r1=0.7, r2=0.0, rc_link=0.0, s1=0.6, s2=0.0, sc=0.0)
        with pytest.raises(ValidationError):
            CodeConfig(n=0, r1=0.0, r2=0.0, rc_link=0.0, s1=0.0, s2=0.0, sc=0.0)

    def test_realized_bin_rates_within_rounding(self):
        cfg = sweep_config(10)
        assert math.log2(cfg.bins_u) / cfg.n <= cfg.r1 + 1.0 / cfg.n + 1e-12
        assert math.log2(cfg.bins_w) / cfg.n <= cfg.rc_link + 1.0 / cfg.n + 1e-12


class TestCodebooks:
    def test_singleton_alphabet_constant_codebook(self):
        src = make_bec_bsc_source(0.1, 0.3)
        cfg = CodeConfig(n=6, r1=0.0, r2=0.0, rc_link=0.0, s1=0.0, s2=0.0, sc=0.0, seed=3)
        inst = generate_codebooks(src, degenerate_system(), cfg)
        assert inst.u_cb.shape == (1, 6)
        assert np.all(inst.u_cb == 0)

    def test_all_codewords_typical(self):
        src = make_bec_bsc_source(0.1, h2(0.1))
        sys = wz_system(0.2, SWEEP_W, SWEEP_RECON)
        cfg = CodeConfig(n=8, r1=0.5, r2=0.0, rc_link=0.6, s1=0.7, s2=0.0, sc=0.9,
                         delta_n=0.15, seed=5)
        inst = generate_codebooks(src, sys, cfg)
        p_u = np.einsum("av,a->v", Channel.bsc(0.2).rows, src.p_a())
        assert typical_rows(inst.u_cb, p_u, 0.15).all()
        p_w = np.einsum("cw,c->w", SWEEP_W, src.p_c())
        assert typical_rows(inst.w_cb, p_w, 0.15).all()

    def test_deterministic_given_seed(self):
        src = make_bec_bsc_source(0.1, h2(0.1))
        sys = wz_system(0.2, SWEEP_W, SWEEP_RECON)
        cfg = CodeConfig(n=8, r1=0.5, r2=0.0, rc_link=0.6, s1=0.7, s2=0.0, sc=0.9,
                         delta_n=0.15, seed=5)
        a = generate_codebooks(src, sys, cfg)
        b = generate_codebooks(src, sys, cfg)
        assert np.array_equal(a.u_cb, b.u_cb)
        assert np.array_equal(a.v_cb, b.v_cb)
        assert np.array_equal(a.w_cb, b.w_cb)

    def test_bins_round_robin_equal_sizes(self):
        src = make_bec_bsc_source(0.1, h2(0.1))
        sys = wz_system(0.2, SWEEP_W, SWEEP_RECON)
        cfg = CodeConfig(n=8, r1=0.4, r2=0.0, rc_link=0.6, s1=0.7, s2=0.0, sc=0.9,
                         delta_n=0.15, seed=5)
        inst = generate_codebooks(src, sys, cfg)
        sizes = [len(m) for m in inst.u_bin_members]
        assert max(sizes) - min(sizes) <= 1
        assert sum(sizes) == cfg.num_u

    def test_budget_refusal(self):
        src = make_bec_bsc_source(0.1, 0.3)
        sys = wz_system(0.2, SWEEP_W, SWEEP_RECON)
        cfg = CodeConfig(n=20, r1=1.0, r2=0.0, rc_link=1.0, s1=1.0, s2=0.0, sc=1.0)
        with pytest.raises(BudgetError):
            generate_codebooks(src, sys, cfg, entry_budget=1000)

    def test_empty_typical_set_error(self):
        # delta so small that no balanced sequence exists at odd counts
        src = make_bec_bsc_source(0.1, 0.3)
        sys = wz_system(0.2, SWEEP_W, SWEEP_RECON)
        cfg = CodeConfig(n=7, r1=0.2, r2=0.0, rc_link=0.2, s1=0.4, s2=0.0, sc=0.4,
                         delta_n=1e-6, seed=5)
        with pytest.raises(ValidationError):
            generate_codebooks(src, sys, cfg)


class TestEncoding:
    def make_toy(self, n=12, delta=0.20, seed=7):
        # binary toy with a clean helper: C = BSC(0.02)(A), E = BSC(0.25)(A),
        # V = U = BSC(0.11)(A), W = erasure-thinned C (keep 0.7); the
        # reconstruction trusts W unless erased, else V; singleton bins
        src = JointSource.from_channels(np.array([0.5, 0.5]), Channel.bsc(0.02), Channel.bsc(0.25))
        w_rows = np.array([[0.7, 0.3, 0.0], [0.0, 0.3, 0.7]])
        sys = AuxiliarySystem(Channel.identity(2), Channel.bsc(0.11), Channel(w_rows),
                              np.array([[0, 0, 1], [0, 1, 1]]))
        cfg = CodeConfig(n=n, r1=0.80, r2=0.0, rc_link=1.0, s1=0.80, s2=0.0, sc=1.0,
                         delta_n=delta, seed=seed)
        return src, sys, cfg

    def test_atypical_sequence_fails_stage1(self):
        src, sys, cfg = self.make_toy()
        inst = generate_codebooks(src, sys, cfg)
        enc = inst.encode_alice(np.zeros(cfg.n, dtype=int))
        assert enc.failed_u

    def test_degenerate_system_always_succeeds(self):
        src = make_bec_bsc_source(0.1, 0.3)
        cfg = CodeConfig(n=8, r1=0.0, r2=0.0, rc_link=0.0, s1=0.0, s2=0.0, sc=0.0, seed=1)
        inst = generate_codebooks(src, degenerate_system(), cfg)
        enc = inst.encode_alice(np.array([0, 1, 0, 1, 1, 0, 0, 1]))
        assert (enc.s1, enc.s2) == (0, 0)
        assert not enc.failed_u and not enc.failed_v

    def test_failure_rate_small_with_margins(self):
        src, sys, cfg = self.make_toy()
        rep = run_experiment(src, sys, HAMMING2, cfg, trials=4000, compute_equivocation=False)
        assert rep.encode_failure_rates["alice_u"] < 0.1
        assert rep.encode_failure_rates["charlie"] < 0.15

    def test_charlie_singleton(self):
        src = make_bec_bsc_source(0.1, 0.3)
        cfg = CodeConfig(n=8, r1=0.0, r2=0.0, rc_link=0.0, s1=0.0, s2=0.0, sc=0.0, seed=1)
        inst = generate_codebooks(src, degenerate_system(), cfg)
        enc = inst.encode_charlie(np.array([0, 1, 2, 1, 0, 2, 1, 0]))
        assert enc.s == 0 and not enc.failed

    def test_charlie_atypical_sequence_fails(self):
        src, sys, cfg = self.make_toy()
        inst = generate_codebooks(src, sys, cfg)
        enc = inst.encode_charlie(np.zeros(cfg.n, dtype=int))
        assert enc.failed


class TestDecoding:
    def test_singleton_bins_no_ambiguity(self):
        # S = R: every bin holds one codeword, so decoding can never see
        # multiple matches, and a typical triple is returned exactly
        src = JointSource.from_channels(np.array([0.5, 0.5]), Channel.bsc(0.02), Channel.bsc(0.25))
        w_rows = np.array([[0.7, 0.3, 0.0], [0.0, 0.3, 0.7]])
        sys = AuxiliarySystem(Channel.identity(2), Channel.bsc(0.11), Channel(w_rows),
                              np.array([[0, 0, 1], [0, 1, 1]]))
        cfg = CodeConfig(n=12, r1=0.80, r2=0.0, rc_link=1.0, s1=0.80, s2=0.0, sc=1.0,
                         delta_n=0.20, seed=7)
        inst = generate_codebooks(src, sys, cfg)
        rng = np.random.default_rng(0)
        flat = src.probs.ravel()
        matched = 0
        for _ in range(50):
            draw = rng.choice(flat.size, size=cfg.n, p=flat)
            a = draw // 4
            c = (draw // 2) % 2
            enc = inst.encode_alice(a)
            ch = inst.encode_charlie(c)
            res = inst.decode_bob((enc.r1, enc.r2), ch.r)
            assert res.n_matches <= 1
            if res.n_matches == 1:
                assert (res.s1, res.s2, res.s) == (enc.s1, enc.s2, ch.s)
                matched += 1
        assert matched > 20
        rep = run_experiment(src, sys, HAMMING2, cfg, trials=2000, compute_equivocation=False)
        assert rep.decode_ambiguity_rate == 0.0

    def test_ambiguity_grows_when_bin_excess_violates_decode_rate(self):
        # single-layer code with v-bin excess far above I(V;W): the number of
        # in-bin impostors grows with n, so multiple matches become the rule
        src = JointSource.from_channels(np.array([0.5, 0.5]), Channel.bsc(0.2), Channel.bsc(0.25))
        sys = AuxiliarySystem(Channel.identity(2), Channel.bsc(0.11), Channel.bsc(0.1),
                              np.array([[0, 0], [1, 1]]))
        rates = []
        for n in (8, 14):
            cfg = CodeConfig(n=n, r1=0.37, r2=0.0, rc_link=0.65, s1=0.62, s2=0.0, sc=0.65,
                             delta_n=0.14, seed=7)
            rep = run_experiment(src, sys, HAMMING2, cfg, trials=2000, compute_equivocation=False)
            rates.append(rep.decode_ambiguity_rate)
        assert rates[1] > rates[0] + 0.05

    def test_end_to_end_distortion_near_target(self):
        # the toy system is designed for distortion D = 0.11 (quantization
        # noise alpha = 0.11 when the helper output is erased); empirical
        # distortion at n = 12 stays within D + 0.05
        src = JointSource.from_channels(np.array([0.5, 0.5]), Channel.bsc(0.02), Channel.bsc(0.25))
        w_rows = np.array([[0.7, 0.3, 0.0], [0.0, 0.3, 0.7]])
        sys = AuxiliarySystem(Channel.identity(2), Channel.bsc(0.11), Channel(w_rows),
                              np.array([[0, 0, 1], [0, 1, 1]]))
        cfg = CodeConfig(n=12, r1=0.80, r2=0.0, rc_link=1.0, s1=0.80, s2=0.0, sc=1.0,
                         delta_n=0.20, seed=7)
        rep = run_experiment(src, sys, HAMMING2, cfg, trials=10_000, compute_equivocation=False)
        assert rep.empirical_distortion <= 0.11 + 0.05

    def test_bad_bin_index(self):
        src = make_bec_bsc_source(0.1, 0.3)
        cfg = CodeConfig(n=8, r1=0.0, r2=0.0, rc_link=0.0, s1=0.0, s2=0.0, sc=0.0, seed=1)
        inst = generate_codebooks(src, degenerate_system(), cfg)
        with pytest.raises(ValidationError):
            inst.decode_bob((5, 0), 0)


class TestExactEquivocation:
    def test_zero_rate_code_gives_conditional_entropy(self):
        src = make_bec_bsc_source(0.1, h2(0.1))
        cfg = CodeConfig(n=8, r1=0.0, r2=0.0, rc_link=0.0, s1=0.0, s2=0.0, sc=0.0, seed=1)
        inst = generate_codebooks(src, degenerate_system(), cfg)
        assert exact_equivocation(inst, src) == pytest.approx(h2(0.1), abs=1e-9)

    def test_full_disclosure_zero(self):
        src = make_bec_bsc_source(0.1, h2(0.1))
        n = 8
        table = np.arange(2 ** n, dtype=np.int64)
        assert message_equivocation(src, n, table, 2 ** n) == pytest.approx(0.0, abs=1e-9)

    def test_constant_map(self):
        src = make_bec_bsc_source(0.1, h2(0.1))
        n = 8
        table = np.zeros(2 ** n, dtype=np.int64)
        assert message_equivocation(src, n, table, 1) == pytest.approx(h2(0.1), abs=1e-9)

    def test_bounds_always_hold(self):
        src = make_bec_bsc_source(0.1, h2(0.1))
        rng = np.random.default_rng(3)
        n = 6
        table = rng.integers(0, 5, size=2 ** n).astype(np.int64)
        eq = message_equivocation(src, n, table, 5)
        assert 0.0 <= eq <= h2(0.1) + 1e-12

    def test_gap_to_single_letter_shrinks(self):
        # sweep operating point: the n = 8 gap dominates the n = 14 gap
        src = make_bec_bsc_source(SWEEP_P, h2(SWEEP_P))
        sys = wz_system(SWEEP_ALPHA, SWEEP_W, SWEEP_RECON)
        target = binary_wyner_ziv_point(SWEEP_P, h2(SWEEP_P), SWEEP_ALPHA).delta_max
        gaps = []
        for n in (8, 14):
            inst = generate_codebooks(src, sys, sweep_config(n))
            gaps.append(abs(exact_equivocation(inst, src) - target))
        assert gaps[1] <= 0.08
        assert gaps[1] < gaps[0]

    def test_state_budget_refusal(self):
        src = make_bec_bsc_source(0.1, 0.3)
        cfg = CodeConfig(n=8, r1=0.0, r2=0.0, rc_link=0.0, s1=0.0, s2=0.0, sc=0.0, seed=1)
        inst = generate_codebooks(src, degenerate_system(), cfg)
        with pytest.raises(BudgetError):
            exact_equivocation(inst, src, state_budget=100)

    def test_ber_sandwich(self):
        # h2(Eve MAP BER) upper-bounds the exact equivocation
        src = make_bec_bsc_source(SWEEP_P, h2(SWEEP_P))
        sys = wz_system(SWEEP_ALPHA, SWEEP_W, SWEEP_RECON)
        cfg = CodeConfig(n=8, r1=SWEEP_S1, r2=0.0, rc_link=SWEEP_SC,
                         s1=SWEEP_S1, s2=0.0, sc=SWEEP_SC, delta_n=0.14, seed=11)
        inst = generate_codebooks(src, sys, cfg)
        eq = exact_equivocation(inst, src)
        ber = eve_map_bit_error_rate(inst, src)
        assert h2(ber) >= eq - 1e-12


class TestRunExperiment:
    def test_zero_trials_reports_equivocation_only(self):
        src = make_bec_bsc_source(0.1, 0.3)
        cfg = CodeConfig(n=8, r1=0.0, r2=0.0, rc_link=0.0, s1=0.0, s2=0.0, sc=0.0, seed=1)
        rep = run_experiment(src, degenerate_system(), HAMMING2, cfg, trials=0)
        assert rep.trials == 0
        assert rep.empirical_distortion is None
        assert rep.exact_equivocation is not None

    def test_doubling_trials_preserves_prefix(self):
        src = make_bec_bsc_source(0.1, h2(0.1))
        sys = wz_system(SWEEP_ALPHA, SWEEP_W, SWEEP_RECON)
        cfg = sweep_config(8)
        import tempfile, os

        with tempfile.TemporaryDirectory() as td:
            p1 = os.path.join(td, "a.csv")
            p2 = os.path.join(td, "b.csv")
            run_experiment(src, sys, HAMMING2, cfg, trials=500,
                           compute_equivocation=False, trace_path=p1)
            run_experiment(src, sys, HAMMING2, cfg, trials=1000,
                           compute_equivocation=False, trace_path=p2)
            lines1 = open(p1).read().splitlines()
            lines2 = open(p2).read().splitlines()
            assert lines2[: len(lines1)] == lines1

    def test_worker_invariance(self):
        src = make_bec_bsc_source(0.1, h2(0.1))
        sys = wz_system(SWEEP_ALPHA, SWEEP_W, SWEEP_RECON)
        cfg = sweep_config(8)
        a = run_experiment(src, sys, HAMMING2, cfg, trials=600, workers=1,
                           compute_equivocation=False)
        b = run_experiment(src, sys, HAMMING2, cfg, trials=600, workers=2,
                           compute_equivocation=False)
        assert a.to_json() == b.to_json()

    def test_reported_distortion_is_mean_of_per_trial_values(self, tmp_path):
        src = make_bec_bsc_source(0.1, h2(0.1))
        sys = wz_system(SWEEP_ALPHA, SWEEP_W, SWEEP_RECON)
        cfg = sweep_config(8)
        trace = tmp_path / "trace.csv"
        rep = run_experiment(src, sys, HAMMING2, cfg, trials=400,
                             compute_equivocation=False, trace_path=str(trace))
        rows = trace.read_text().strip().split("\n")[1:]
        per_trial = [float(r.split(",")[-1]) for r in rows]
        assert len(per_trial) == 400
        assert np.mean(per_trial) == pytest.approx(rep.empirical_distortion, abs=1e-6)

    def test_report_json_stable(self):
        src = make_bec_bsc_source(0.1, 0.3)
        cfg = CodeConfig(n=8, r1=0.0, r2=0.0, rc_link=0.0, s1=0.0, s2=0.0, sc=0.0, seed=1)
        rep1 = run_experiment(src, degenerate_system(), HAMMING2, cfg, trials=100)
        rep2 = run_experiment(src, degenerate_system(), HAMMING2, cfg, trials=100)
        assert rep1.to_json() == rep2.to_json()
