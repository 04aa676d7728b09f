import statistics

import numpy as np
import pytest

from annmf import (
    AnnealConfig,
    QuboProblem,
    ReverseConfig,
    ShapeError,
    SizeError,
    adaptive_refine,
    brute_force_minimum,
    derive_seed,
    encode_value,
    forward_anneal,
    mean_hamming,
    qubo_energy,
    reverse_anneal,
    reverse_refine,
    t_rev,
)
from annmf.annealer import TEMPERATURE_RATIO

from conftest import RUNNER_UP_W


def encode_state(w, scheme):
    return np.concatenate([encode_value(x, scheme) for x in w])


def zero_qubo(n=6, offset=0.0):
    return QuboProblem(n_vars=n, linear=np.zeros(n), quadratic={}, offset=offset)


class TestConfigs:
    def test_anneal_config_validation(self):
        with pytest.raises(ValueError):
            AnnealConfig(cycles=0)
        with pytest.raises(ValueError):
            AnnealConfig(sweeps_per_cycle=0)
        with pytest.raises(ValueError):
            AnnealConfig(t_final=0.0)
        with pytest.raises(ValueError):
            AnnealConfig(t_initial=1.0, t_final=1.0)

    def test_reverse_config_validation(self):
        with pytest.raises(ValueError):
            ReverseConfig(holding_time=0.0)
        with pytest.raises(ValueError):
            ReverseConfig(holding_time=300.0, holding_max=200.0)
        with pytest.raises(ValueError):
            ReverseConfig(max_attempts=0)

    def test_auto_temperatures(self):
        qubo = QuboProblem(n_vars=2, linear=[3.0, -1.0], quadratic={(0, 1): 2.0})
        t_init, t_fin = AnnealConfig().resolve_temperatures(qubo)
        assert t_init == pytest.approx(5.0)  # max(|3|+|2|, |-1|+|2|)
        assert t_fin == pytest.approx(TEMPERATURE_RATIO * 5.0)
        t_init, t_fin = AnnealConfig().resolve_temperatures(zero_qubo(2))
        assert t_init == 1.0 and t_fin == pytest.approx(TEMPERATURE_RATIO)


class TestDeriveSeed:
    def test_deterministic_and_distinct(self):
        assert derive_seed(42, 7) == derive_seed(42, 7)
        seen = {derive_seed(42, k) for k in range(100)}
        assert len(seen) == 100
        assert derive_seed(42, 0) != derive_seed(43, 0)


class TestBruteForce:
    def test_zero_problem(self):
        q, e = brute_force_minimum(zero_qubo(4, offset=2.5))
        assert np.all(q == 0) and e == 2.5

    def test_single_variable(self):
        qubo = QuboProblem(n_vars=1, linear=[-1.0], quadratic={}, offset=0.5)
        q, e = brute_force_minimum(qubo)
        assert q[0] == 1 and e == pytest.approx(-0.5)

    def test_tie_breaks_to_lowest_integer(self):
        # states (1,0) and (0,1) both score -1; LSB-first ints 1 and 2
        qubo = QuboProblem(n_vars=2, linear=[-1.0, -1.0], quadratic={(0, 1): 2.0})
        q, e = brute_force_minimum(qubo)
        assert e == pytest.approx(-1.0)
        assert list(q) == [1, 0]

    def test_size_cap(self):
        with pytest.raises(SizeError):
            brute_force_minimum(zero_qubo(25))

    def test_matches_direct_enumeration(self):
        rng = np.random.default_rng(3)
        for _ in range(10):
            n = 8
            linear = rng.normal(size=n)
            quad = {
                (i, j): float(rng.normal())
                for i in range(n)
                for j in range(i + 1, n)
                if rng.random() < 0.5
            }
            qubo = QuboProblem(n_vars=n, linear=linear, quadratic=quad, offset=0.25)
            states = (np.arange(1 << n)[:, None] >> np.arange(n)[None, :] & 1).astype(np.int8)
            energies = [qubo_energy(qubo, s) + qubo.offset for s in states]
            q, e = brute_force_minimum(qubo)
            assert e == pytest.approx(min(energies), rel=1e-12)
            assert qubo_energy(qubo, q) + qubo.offset == pytest.approx(e, rel=1e-12)


class TestForward:
    def test_deterministic_and_seed_sensitive(self, reduced_qubo):
        qubo, _ = reduced_qubo
        cfg = AnnealConfig(cycles=20, sweeps_per_cycle=40, seed=5)
        a = forward_anneal(qubo, cfg)
        b = forward_anneal(qubo, cfg)
        assert a.best_energy == b.best_energy
        assert np.array_equal(a.best_q, b.best_q)
        assert [s.energy for s in a.samples] == [s.energy for s in b.samples]
        c = forward_anneal(qubo, AnnealConfig(cycles=20, sweeps_per_cycle=40, seed=6))
        assert [s.energy for s in a.samples] != [s.energy for s in c.samples]

    def test_outcome_structure(self, reduced_qubo):
        qubo, _ = reduced_qubo
        out = forward_anneal(qubo, AnnealConfig(cycles=30, sweeps_per_cycle=25, seed=1))
        assert len(out.samples) == 30
        assert out.best_energy == pytest.approx(min(s.energy for s in out.samples))
        assert out.attempts_used == 0
        assert out.attempt_log == ()
        assert out.modeled_qpu_us == t_rev(1, 0.0, 30)
        for s in out.samples:
            assert qubo_energy(qubo, s.q) + qubo.offset == pytest.approx(
                s.energy, rel=1e-9, abs=1e-12
            )

    def test_finds_small_problem_minimum(self):
        qubo = QuboProblem(
            n_vars=4,
            linear=[1.0, -2.0, 0.5, -0.5],
            quadratic={(0, 1): 1.5, (1, 3): -1.0, (2, 3): 2.0},
            offset=1.0,
        )
        _, target = brute_force_minimum(qubo)
        out = forward_anneal(qubo, AnnealConfig(cycles=40, sweeps_per_cycle=50, seed=0))
        assert out.best_energy == pytest.approx(target, rel=1e-12)


class TestReverse:
    def test_start_state_is_first_sample(self, reduced_qubo):
        qubo, scheme = reduced_qubo
        q0 = np.ones(scheme.n_vars, dtype=np.int8)
        out = reverse_anneal(
            qubo, q0, ReverseConfig(base=AnnealConfig(cycles=5, sweeps_per_cycle=20))
        )
        assert np.array_equal(out.samples[0].q, q0)
        assert len(out.samples) == 6
        assert out.attempts_used == 1

    def test_never_worse_than_start(self, reduced_qubo):
        qubo, scheme = reduced_qubo
        rng = np.random.default_rng(8)
        for trial in range(10):
            q0 = rng.integers(0, 2, size=scheme.n_vars).astype(np.int8)
            e0 = qubo_energy(qubo, q0) + qubo.offset
            out = reverse_anneal(
                qubo,
                q0,
                ReverseConfig(base=AnnealConfig(cycles=5, sweeps_per_cycle=20, seed=trial)),
            )
            assert out.best_energy <= e0 + 1e-12

    def test_zero_problem_keeps_start(self):
        qubo = zero_qubo(5, offset=1.0)
        q0 = np.array([1, 0, 1, 0, 1], dtype=np.int8)
        out = reverse_anneal(
            qubo, q0, ReverseConfig(base=AnnealConfig(cycles=8, sweeps_per_cycle=20))
        )
        assert np.array_equal(out.best_q, q0)
        assert out.best_energy == 1.0

    def test_modeled_time_uses_holding(self, reduced_qubo):
        qubo, scheme = reduced_qubo
        q0 = np.zeros(scheme.n_vars, dtype=np.int8)
        cfg = ReverseConfig(
            holding_time=7.0, base=AnnealConfig(cycles=9, sweeps_per_cycle=20)
        )
        out = reverse_anneal(qubo, q0, cfg)
        assert out.modeled_qpu_us == t_rev(1, 7.0, 9)

    def test_shape_and_value_checks(self, reduced_qubo):
        qubo, scheme = reduced_qubo
        cfg = ReverseConfig(base=AnnealConfig(cycles=2, sweeps_per_cycle=20))
        with pytest.raises(ShapeError):
            reverse_anneal(qubo, np.zeros(3, dtype=np.int8), cfg)
        with pytest.raises(ValueError):
            reverse_anneal(qubo, np.full(scheme.n_vars, 2, dtype=np.int8), cfg)

    def test_cold_quench_stays_at_local_minimum(self, reference_qubo):
        # the runner-up state is a strict 1-flip local minimum; with a tiny
        # holding time the dwell temperature stays far below every uphill
        # step, so all reads collapse back onto the start state
        qubo, scheme = reference_qubo
        q0 = encode_state(RUNNER_UP_W, scheme)
        for r in range(20):
            cfg = ReverseConfig(
                holding_time=1e-6,
                base=AnnealConfig(
                    cycles=10,
                    sweeps_per_cycle=100,
                    t_initial=5.0,
                    t_final=1e-9,
                    seed=900 + r,
                ),
            )
            out = reverse_anneal(qubo, q0, cfg)
            assert np.array_equal(out.best_q, q0)

    def test_longer_holding_searches_wider(self, reference_qubo):
        qubo, scheme = reference_qubo
        q0 = encode_state(RUNNER_UP_W, scheme)
        base = AnnealConfig(
            cycles=10, sweeps_per_cycle=100, t_initial=5.0, t_final=1e-3
        )
        short, long = [], []
        for r in range(25):
            cfg = lambda ht: ReverseConfig(
                holding_time=ht,
                base=AnnealConfig(
                    cycles=base.cycles,
                    sweeps_per_cycle=base.sweeps_per_cycle,
                    t_initial=base.t_initial,
                    t_final=base.t_final,
                    seed=derive_seed(777, r),
                ),
            )
            short.append(reverse_anneal(qubo, q0, cfg(1.0)).mean_hamming)
            long.append(reverse_anneal(qubo, q0, cfg(200.0)).mean_hamming)
        assert np.mean(long) > np.mean(short)


class TestRefinement:
    def test_escalation_ladder_saturates(self):
        # a zero problem never improves, so the dwell doubles until the cap
        qubo = zero_qubo(4)
        q0 = np.zeros(4, dtype=np.int8)
        cfg = ReverseConfig(
            holding_time=1.0,
            max_attempts=12,
            holding_max=200.0,
            base=AnnealConfig(cycles=2, sweeps_per_cycle=20),
        )
        out = adaptive_refine(qubo, q0, cfg)
        holds = [rec.holding_time for rec in out.attempt_log]
        assert holds == [1, 2, 4, 8, 16, 32, 64, 128, 200, 200, 200, 200]
        assert not any(rec.improved for rec in out.attempt_log)

    def test_escalation_resets_after_improvement(self, reduced_qubo):
        qubo, scheme = reduced_qubo
        rng = np.random.default_rng(21)
        saw_reset = False
        for trial in range(6):
            q0 = rng.integers(0, 2, size=scheme.n_vars).astype(np.int8)
            cfg = ReverseConfig(
                holding_time=1.0,
                max_attempts=10,
                base=AnnealConfig(cycles=3, sweeps_per_cycle=30, seed=trial),
            )
            out = adaptive_refine(qubo, q0, cfg)
            log = out.attempt_log
            for prev, cur in zip(log, log[1:]):
                if prev.improved:
                    assert cur.holding_time == cfg.holding_time
                    if prev.holding_time != cfg.holding_time:
                        saw_reset = True
                else:
                    assert cur.holding_time == min(
                        2.0 * prev.holding_time, cfg.holding_max
                    )
        assert saw_reset

    def test_reverse_refine_holds_constant(self):
        qubo = zero_qubo(4)
        cfg = ReverseConfig(
            holding_time=3.0,
            max_attempts=6,
            base=AnnealConfig(cycles=2, sweeps_per_cycle=20),
        )
        out = reverse_refine(qubo, np.zeros(4, dtype=np.int8), cfg)
        assert [rec.holding_time for rec in out.attempt_log] == [3.0] * 6

    def test_target_energy_stops_early(self, reduced_qubo):
        qubo, scheme = reduced_qubo
        q0 = np.zeros(scheme.n_vars, dtype=np.int8)
        e0 = qubo_energy(qubo, q0) + qubo.offset
        cfg = ReverseConfig(
            max_attempts=50, base=AnnealConfig(cycles=2, sweeps_per_cycle=20)
        )
        out = adaptive_refine(qubo, q0, cfg, target_energy=e0)
        assert out.attempts_used == 1

    def test_modeled_time_totals(self, reduced_qubo):
        qubo, scheme = reduced_qubo
        q0 = np.ones(scheme.n_vars, dtype=np.int8)
        cfg = ReverseConfig(
            max_attempts=5, base=AnnealConfig(cycles=4, sweeps_per_cycle=20)
        )
        out = adaptive_refine(qubo, q0, cfg)
        assert out.modeled_qpu_us == pytest.approx(
            sum(rec.modeled_qpu_us for rec in out.attempt_log)
        )
        for rec in out.attempt_log:
            assert rec.modeled_qpu_us == t_rev(1, rec.holding_time, cfg.base.cycles)

    def test_deterministic(self, reduced_qubo):
        qubo, scheme = reduced_qubo
        q0 = np.ones(scheme.n_vars, dtype=np.int8)
        cfg = ReverseConfig(
            max_attempts=6, base=AnnealConfig(cycles=3, sweeps_per_cycle=25, seed=9)
        )
        a = adaptive_refine(qubo, q0, cfg)
        b = adaptive_refine(qubo, q0, cfg)
        assert a.best_energy == b.best_energy
        assert np.array_equal(a.best_q, b.best_q)
        assert a.attempt_log == b.attempt_log

    def test_on_call_sees_every_attempt(self, reduced_qubo):
        qubo, scheme = reduced_qubo
        q0 = np.ones(scheme.n_vars, dtype=np.int8)
        cfg = ReverseConfig(
            max_attempts=4, base=AnnealConfig(cycles=3, sweeps_per_cycle=20)
        )
        calls = []
        out = adaptive_refine(qubo, q0, cfg, on_call=lambda k, o: calls.append((k, o)))
        assert [k for k, _ in calls] == [1, 2, 3, 4]
        # every callback outcome is a single seeded call with q0 prepended
        for _, o in calls:
            assert o.attempts_used == 1
            assert len(o.samples) == cfg.base.cycles + 1
        assert out.attempts_used == 4

    def test_refinement_reaches_exact_optimum(self, reduced_qubo):
        # seeded refinement from forward reads agrees with exhaustive search
        qubo, scheme = reduced_qubo
        _, target = brute_force_minimum(qubo)
        hits = 0
        for trial in range(100):
            seed = derive_seed(4242, trial)
            fwd = forward_anneal(
                qubo, AnnealConfig(cycles=50, sweeps_per_cycle=60, seed=derive_seed(seed, 0))
            )
            cfg = ReverseConfig(
                max_attempts=50,
                base=AnnealConfig(
                    cycles=20, sweeps_per_cycle=60, seed=derive_seed(seed, 1)
                ),
            )
            out = adaptive_refine(qubo, fwd.best_q, cfg, target_energy=target)
            hits += out.best_energy <= target + 1e-12
        assert hits >= 95


class TestMeanHamming:
    def test_hand_example(self):
        assert mean_hamming([(0, 0), (0, 1), (1, 1)]) == 1.0

    def test_needs_two(self):
        with pytest.raises(statistics.StatisticsError):
            mean_hamming([(0, 1)])

    def test_length_mismatch(self):
        with pytest.raises(ShapeError):
            mean_hamming([(0, 0), (0, 1, 1)])
