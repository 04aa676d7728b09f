"""Command-line front end.

Four subcommands:

- solve-system: one seeded solve of a linear system's encoded row problem.
- benchmark: many seeded trials of the same problem, with success counted
  when the target state is observed in any annealing read of a trial.
- factorize: run the alternating-sweep factorization in either mode.
- timing: evaluate the modeled annealer-time formulas for given parameters.

All artifacts (CSV, PNG, report.json) land in --out-dir. CSV outputs are
byte-identical across re-runs with the same arguments.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass, replace
from pathlib import Path

import numpy as np

from . import report
from .als import FactorizationConfig, factorize
from .annealer import (
    AnnealConfig,
    AnnealOutcome,
    ReverseConfig,
    adaptive_refine,
    derive_seed,
    forward_anneal,
    reverse_refine,
)
from .encoding import EncodingScheme, build_d_table, decode_row, encode_value
from .errors import AnnmfError, BudgetError, InputError
from .linalg import load_csv, save_csv
from .qubo import (
    HARDWARE_VARIABLE_LIMIT,
    RowProblem,
    build_row_qubo,
    check_variable_budget,
    qubo_energy,
)
from .timing import TimingParams, duration_breakdown, t_factorization, t_rev

__all__ = ["main", "RunReport", "STRATEGIES"]

STRATEGIES = ("forward", "forward+reverse", "adaptive")


@dataclass
class RunReport:
    """What one subcommand run did: echoed command, flag snapshot, RNG seed,
    headline numbers, and the files it wrote."""

    command: str
    config: dict
    seed: int
    summary: dict
    artifacts: list


class _Parser(argparse.ArgumentParser):
    # usage problems are input errors (exit 1), not argparse's default exit 2
    def error(self, message):
        raise InputError(message)


def _shared_flags() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    g = common.add_argument_group("shared options")
    g.add_argument("--seed", type=int, default=0, help="base RNG seed (default 0)")
    g.add_argument("--scale", type=float, default=0.001, help="encoding step size (default 0.001)")
    g.add_argument("--bits", type=int, default=10, help="bits per encoded entry (default 10)")
    g.add_argument("--rank", type=int, default=3, help="number of basis rows (default 3)")
    g.add_argument("--lambda", dest="penalty", type=float, default=1.0,
                   help="sum-to-one penalty weight (default 1)")
    g.add_argument("--cycles", type=int, default=10000,
                   help="reads per forward anneal call (default 10000)")
    g.add_argument("--rev-cycles", type=int, default=None,
                   help="reads per reverse anneal call (default: same as --cycles)")
    g.add_argument("--sweeps", type=int, default=100,
                   help="temperature sweeps per read (default 100)")
    g.add_argument("--max-attempts", type=int, default=50,
                   help="refinement call budget (default 50)")
    g.add_argument("--holding-start", type=float, default=1.0,
                   help="initial holding time in µs (default 1)")
    g.add_argument("--holding-max", type=float, default=200.0,
                   help="holding time cap in µs (default 200)")
    g.add_argument("--trace", action="store_true", help="dump a per-read trace CSV")
    g.add_argument("--out-dir", default=".", help="directory for artifacts (default .)")
    g.add_argument("--no-plot", action="store_true", help="skip figure rendering")
    g.add_argument("--ignore-budget", action="store_true",
                   help="skip the logical-variable budget check")
    return common


def _build_parser() -> _Parser:
    parser = _Parser(
        prog="annmf",
        description="QUBO-encoded non-negative factorization on a simulated annealer",
    )
    common = _shared_flags()
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve-system", parents=[common],
                       help="solve one encoded row problem")
    p.add_argument("h_csv", help="coefficient matrix CSV (rank rows)")
    p.add_argument("v_csv", help="right-hand-side vector CSV (one row or column)")
    p.add_argument("--strategy", choices=STRATEGIES, default="adaptive")
    p.add_argument("--target", default=None,
                   help="comma-separated w to certify, e.g. 0.178,0.333,0.489")
    p.set_defaults(func=cmd_solve_system)

    p = sub.add_parser("benchmark", parents=[common],
                       help="run seeded trials and count target hits")
    p.add_argument("h_csv")
    p.add_argument("v_csv")
    p.add_argument("--strategy", choices=STRATEGIES, default="adaptive")
    p.add_argument("--target", default=None, help="comma-separated target w (required)")
    p.add_argument("--runs", type=int, default=100, help="number of trials (default 100)")
    p.set_defaults(func=cmd_benchmark)

    p = sub.add_parser("factorize", parents=[common],
                       help="alternating-sweep factorization of a CSV matrix")
    p.add_argument("v_csv", help="non-negative target matrix CSV")
    p.add_argument("--mode", choices=("classical", "mixed"), default="mixed")
    p.add_argument("--iterations", type=int, default=50,
                   help="full sweeps to run (default 50)")
    p.add_argument("--stop-tol", type=float, default=0.0,
                   help="stop once the residual reaches this (default 0)")
    p.add_argument("--compare", action="store_true",
                   help="run both modes from the same start and emit a joint CSV")
    p.set_defaults(func=cmd_factorize)

    p = sub.add_parser("timing", parents=[common],
                       help="evaluate the modeled annealer-time formulas")
    p.add_argument("--n-calls", type=int, default=50)
    p.add_argument("--t-h", type=float, default=200.0)
    p.add_argument("--n-cycles", type=int, default=10000)
    p.add_argument("--n-iterations", type=int, default=50)
    p.add_argument("--n-rows", type=int, default=2)
    p.add_argument("--cycle-us", type=float, default=1.0)
    p.set_defaults(func=cmd_timing)
    return parser


def _out_dir(args) -> Path:
    path = Path(args.out_dir)
    path.mkdir(parents=True, exist_ok=True)
    return path


def _scheme(args) -> EncodingScheme:
    return EncodingScheme(rank=args.rank, scale=args.scale, bits=args.bits)


def _config_snapshot(args) -> dict:
    return {k: v for k, v in vars(args).items() if k != "func"}


def _load_vector(path) -> np.ndarray:
    m = load_csv(path)
    if m.rows == 1:
        return m.array[0, :].copy()
    if m.cols == 1:
        return m.array[:, 0].copy()
    raise InputError(f"{path}: expected a single-row or single-column vector, got {m.rows}x{m.cols}")


def _parse_target(text, scheme: EncodingScheme):
    """Comma-separated reals -> (values, encoded bit-vector). Values are
    snapped to the encoding grid; out-of-range components raise."""
    parts = [p.strip() for p in str(text).split(",") if p.strip() != ""]
    try:
        values = [float(p) for p in parts]
    except ValueError:
        raise InputError(f"--target: non-numeric component in {text!r}") from None
    if len(values) != scheme.rank:
        raise InputError(f"--target needs {scheme.rank} components, got {len(values)}")
    bits = np.concatenate([encode_value(x, scheme) for x in values]).astype(np.int8)
    return np.array(values), bits


def _anneal_configs(args, trial_seed: int):
    fwd = AnnealConfig(
        cycles=args.cycles,
        sweeps_per_cycle=args.sweeps,
        seed=derive_seed(trial_seed, 0),
    )
    rev_cycles = args.cycles if args.rev_cycles is None else args.rev_cycles
    rev = ReverseConfig(
        holding_time=args.holding_start,
        max_attempts=args.max_attempts,
        holding_max=args.holding_max,
        base=AnnealConfig(
            cycles=rev_cycles,
            sweeps_per_cycle=args.sweeps,
            seed=derive_seed(trial_seed, 1),
        ),
    )
    return fwd, rev


@dataclass
class _TrialResult:
    outcome: AnnealOutcome
    hit: bool
    best_read_energy: float
    hamming_rows: list
    trace_rows: list


def _run_trial(qubo, args, trial_seed, target_bits, target_energy, collect_trace) -> _TrialResult:
    """One strategy run: forward anneal, then the configured refinement.

    Every read of every call is inspected, so a target counts as hit even
    when a later read moved the solver somewhere else.
    """
    fwd_cfg, rev_cfg = _anneal_configs(args, trial_seed)
    forward = forward_anneal(qubo, fwd_cfg)

    state = {"hit": False, "best": np.inf, "prev": None}
    trace_rows: list = []

    def note_samples(samples):
        for s in samples:
            if s.energy < state["best"]:
                state["best"] = float(s.energy)
            if target_bits is not None and not state["hit"] and np.array_equal(s.q, target_bits):
                state["hit"] = True
            if collect_trace:
                dist = 0 if state["prev"] is None else int(np.sum(s.q != state["prev"]))
                trace_rows.append((len(trace_rows), float(s.energy), dist))
                state["prev"] = s.q

    note_samples(forward.samples)
    outcome = forward
    hamming_rows: list = []
    if args.strategy != "forward":
        refine = adaptive_refine if args.strategy == "adaptive" else reverse_refine
        outcome = refine(
            qubo,
            forward.best_q,
            rev_cfg,
            target_energy=target_energy,
            on_call=lambda attempt, out: note_samples(out.samples),
        )
        hamming_rows = [(rec.holding_time, rec.mean_hamming) for rec in outcome.attempt_log]
        outcome = replace(outcome, modeled_qpu_us=outcome.modeled_qpu_us + forward.modeled_qpu_us)
    return _TrialResult(
        outcome=outcome,
        hit=bool(state["hit"]),
        best_read_energy=float(state["best"]),
        hamming_rows=hamming_rows,
        trace_rows=trace_rows,
    )


def _print_duration(label: str, us: float) -> None:
    us, seconds, hours = duration_breakdown(us)
    print(f"{label}: {us:.1f} µs = {seconds:.4f} s = {hours:.6f} h")


def _finish(args, run: RunReport) -> RunReport:
    path = report.write_json(_out_dir(args) / "report.json", run)
    print(f"report: {path}")
    return run


def cmd_solve_system(args) -> RunReport:
    out_dir = _out_dir(args)
    scheme = _scheme(args)
    if not args.ignore_budget:
        check_variable_budget(scheme, HARDWARE_VARIABLE_LIMIT)
    h = load_csv(args.h_csv)
    v = _load_vector(args.v_csv)
    problem = RowProblem(h=h, v_row=v, penalty=args.penalty, scheme=scheme)
    qubo = build_row_qubo(problem)

    target_values = target_bits = target_energy = None
    if args.target is not None:
        target_values, target_bits = _parse_target(args.target, scheme)
        target_energy = qubo_energy(qubo, target_bits) + qubo.offset

    result = _run_trial(qubo, args, args.seed, target_bits, target_energy, collect_trace=args.trace)
    w = decode_row(result.outcome.best_q, build_d_table(scheme))

    print(f"strategy: {args.strategy}")
    print("w =", ", ".join(f"{x:g}" for x in w))
    print(f"objective = {result.outcome.best_energy:.6e}")
    print(f"refinement attempts: {result.outcome.attempts_used}")
    _print_duration("modeled annealer time", result.outcome.modeled_qpu_us)
    if target_bits is not None:
        print(f"target {', '.join(f'{x:g}' for x in target_values)} hit: "
              f"{'yes' if result.hit else 'no'}")

    artifacts = []
    if args.trace:
        artifacts.append(report.write_csv(
            out_dir / "solve_trace.csv",
            ["cycle", "energy", "hamming_to_prev"],
            result.trace_rows,
        ))
        if not args.no_plot:
            artifacts += report.render_trace_figure(out_dir, "solve", result.trace_rows)

    run = RunReport(
        command="solve-system",
        config=_config_snapshot(args),
        seed=args.seed,
        summary={
            "w": [float(x) for x in w],
            "objective": float(result.outcome.best_energy),
            "attempts_used": int(result.outcome.attempts_used),
            "modeled_qpu_us": float(result.outcome.modeled_qpu_us),
            "target_hit": result.hit if target_bits is not None else None,
            "best_read_energy": result.best_read_energy,
        },
        artifacts=[str(p) for p in artifacts],
    )
    return _finish(args, run)


def cmd_benchmark(args) -> RunReport:
    out_dir = _out_dir(args)
    scheme = _scheme(args)
    if not args.ignore_budget:
        check_variable_budget(scheme, HARDWARE_VARIABLE_LIMIT)
    if args.target is None:
        raise InputError("benchmark requires --target to define trial success")
    if args.runs < 1:
        raise InputError(f"--runs must be at least 1, got {args.runs}")
    h = load_csv(args.h_csv)
    v = _load_vector(args.v_csv)
    problem = RowProblem(h=h, v_row=v, penalty=args.penalty, scheme=scheme)
    qubo = build_row_qubo(problem)
    target_values, target_bits = _parse_target(args.target, scheme)
    target_energy = qubo_energy(qubo, target_bits) + qubo.offset

    trial_rows = []
    hamming_rows = []
    successes = 0
    for i in range(args.runs):
        trial_seed = int(derive_seed(args.seed, i))
        result = _run_trial(qubo, args, trial_seed, target_bits, target_energy,
                            collect_trace=False)
        successes += int(result.hit)
        trial_rows.append((
            trial_seed,
            args.strategy,
            int(result.hit),
            int(result.outcome.attempts_used),
            float(result.outcome.best_energy),
            result.best_read_energy,
        ))
        hamming_rows.extend((i, ht, mh) for ht, mh in result.hamming_rows)

    print(f"strategy: {args.strategy}")
    print(f"target state reached in {successes}/{args.runs} trials")

    artifacts = [
        report.write_csv(
            out_dir / "benchmark_trials.csv",
            ["seed", "strategy", "success", "attempts", "final_objective", "best_energy"],
            trial_rows,
        ),
        report.write_csv(
            out_dir / "benchmark_hamming.csv",
            ["trial", "holding_time_us", "mean_hamming"],
            hamming_rows,
        ),
    ]
    if not args.no_plot:
        artifacts += report.render_benchmark_figures(
            out_dir, "benchmark", successes, args.runs - successes, hamming_rows)

    run = RunReport(
        command="benchmark",
        config=_config_snapshot(args),
        seed=args.seed,
        summary={
            "strategy": args.strategy,
            "runs": args.runs,
            "successes": successes,
            "target": [float(x) for x in target_values],
        },
        artifacts=[str(p) for p in artifacts],
    )
    return _finish(args, run)


def _factorization_config(args, mode: str) -> FactorizationConfig:
    rev_cycles = args.cycles if args.rev_cycles is None else args.rev_cycles
    return FactorizationConfig(
        rank=args.rank,
        max_iterations=args.iterations,
        mode=mode,
        penalty=args.penalty,
        scheme=_scheme(args),
        anneal=AnnealConfig(cycles=args.cycles, sweeps_per_cycle=args.sweeps),
        reverse=ReverseConfig(
            holding_time=args.holding_start,
            max_attempts=args.max_attempts,
            holding_max=args.holding_max,
            base=AnnealConfig(cycles=rev_cycles, sweeps_per_cycle=args.sweeps),
        ),
        seed=args.seed,
        stop_tol=args.stop_tol,
        budget_limit=None if args.ignore_budget else HARDWARE_VARIABLE_LIMIT,
    )


def cmd_factorize(args) -> RunReport:
    out_dir = _out_dir(args)
    v = load_csv(args.v_csv)
    artifacts = []

    if args.compare:
        histories = {}
        for mode in ("classical", "mixed"):
            histories[mode] = factorize(v, _factorization_config(args, mode))
            hist = histories[mode]
            print(f"{mode}: best residual {hist.best_residual:.6e} "
                  f"at iteration {hist.best_iteration} ({len(hist.records)} ran)")
        rows = []
        classical, mixed = histories["classical"], histories["mixed"]
        c_cum = classical.qpu_us_cumulative()
        m_cum = mixed.qpu_us_cumulative()
        for i in range(max(len(classical.records), len(mixed.records))):
            c = classical.records[i] if i < len(classical.records) else None
            m = mixed.records[i] if i < len(mixed.records) else None
            rows.append((
                i + 1,
                c.residual if c else "",
                c_cum[i] if c else "",
                m.residual if m else "",
                m_cum[i] if m else "",
            ))
        artifacts.append(report.write_csv(
            out_dir / "factorize_compare.csv",
            ["iteration", "classical_residual", "classical_qpu_us_cumulative",
             "mixed_residual", "mixed_qpu_us_cumulative"],
            rows,
        ))
        if not args.no_plot:
            artifacts += report.render_history_figure(
                out_dir, "factorize",
                {m: h.records for m, h in histories.items()})
        summary = {
            mode: {
                "best_residual": h.best_residual,
                "best_iteration": h.best_iteration,
                "iterations_run": len(h.records),
                "modeled_qpu_us": h.qpu_us_total,
            }
            for mode, h in histories.items()
        }
    else:
        hist = factorize(v, _factorization_config(args, args.mode))
        print(f"mode: {args.mode}")
        print(f"best residual {hist.best_residual:.6e} at iteration "
              f"{hist.best_iteration} ({len(hist.records)} ran)")
        for i in range(hist.best_w.rows):
            print("w row:", ", ".join(f"{x:g}" for x in hist.best_w.array[i, :]))
        _print_duration("modeled annealer time", hist.qpu_us_total)
        cum = hist.qpu_us_cumulative()
        artifacts.append(report.write_csv(
            out_dir / "factorize_history.csv",
            ["iteration", "residual", "qpu_us_cumulative"],
            [(r.iteration, r.residual, cum[i]) for i, r in enumerate(hist.records)],
        ))
        w_path = out_dir / "factorize_w.csv"
        h_path = out_dir / "factorize_h.csv"
        save_csv(hist.best_w, w_path)
        save_csv(hist.best_h, h_path)
        artifacts += [w_path, h_path]
        if not args.no_plot:
            artifacts += report.render_history_figure(
                out_dir, "factorize", {args.mode: hist.records})
        summary = {
            "mode": args.mode,
            "best_residual": hist.best_residual,
            "best_iteration": hist.best_iteration,
            "iterations_run": len(hist.records),
            "modeled_qpu_us": hist.qpu_us_total,
        }

    run = RunReport(
        command="factorize",
        config=_config_snapshot(args),
        seed=args.seed,
        summary=summary,
        artifacts=[str(p) for p in artifacts],
    )
    return _finish(args, run)


def cmd_timing(args) -> RunReport:
    params = TimingParams(
        n_calls=args.n_calls,
        t_h=args.t_h,
        n_cycles=args.n_cycles,
        n_iterations=args.n_iterations,
        n_rows=args.n_rows,
        cycle_us=args.cycle_us,
    )
    per_row = t_rev(params.n_calls, params.t_h, params.n_cycles, params.cycle_us)
    total = t_factorization(params.n_iterations, params.n_rows, per_row)
    print(f"worst case for {params.n_calls} calls, {params.t_h:g} µs holding, "
          f"{params.n_cycles} cycles, {params.cycle_us:g} µs each:")
    _print_duration("  one row solve", per_row)
    print(f"scaled by {params.n_iterations} iterations x {params.n_rows} rows:")
    _print_duration("  full factorization", total)

    run = RunReport(
        command="timing",
        config=_config_snapshot(args),
        seed=args.seed,
        summary={"t_rev_us": float(per_row), "t_factorization_us": float(total)},
        artifacts=[],
    )
    return _finish(args, run)


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        args.func(args)
        return 0
    except BudgetError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (AnnmfError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except Exception as exc:  # pragma: no cover - internal invariant violations
        print(f"internal error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
