"""Command line tool: generate and inspect problem sets, run the oracle,
evaluate logs, build generalization-test suites, render panels, and serve
the wire protocol.

Exit status: 0 on success, 1 on I/O or data errors (the offending path is
named), 2 on usage errors.
"""

from __future__ import annotations

import argparse
import json
import os
import subprocess
import sys
import tempfile
from typing import Optional

import numpy as np

from .concept import describe_state
from .core import Position
from .env import EpisodeLog, Environment, TaskParams
from .kb import SUBCATEGORIES, build_kb, kb_dump, load_memory, memory_from_log, save_memory
from .mazegen import GenConfig, generate_set, load_problem_set, save_problem_set, set_statistics
from .metrics import evaluation_report
from .oracle import optimal_plan_length, run_oracle_episode
from .proto import ProtocolClient, Session, run_protocol_oracle, serve_stdio
from .render import DigitBank, render_panel
from .testgen import TEST_BRANCH_DEPTH_MEAN, generate_suite, load_suite, save_suite

_MNIST_IMAGES = "train-images-idx3-ubyte"
_MNIST_LABELS = "train-labels-idx1-ubyte"

_PROFILE_BRANCH_DEPTH = {"train": 2.0, "test": TEST_BRANCH_DEPTH_MEAN}


class _CliError(Exception):
    """Message is already user-facing; main prints it and exits 1."""


def _read(path: str, loader):
    try:
        return loader(path)
    except OSError as err:
        raise _CliError(f"{path}: {err.strerror or err}")
    except ValueError as err:
        raise _CliError(f"{path}: {err}")


def _write(path: str, saver) -> None:
    try:
        saver(path)
    except OSError as err:
        raise _CliError(f"{path}: {err.strerror or err}")


def _positive_int(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError("must be a positive integer")
    return value


def _add_param_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--max-opt-len", type=int, choices=(1, 3, 5), default=5)
    parser.add_argument("--trials", type=_positive_int, default=10)
    parser.add_argument("--max-trial-steps", type=_positive_int, default=200)
    parser.add_argument("--max-episode-steps", type=_positive_int, default=500)
    parser.add_argument("--gamma", type=float, default=0.95)
    parser.add_argument("--goal-reward", type=float, default=100.0)
    parser.add_argument("--invalid-penalty", type=float, default=-5.0)
    parser.add_argument("--shaping-coeff", type=float, default=1.0)


def _params(args: argparse.Namespace) -> TaskParams:
    return TaskParams(
        max_opt_len=args.max_opt_len,
        trials_per_episode=args.trials,
        max_trial_steps=args.max_trial_steps,
        max_episode_steps=args.max_episode_steps,
        gamma=args.gamma,
        goal_reward=args.goal_reward,
        invalid_penalty=args.invalid_penalty,
        shaping_coeff=args.shaping_coeff,
    )


def _add_problem_source(parser: argparse.ArgumentParser) -> None:
    group = parser.add_mutually_exclusive_group(required=True)
    group.add_argument("--set", help="problem-set file")
    group.add_argument("--suite", help="generalization-test suite file")


def _load_mazes(args: argparse.Namespace) -> list:
    if args.set:
        return list(_read(args.set, load_problem_set).mazes)
    suite = _read(args.suite, load_suite)
    return [p.maze for sub in SUBCATEGORIES for p in suite[sub]]


def _digit_bank(mnist_dir: Optional[str]) -> DigitBank:
    root = mnist_dir or os.environ.get("HOPMAZE_MNIST_DIR")
    if root:
        return _read(
            root,
            lambda r: DigitBank.from_idx(
                os.path.join(r, _MNIST_IMAGES), os.path.join(r, _MNIST_LABELS)
            ),
        )
    return DigitBank.synthetic()


def _print_report(report: dict) -> None:
    print(f"episodes: {len(report['episodes'])}")
    for name in ("rho_actions", "rho_goals", "rho_plan"):
        stats = report["summary"][name]
        print(f"  {name:<12} mean {stats['mean']:.4f}   std {stats['std']:.4f}")


def _dump_json(path: Optional[str], payload: dict) -> None:
    if path:
        _write(path, lambda p: json.dump(payload, open(p, "w", encoding="utf-8"), indent=2))


def cmd_gen(args: argparse.Namespace) -> int:
    branch_depth = args.branch_depth_mean
    if branch_depth is None:
        branch_depth = _PROFILE_BRANCH_DEPTH[args.profile]
    cfg = GenConfig(
        grid_size=args.grid_size,
        branch_depth_mean=branch_depth,
        branching_mean=args.branching_mean,
        seed=args.seed,
    )
    problem_set = generate_set(cfg, args.n)
    _write(args.out, lambda p: save_problem_set(problem_set, p))
    print(f"wrote {args.n} mazes to {args.out}")
    return 0


def cmd_stats(args: argparse.Namespace) -> int:
    stats = set_statistics(_read(args.set, load_problem_set))
    print(f"mazes: {stats['mazes']}   panels: {stats['panels']}   branches: {stats['branches']}")
    print("colors:          " + "  ".join(f"{k} {v}" for k, v in stats["color_counts"].items()))
    print("digits:          " + "  ".join(f"{k}:{v}" for k, v in stats["digit_counts"].items()))
    print("digits per panel: " + "  ".join(f"{k}:{v}" for k, v in stats["panel_sizes"].items()))
    print(f"share of panels with 3..6 digits: {stats['share_3_to_6']:.1%}")
    print("branch depths:   " + "  ".join(f"{k}:{v}" for k, v in stats["branch_depths"].items()))
    _dump_json(args.json, stats)
    return 0


def _oracle_in_process(mazes: list, params: TaskParams) -> list[EpisodeLog]:
    return [
        run_oracle_episode(Environment(maze, params, problem_id=pid))
        for pid, maze in enumerate(mazes)
    ]


def _oracle_via_protocol(args: argparse.Namespace, mazes: list, params: TaskParams) -> list[EpisodeLog]:
    source = ["--set", args.set] if args.set else ["--suite", args.suite]
    with tempfile.TemporaryDirectory() as log_dir:
        command = [sys.executable, "-m", "hopmaze.cli", "serve", *source, "--log-dir", log_dir]
        for flag, value in (
            ("--max-opt-len", params.max_opt_len),
            ("--trials", params.trials_per_episode),
            ("--max-trial-steps", params.max_trial_steps),
            ("--max-episode-steps", params.max_episode_steps),
            ("--gamma", params.gamma),
            ("--goal-reward", params.goal_reward),
            ("--invalid-penalty", params.invalid_penalty),
            ("--shaping-coeff", params.shaping_coeff),
        ):
            command += [flag, str(value)]
        server = subprocess.Popen(
            command, stdin=subprocess.PIPE, stdout=subprocess.PIPE, text=True
        )
        try:
            client = ProtocolClient(server.stdin, server.stdout)
            for pid in range(len(mazes)):
                run_protocol_oracle(client, pid, params)
            client.close()
        finally:
            server.stdin.close()
            server.wait()
        logs = [
            _read(os.path.join(log_dir, name), EpisodeLog.load)
            for name in sorted(os.listdir(log_dir))
        ]
    return logs


def cmd_oracle(args: argparse.Namespace) -> int:
    mazes = _load_mazes(args)
    params = _params(args)
    if args.via_protocol:
        logs = _oracle_via_protocol(args, mazes, params)
    else:
        logs = _oracle_in_process(mazes, params)
    if args.log_dir:
        os.makedirs(args.log_dir, exist_ok=True)
        for log in logs:
            _write(
                os.path.join(args.log_dir, f"episode-p{log.problem_id:05d}.jsonl"), log.save
            )
    if args.memory_out:
        memory = [entry for log in logs for entry in memory_from_log(log)]
        _write(args.memory_out, lambda p: save_memory(p, memory))
        print(f"wrote {len(memory)} memory transitions to {args.memory_out}")
    optimal = {
        pid: optimal_plan_length(maze, params.max_opt_len) for pid, maze in enumerate(mazes)
    }
    report = evaluation_report(logs, optimal)
    _print_report(report)
    _dump_json(args.report, report)
    return 0


def cmd_eval(args: argparse.Namespace) -> int:
    mazes = _load_mazes(args)
    paths = []
    for entry in args.logs:
        if os.path.isdir(entry):
            paths += [
                os.path.join(entry, name)
                for name in sorted(os.listdir(entry))
                if name.endswith(".jsonl")
            ]
        else:
            paths.append(entry)
    if not paths:
        raise _CliError(f"{args.logs[0]}: no episode logs found")
    logs = [_read(path, EpisodeLog.load) for path in paths]
    optimal: dict[int, int] = {}
    for log in logs:
        if not 0 <= log.problem_id < len(mazes):
            raise _CliError(f"log problem_id {log.problem_id} is outside the problem set")
        moves = optimal_plan_length(mazes[log.problem_id], log.params.max_opt_len)
        if optimal.setdefault(log.problem_id, moves) != moves:
            raise _CliError(f"conflicting max_opt_len for problem {log.problem_id} across logs")
    report = evaluation_report(logs, optimal)
    _print_report(report)
    _dump_json(args.json, report)
    return 0


def cmd_testgen(args: argparse.Namespace) -> int:
    memory = _read(args.memory, load_memory)
    kb = build_kb(memory, theta=args.theta)
    if args.dump_kb:
        print(kb_dump(kb))
    cfg = GenConfig(
        grid_size=args.grid_size, branch_depth_mean=TEST_BRANCH_DEPTH_MEAN, seed=args.seed
    )
    suite = generate_suite(
        kb, cfg, np.random.default_rng(args.seed), per_category_target=args.per_category
    )
    _write(args.out, lambda p: save_suite(p, suite))
    counts = "  ".join(f"{sub}:{len(suite[sub])}" for sub in SUBCATEGORIES)
    print(f"wrote suite to {args.out}   {counts}")
    return 0


def cmd_render(args: argparse.Namespace) -> int:
    from PIL import Image

    mazes = _load_mazes(args)
    if not 0 <= args.problem < len(mazes):
        raise _CliError(f"problem {args.problem} is outside the file ({len(mazes)} problems)")
    maze = mazes[args.problem]
    cell = Position(*args.cell) if args.cell else maze.start
    if cell not in maze.open_cells:
        raise _CliError(f"cell ({cell.x}, {cell.y}) is not an open cell of problem {args.problem}")
    bank = _digit_bank(args.mnist_dir)
    image = render_panel(
        describe_state(maze, cell),
        bank,
        np.random.default_rng(args.seed),
        heldout=args.heldout,
    )
    data = (image * 255).round().astype(np.uint8)
    _write(args.out, lambda p: Image.fromarray(data).save(p))
    print(f"wrote {args.out}")
    return 0


def cmd_serve(args: argparse.Namespace) -> int:
    mazes = _load_mazes(args)
    bank = _digit_bank(args.mnist_dir) if args.visual else None
    if args.log_dir:
        os.makedirs(args.log_dir, exist_ok=True)
    session = Session(
        mazes,
        params=_params(args),
        digit_bank=bank,
        index_augment=args.index_augment,
        render_seed=args.render_seed,
        heldout_digits=args.heldout,
        log_dir=args.log_dir,
    )
    serve_stdio(session)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="hopmaze", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", help="generate a problem set")
    p.add_argument("--n", type=_positive_int, required=True, help="number of mazes")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--profile", choices=sorted(_PROFILE_BRANCH_DEPTH), default="train")
    p.add_argument("--grid-size", type=_positive_int, default=10)
    p.add_argument("--branching-mean", type=float, default=5.0)
    p.add_argument("--branch-depth-mean", type=float, default=None,
                   help="override the profile's branch depth")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("stats", help="histograms and balance checks for a set")
    p.add_argument("--set", required=True)
    p.add_argument("--json", help="also write the raw statistics table")
    p.set_defaults(func=cmd_stats)

    p = sub.add_parser("oracle", help="run the oracle over a set or suite")
    _add_problem_source(p)
    _add_param_flags(p)
    p.add_argument("--via-protocol", action="store_true",
                   help="drive a spawned protocol server instead of in-process calls")
    p.add_argument("--log-dir", help="write one episode log per problem")
    p.add_argument("--memory-out", help="write the pooled transition memory")
    p.add_argument("--report", help="also write the report as JSON")
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("eval", help="score episode logs against a set or suite")
    _add_problem_source(p)
    p.add_argument("--logs", nargs="+", required=True, help="log files or directories")
    p.add_argument("--json", help="also write the report as JSON")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("testgen", help="build a KB from memory and emit a test suite")
    p.add_argument("--memory", required=True, help="transition memory file")
    p.add_argument("--theta", type=_positive_int, default=3)
    p.add_argument("--per-category", type=_positive_int, default=150)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--grid-size", type=_positive_int, default=10)
    p.add_argument("--dump-kb", action="store_true", help="print the extracted knowledge base")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_testgen)

    p = sub.add_parser("render", help="render one panel to a PNG")
    _add_problem_source(p)
    p.add_argument("--problem", type=int, default=0)
    p.add_argument("--cell", type=int, nargs=2, metavar=("X", "Y"),
                   help="panel cell; defaults to the start")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--heldout", action="store_true", help="sample from the heldout digit pool")
    p.add_argument("--mnist-dir", help="IDX directory (default: $HOPMAZE_MNIST_DIR or synthetic)")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_render)

    p = sub.add_parser("serve", help="serve the line protocol on stdio")
    _add_problem_source(p)
    _add_param_flags(p)
    p.add_argument("--visual", action="store_true", help="include rendered observations")
    p.add_argument("--index-augment", action="store_true")
    p.add_argument("--render-seed", type=int, default=0)
    p.add_argument("--heldout", action="store_true", help="render from the heldout digit pool")
    p.add_argument("--mnist-dir", help="IDX directory (default: $HOPMAZE_MNIST_DIR or synthetic)")
    p.add_argument("--log-dir", help="write completed episode logs here")
    p.set_defaults(func=cmd_serve)

    return parser


def main(argv: Optional[list[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except _CliError as err:
        print(f"error: {err}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    raise SystemExit(main())
