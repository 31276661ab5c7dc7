"""Command-line interface.

Exit codes: 0 success / positive answer, 1 negative analysis answer
(unrealizable, not winning), 2 input or usage error, 3 no assumption can
repair the specification (unsatisfiable, or fairness cannot help).
"""
from __future__ import annotations

import argparse
import sys
from fractions import Fraction
from pathlib import Path

from . import _kernels, structio
from .benchgen import BenchSpec, compare_backends, format_csv, run_benchmark
from .console import ConsoleState, eval_statement
from .errors import (
    NoFairnessAssumptionExists,
    OmegagamesError,
    SpecUnsatisfiable,
)
from .graph import GameGraph
from .pgsolver import export_pgsolver, import_pgsolver
from .solve import almost_sure_solve, cooperative_region
from .strategies import Region
from .synthesis import (
    Assumption,
    apply_fairness,
    assumption_to_streett_automaton,
    check_realizability,
    compute_safety_assumption,
    dpa_to_synthesis_game,
    extract_transducer,
    minimize_fairness,
)

EXIT_OK = 0
EXIT_NEGATIVE = 1
EXIT_INPUT = 2
EXIT_NO_ASSUMPTION = 3


def _load_game(path: str):
    text = Path(path).read_text(encoding="utf-8")
    if text.lstrip().startswith("<"):
        return structio.document_to_game(structio.parse_structure(text))
    return import_pgsolver(text)


def _load_synthesis_game(path: str):
    text = Path(path).read_text(encoding="utf-8")
    doc = structio.parse_structure(text)
    return dpa_to_synthesis_game(structio.dpa_from_document(doc))


def _emit(text: str, out_path):
    if out_path:
        Path(out_path).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _cmd_solve(args) -> int:
    game, obj = _load_game(args.file)
    region, strategy = almost_sure_solve(game, obj, args.player, backend=args.backend)
    print(f"winningRegion {args.player} = {region}")
    if args.strategy:
        print(strategy)
    if game.initial is None:
        return EXIT_OK if region.states else EXIT_NEGATIVE
    return EXIT_OK if game.initial in region else EXIT_NEGATIVE


def _cmd_coop(args) -> int:
    from .objectives import Rabin, Streett
    from .reductions import lar_reduce

    game, obj = _load_game(args.file)
    if isinstance(obj, (Rabin, Streett)):
        lar = lar_reduce(game, obj)
        inner = cooperative_region(lar.game, lar.parity, backend=args.backend)
        states = frozenset(s for s, c in lar.copy_map.items() if c in inner.states)
        region = Region(states, 0, "cooperative")
    else:
        region = cooperative_region(game, obj, backend=args.backend)
    print(f"cooperativeWinningRegion = {region}")
    if game.initial is None:
        return EXIT_OK if region.states else EXIT_NEGATIVE
    return EXIT_OK if game.initial in region else EXIT_NEGATIVE


def _cmd_reduce(args) -> int:
    from .objectives import Rabin, Streett
    from .reductions import lar_reduce, reduce_stochastic_parity

    game, obj = _load_game(args.file)
    if isinstance(obj, (Rabin, Streett)):
        lar = lar_reduce(game, obj)
        game, obj = lar.game, lar.parity
    red = reduce_stochastic_parity(game, obj)
    doc = structio.game_to_document(red.game, red.parity)
    _emit(structio.write_structure(doc), args.output)
    print(
        f"reduced to a 2-player parity game: {red.game.n} states, "
        f"{red.game.edge_count} edges",
        file=sys.stderr,
    )
    return EXIT_OK


def _cmd_synth(args) -> int:
    sg = _load_synthesis_game(args.file)
    if args.what == "check":
        ok, _ = check_realizability(sg, backend=args.backend)
        print("realizable" if ok else "unrealizable")
        return EXIT_OK if ok else EXIT_NEGATIVE
    asm, safe = compute_safety_assumption(sg, backend=args.backend)
    if args.what == "safety":
        print(f"safety assumption: {len(asm.safety_edges)} forbidden edges")
        for edge in sorted(asm.safety_edges):
            print(f"  forbid {sg.describe_edge(edge)}")
        return EXIT_OK
    fair = minimize_fairness(safe, backend=args.backend)
    combined = Assumption(asm.safety_edges, fair.fair_edges)
    if args.what == "fairness":
        print(f"fairness assumption: {len(fair.fair_edges)} fair edges")
        for edge in sorted(fair.fair_edges):
            print(f"  fair {sg.describe_edge(edge)}")
        return EXIT_OK
    if args.what == "assumption":
        automaton = assumption_to_streett_automaton(sg, combined)
        doc = structio.streett_automaton_to_document(automaton)
        _emit(structio.write_structure(doc), args.output)
        return EXIT_OK
    if args.what == "transducer":
        if fair.fair_edges:
            fg = apply_fairness(safe, fair.fair_edges)
            _, strategy = almost_sure_solve(fg.graph, fg.parity, 0, backend=args.backend)
            transducer = extract_transducer(fg, strategy)
        else:
            _, strategy = check_realizability(safe, backend=args.backend)
            transducer = extract_transducer(safe, strategy)
        _emit(str(transducer) + "\n", args.output)
        return EXIT_OK
    raise AssertionError(args.what)


def _int_list(text: str) -> list[int]:
    return [int(part) for part in text.split(",") if part]


def _cmd_bench(args) -> int:
    states = _int_list(args.states)
    edges = _int_list(args.edges)
    if len(states) != len(edges):
        print("--states and --edges need the same number of entries", file=sys.stderr)
        return EXIT_INPUT
    specs = [
        BenchSpec(
            n,
            m,
            args.priorities,
            Fraction(args.prob_frac),
            args.seed,
            args.reps,
        )
        for n, m in zip(states, edges)
    ]
    if args.compare:
        compare_backends(specs, out=sys.stdout)
        return EXIT_OK
    rows = run_benchmark(specs, backend=args.backend, out=sys.stdout)
    if args.csv:
        sys.stdout.write(format_csv(rows))
    return EXIT_OK


def _cmd_repl(args) -> int:
    state = ConsoleState()
    prompt = "> " if sys.stdin.isatty() else ""
    while True:
        try:
            line = input(prompt)
        except EOFError:
            return EXIT_OK
        if line.strip() in ("exit", "quit"):
            return EXIT_OK
        try:
            state, output = eval_statement(state, line)
        except OmegagamesError as exc:
            print(f"error: {exc}")
            continue
        if output:
            print(output)


def _cmd_convert(args) -> int:
    game, obj = _load_game(args.file)
    if args.to == "pgsolver":
        _emit(export_pgsolver(game, obj), args.output)
    else:
        if game.initial is None:
            # PGSolver files carry no initial state; game documents need one
            game = GameGraph(game.owners, game.succ, dict(game.dists), game.labels, 0)
        doc = structio.game_to_document(game, obj)
        _emit(structio.write_structure(doc), args.output)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="omegagames",
        description="Qualitative solver for stochastic omega-regular games "
        "and environment-assumption synthesis.",
    )
    parser.add_argument(
        "--backend",
        choices=["auto", "compiled", "python"],
        default=None,
        help=f"fixpoint kernel to use (available: {', '.join(_kernels.available())})",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", help="almost-sure winning region of a game file")
    p.add_argument("file")
    p.add_argument("--player", type=int, choices=[0, 1], required=True)
    p.add_argument("--strategy", action="store_true", help="also print the witness strategy")
    p.set_defaults(fn=_cmd_solve)

    p = sub.add_parser("coop", help="cooperative winning region (2-player games)")
    p.add_argument("file")
    p.set_defaults(fn=_cmd_coop)

    p = sub.add_parser("reduce", help="reduce to a 2-player parity game")
    p.add_argument("file")
    p.add_argument("-o", "--output")
    p.set_defaults(fn=_cmd_reduce)

    p = sub.add_parser("synth", help="synthesis and environment assumptions")
    p.add_argument("what", choices=["check", "safety", "fairness", "assumption", "transducer"])
    p.add_argument("file", help="deterministic parity automaton (structure file)")
    p.add_argument("-o", "--output")
    p.set_defaults(fn=_cmd_synth)

    p = sub.add_parser("bench", help="seeded random-game benchmark")
    p.add_argument("--states", required=True, help="state count, or comma list")
    p.add_argument("--edges", required=True, help="edge count, or comma list")
    p.add_argument("--priorities", type=int, default=3)
    p.add_argument("--prob-frac", default="0.1", help="fraction of probabilistic states")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--reps", type=int, default=1)
    p.add_argument("--csv", action="store_true", help="also emit machine-readable CSV")
    p.add_argument("--compare", action="store_true", help="compare the available kernels")
    p.set_defaults(fn=_cmd_bench)

    p = sub.add_parser("repl", help="interactive console")
    p.set_defaults(fn=_cmd_repl)

    p = sub.add_parser("convert", help="convert between structure and PGSolver formats")
    p.add_argument("--to", choices=["goal", "pgsolver"], required=True)
    p.add_argument("file")
    p.add_argument("-o", "--output")
    p.set_defaults(fn=_cmd_convert)
    return parser


def cli_main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code not in (0, None) else EXIT_OK
    try:
        return args.fn(args)
    except (SpecUnsatisfiable, NoFairnessAssumptionExists) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NO_ASSUMPTION
    except OmegagamesError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


def main() -> None:
    sys.exit(cli_main())


if __name__ == "__main__":
    main()
