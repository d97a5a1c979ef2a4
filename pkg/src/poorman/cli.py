"""Command-line interface.  Every command writes CSV (or JSON for ``generate``)."""

from __future__ import annotations

import argparse
import csv
import io
import logging
import sys
from pathlib import Path
from typing import Optional, Sequence

from .budget import INF, format_budget
from .closed_forms import race_threshold, tow2_threshold, tow3_threshold
from .dag import solve_dag
from .experiments import EXPERIMENTS, run_experiment
from .game import Game, InvalidGameError, NotADagError, dump_game, load_game, parse_spec
from .iteration import cheapest_moves, solve, winning_bids, winning_moves
from .oracle import Oracle, OracleLimitError
from .periodicity import detect_period, predict_period_dag
from .ratios import ratios_dag

ENGINES = ("scan", "binary", "dag", "oracle")


class _Table:
    """Uniform accessor over solver tables and oracle rows."""

    def __init__(self, rows):
        self._rows = rows

    def __call__(self, v, b):
        return self._rows[v][b]


def _game(args) -> Game:
    if args.game:
        return load_game(args.game)
    if args.gen:
        return parse_spec(args.gen)
    raise SystemExit("error: one of --gen or --game is required")


def _solve(g: Game, b2: int, engine: str):
    if engine == "scan":
        return solve(g, b2, mode="scan")
    if engine == "binary":
        return solve(g, b2, mode="binary_search")
    if engine == "dag":
        return solve_dag(g, b2)
    if engine == "oracle":
        return _Table(Oracle(g).table(b2))
    raise ValueError(f"unknown engine {engine!r}")


def _vertices(g: Game, names: Optional[list[str]]) -> list[int]:
    if not names:
        return list(range(g.n_vertices))
    return [g.index(n) for n in names]


def _emit(text: str, out: Optional[str]) -> None:
    if out and out != "-":
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _csv(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([format_budget(x) if not isinstance(x, str) else x for x in row])
    return buf.getvalue()


def _one_vertex(g: Game, args) -> int:
    if args.vertex:
        return g.index(args.vertex[0])
    if g.root is None:
        raise SystemExit("error: --vertex is required for games without a unique root")
    return g.root


def cmd_solve(args) -> int:
    g = _game(args)
    t = _solve(g, args.b2, args.engine)
    vs = _vertices(g, args.vertex)
    rows = [[b] + [t(v, b) for v in vs] for b in range(args.b2 + 1)]
    _emit(_csv(["b2"] + [g.name(v) for v in vs], rows), args.output)
    if hasattr(t, "iterations"):
        logging.info("iterations: %d", t.iterations)
    return 0


def cmd_bids(args) -> int:
    g = _game(args)
    v = _one_vertex(g, args)
    t = _solve(g, args.b2, args.engine)
    rows = []
    for b in range(args.b2 + 1):
        T = t(v, b)
        if T is INF or v == g.target:
            rows.append([b, T, "", ""])
            continue
        bids = winning_bids(g, t, v, b)
        rows.append([b, T, bids.low, bids.high])
    _emit(_csv(["b2", "threshold", "low", "high"], rows), args.output)
    return 0


def cmd_moves(args) -> int:
    g = _game(args)
    v = _one_vertex(g, args)
    t = _solve(g, args.b2, args.engine)
    rows = []
    for b in range(args.b2 + 1):
        T = t(v, b)
        if T is INF or v == g.target:
            rows.append([b, T, "", ""])
            continue
        moves = ";".join(sorted(g.name(u) for u in winning_moves(g, t, v, b)))
        cheap = ";".join(sorted(g.name(u) for u in cheapest_moves(g, t, v, b)))
        rows.append([b, T, moves, cheap])
    _emit(_csv(["b2", "threshold", "winning_moves", "cheapest_moves"], rows), args.output)
    return 0


def cmd_ratios(args) -> int:
    g = _game(args)
    r = ratios_dag(g)
    rows = []
    for v in _vertices(g, args.vertex):
        x = r[v]
        rows.append([g.name(v), "inf", "inf"] if x is INF else [g.name(v), x.numerator, x.denominator])
    _emit(_csv(["vertex", "numerator", "denominator"], rows), args.output)
    return 0


def cmd_period(args) -> int:
    g = _game(args)
    vs = _vertices(g, args.vertex)
    rows = []
    if args.predict:
        specs = predict_period_dag(g)
        for v in vs:
            s = specs[v]
            rows.append([g.name(v)] + (["", "", ""] if s is None else [s.b_start, s.u_x, s.u_y]))
    else:
        if args.b2 is None:
            raise SystemExit("error: --detect needs --b2")
        t = _solve(g, args.b2, args.engine if args.engine != "oracle" else "binary")
        for v in vs:
            s = detect_period(t, v, min_periods=args.min_periods)
            rows.append([g.name(v)] + (["", "", ""] if s is None else [s.b_start, s.u_x, s.u_y]))
    _emit(_csv(["vertex", "B_start", "u_x", "u_y"], rows), args.output)
    return 0


def cmd_closed_form(args) -> int:
    b2 = args.b2
    if args.family == "race":
        rows = [[b, race_threshold(args.x, args.y, b)] for b in range(b2 + 1)]
        header = ["b2", f"v_{{{args.x},{args.y}}}"]
    elif args.family == "tow2":
        rows = [[b, tow2_threshold(1, b), tow2_threshold(2, b)] for b in range(b2 + 1)]
        header = ["b2", "k=1", "k=2"]
    else:
        rows = [[b] + [tow3_threshold(k, b) for k in (1, 2, 3)] for b in range(1, b2 + 1)]
        header = ["b2", "k=1", "k=2", "k=3"]
    _emit(_csv(header, rows), args.output)
    return 0


def cmd_experiment(args) -> int:
    kw = {}
    if args.vertex and args.name in ("conjecture-diff", "conjecture-bids"):
        kw["vertex"] = args.vertex[0]
    rep = run_experiment(args.name, b2=args.b2, **kw)
    _emit(rep.to_csv(), args.output)
    for key, val in rep.notes.items():
        print(f"# {key}: {val}", file=sys.stderr)
    for key, ok in rep.summary.items():
        print(f"{'PASS' if ok else 'FAIL'} {key}", file=sys.stderr)
    return 0 if rep.passed else 1


def cmd_generate(args) -> int:
    g = parse_spec(args.spec)
    text = dump_game(g) + "\n"
    _emit(text, args.output)
    return 0


def cmd_oracle(args) -> int:
    g = _game(args)
    o = Oracle(g, limit=args.limit)
    if args.b1 is not None:
        v = _one_vertex(g, args)
        m = o.matrix(v, args.b1, args.b2)
        print(f"# winner: {o.winner(v, args.b1, args.b2)}", file=sys.stderr)
        rows = [[b1] + list(row) for b1, row in enumerate(m.entries)]
        _emit(_csv(["b1\\b2"] + [str(b) for b in range(args.b2 + 1)], rows), args.output)
        return 0
    vs = _vertices(g, args.vertex)
    table = o.table(args.b2)
    rows = [[b] + [table[v][b] for v in vs] for b in range(args.b2 + 1)]
    _emit(_csv(["b2"] + [g.name(v) for v in vs], rows), args.output)
    return 0


def _add_game_args(p: argparse.ArgumentParser, b2_required: bool = True) -> None:
    src = p.add_mutually_exclusive_group()
    src.add_argument("--gen", metavar="SPEC", help="race:a:b | tow:n | choice:<spec>,<spec> | pipe-violation")
    src.add_argument("--game", metavar="FILE", help="JSON game file")
    p.add_argument("--b2", type=int, required=b2_required, help="largest opponent budget")
    p.add_argument("--vertex", action="append", help="vertex name (repeatable)")
    p.add_argument("-o", "--output", help="output path (default stdout)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="poorman", description=__doc__)
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", help="threshold table")
    _add_game_args(p)
    p.add_argument("--engine", choices=ENGINES, default="binary")
    p.set_defaults(func=cmd_solve)

    for name, func, helptext in (
        ("bids", cmd_bids, "winning-bid interval per budget"),
        ("moves", cmd_moves, "winning moves per budget"),
    ):
        p = sub.add_parser(name, help=helptext)
        _add_game_args(p)
        p.add_argument("--engine", choices=ENGINES[:3], default="binary")
        p.set_defaults(func=func)

    p = sub.add_parser("ratios", help="continuous ratios of a DAG")
    _add_game_args(p, b2_required=False)
    p.set_defaults(func=cmd_ratios)

    p = sub.add_parser("period", help="predicted or detected climbing periods")
    _add_game_args(p, b2_required=False)
    mode = p.add_mutually_exclusive_group(required=True)
    mode.add_argument("--predict", action="store_true")
    mode.add_argument("--detect", action="store_true")
    p.add_argument("--engine", choices=ENGINES[:3], default="binary")
    p.add_argument("--min-periods", type=int, default=3)
    p.set_defaults(func=cmd_period)

    p = sub.add_parser("closed-form", help="closed-form thresholds")
    p.add_argument("family", choices=("race", "tow2", "tow3"))
    p.add_argument("--b2", type=int, required=True)
    p.add_argument("--x", type=int, default=1)
    p.add_argument("--y", type=int, default=1)
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_closed_form)

    p = sub.add_parser("experiment", help="reproduction experiments")
    p.add_argument("name", choices=sorted(EXPERIMENTS))
    p.add_argument("--b2", type=int)
    p.add_argument("--vertex", action="append")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_experiment)

    p = sub.add_parser("generate", help="write a generated game as JSON")
    p.add_argument("spec")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("oracle", help="brute-force thresholds or a bidding matrix")
    _add_game_args(p)
    p.add_argument("--b1", type=int, help="print the bidding matrix at (vertex, b1, b2)")
    p.add_argument("--limit", type=int, default=2_000_000)
    p.set_defaults(func=cmd_oracle)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(message)s")
    try:
        return args.func(args)
    except (InvalidGameError, NotADagError, OracleLimitError, KeyError, ValueError, OSError) as exc:
        msg = exc.args[0] if isinstance(exc, KeyError) and exc.args else exc
        print(f"error: {msg}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
