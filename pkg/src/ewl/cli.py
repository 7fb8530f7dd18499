"""Command-line front end: ``python -m ewl <subcommand> ...``.

Exit status is 0 on success, 1 for usage or parse errors and 2 for domain
errors such as a target outside the cooperative region.
"""

import argparse
from pathlib import Path
import sys

from . import analysis, games, qasm, regions, reproduce
from .quantum import IDENTITY, parse_mixture, parse_strategy
from .reproduce import fmt, format_table


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _game(name):
    if name in games.BUILTIN_GAMES:
        return games.BUILTIN_GAMES[name]
    try:
        return games.load_game(name)
    except (OSError, ValueError) as exc:
        raise UsageError(f"cannot load game {name!r}: {exc}") from None


def _usage(fn, text, what):
    try:
        return fn(text)
    except ValueError as exc:
        raise UsageError(f"bad {what} {text!r}: {exc}") from None


def _vector(v):
    return "(" + ", ".join(fmt(x) for x in v) + ")"


def _floats(text, n, what):
    try:
        vals = [float(t) for t in text.split(",")]
    except ValueError:
        raise UsageError(f"bad {what} {text!r}") from None
    if len(vals) != n:
        raise UsageError(f"{what} needs {n} comma-separated numbers")
    return vals


def _extras(args):
    ext = [_usage(parse_strategy, e, "strategy") for e in args.extra or []]
    ext1 = ext + [_usage(parse_strategy, e, "strategy") for e in args.extra1 or []]
    ext2 = ext + [_usage(parse_strategy, e, "strategy") for e in args.extra2 or []]
    return ext1, ext2


def cmd_payoff(args, out):
    game = _game(args.game)
    s1 = _usage(parse_mixture, args.s1, "strategy")
    s2 = _usage(parse_mixture, args.s2, "strategy")
    if args.method == "circuit":
        from .quantum import mixed_unitary_payoff
        value = mixed_unitary_payoff(game, [s1, s2])
    else:
        value = analysis.mixed_closed_form_payoff(game, s1, s2)
    print(_vector(value), file=out)


def cmd_table(args, out):
    table = analysis.build_extended_bimatrix(_game(args.game), _extras(args))
    if args.out:
        games.save_game(table, args.out)
    print(format_table(table), end="", file=out)


def cmd_nash(args, out):
    game = _game(args.game)
    if args.set or args.scan:
        s_text = args.set or "one_param+[U(pi/2,0,-pi/2)]"
        spec1 = _usage(analysis.parse_strategy_set, s_text, "strategy set")
        spec2 = _usage(analysis.parse_strategy_set, args.set2, "strategy set") if args.set2 else spec1
        if args.grid:
            spec1, spec2 = spec1.with_grid(args.grid), spec2.with_grid(args.grid)
        if args.scan:
            report = analysis.no_pure_equilibrium_scan(game, (spec1, spec2), args.tol)
            print(f"profiles scanned: {report.profiles_scanned}", file=out)
            print(f"survivors: {len(report.survivors)}", file=out)
            for s1, s2 in report.survivors:
                print(f"  ({s1}, {s2})", file=out)
            return
        if not (args.s1 and args.s2):
            raise UsageError("--set needs --s1 and --s2")
        profile = (_usage(parse_mixture, args.s1, "strategy"), _usage(parse_mixture, args.s2, "strategy"))
        profile = tuple(p.components[0][1] if len(p.components) == 1 else p for p in profile)
        verdict = analysis.verify_nash_restricted(game, profile, (spec1, spec2), args.tol)
        player, strategy, gain = verdict.deviation
        print(f"equilibrium: {'yes' if verdict.is_equilibrium else 'no'}", file=out)
        print(f"payoffs: {_vector(verdict.payoffs)}", file=out)
        print(f"best deviation: player {player} -> {strategy} "
              f"(value {fmt(verdict.best_values[player - 1])}, gain {fmt(gain)})", file=out)
        return
    ext1, ext2 = _extras(args)
    if ext1 or ext2:
        game = analysis.build_extended_bimatrix(game, (ext1, ext2))
    result = games.enumerate_equilibria(game)
    for e in result:
        print(f"row={_vector(e.row)} col={_vector(e.col)} payoff={_vector(e.payoff)}", file=out)
    for d in result.diagnostics:
        print(f"note: {d}", file=sys.stderr)


def cmd_region(args, out):
    game = _game(args.game)
    if args.target:
        target = _floats(args.target, 2, "target")
        (s1, s2), residual = regions.achieve_target(game, target)
        print(f"s1={s1} s2={s2} residual={residual:.3g}", file=out)
        return
    if args.mode == "ewl":
        grid = regions.DEFAULT_EWL_GRID
        if args.grid:
            grid = tuple(int(g) for g in _floats(args.grid, 4, "grid"))
        sample = regions.ewl_region_samples(game, grid)
    else:
        sample = games.classical_region_samples(game, args.mode, args.resolution)
    if not args.out:
        raise UsageError("region needs --out")
    regions.export_region(sample, args.out, args.format)
    print(f"{len(sample)} points, hull {[(fmt(x), fmt(y)) for x, y in sample.hull]}", file=out)


def _profile(args):
    s1 = _usage(parse_strategy, args.s1, "strategy") if args.s1 else IDENTITY
    s2 = _usage(parse_strategy, args.s2, "strategy") if args.s2 else IDENTITY
    return s1, s2


def cmd_qasm(args, out):
    text = qasm.emit_ewl_qasm(_profile(args))
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
    else:
        print(text, end="", file=out)


def cmd_shots(args, out):
    if args.qasm:
        try:
            source = Path(args.qasm).read_text(encoding="utf-8")
        except OSError as exc:
            raise UsageError(str(exc)) from None
        circuit = _usage(qasm.parse_qasm, source, "circuit")
    else:
        circuit = qasm.ewl_circuit(_profile(args))
    hist = qasm.simulate_shots(circuit, args.shots, args.seed)
    if args.out:
        hist.write_csv(args.out)
    print(hist.to_csv(), end="", file=out)


def cmd_reproduce(args, out):
    checks = reproduce.reproduce(args.out, args.seed, args.tol)
    print(reproduce.format_report(checks), end="", file=out)
    return 0 if all(c.passed for c in checks) else 3


def build_parser():
    parser = _Parser(prog="ewl", description="EWL quantum games toolkit")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def with_game(p):
        p.add_argument("--game", default="pd", help="builtin pd|mp|bos or a game file")
        return p

    def with_extras(p):
        p.add_argument("--extra", action="append", help="extra strategy for both players")
        p.add_argument("--extra1", action="append", help="extra strategy for player 1 only")
        p.add_argument("--extra2", action="append", help="extra strategy for player 2 only")

    p = with_game(sub.add_parser("payoff", help="EWL payoff of a profile"))
    p.add_argument("--s1", required=True)
    p.add_argument("--s2", required=True)
    p.add_argument("--method", choices=("closed", "circuit"), default="closed")
    p.set_defaults(func=cmd_payoff)

    p = with_game(sub.add_parser("table", help="extended bimatrix over {I, iX} + extras"))
    with_extras(p)
    p.add_argument("--out")
    p.set_defaults(func=cmd_table)

    p = with_game(sub.add_parser("nash", help="equilibria of a (extended) table or restricted verdicts"))
    with_extras(p)
    p.add_argument("--s1")
    p.add_argument("--s2")
    p.add_argument("--set", help="strategy set, e.g. 'one_param+[U(pi/2,0,-pi/2)]'")
    p.add_argument("--set2", help="player 2 strategy set (defaults to --set)")
    p.add_argument("--scan", action="store_true", help="scan all pure profiles of the set")
    p.add_argument("--grid", type=int, help="grid resolution override")
    p.add_argument("--tol", type=float, default=1e-9)
    p.set_defaults(func=cmd_nash)

    p = with_game(sub.add_parser("region", help="sample or export payoff regions"))
    p.add_argument("--mode", choices=("pure", "noncooperative", "cooperative", "ewl"), default="ewl")
    p.add_argument("--resolution", type=int, default=101)
    p.add_argument("--grid", help="EWL grid t1,t2,a1,a2")
    p.add_argument("--format", choices=("csv", "svg"), default="csv")
    p.add_argument("--target", help="x,y payoff point to realise with a pure profile")
    p.add_argument("--out")
    p.set_defaults(func=cmd_region)

    p = sub.add_parser("qasm", help="emit the OpenQASM circuit of a profile")
    p.add_argument("--s1")
    p.add_argument("--s2")
    p.add_argument("--out")
    p.set_defaults(func=cmd_qasm)

    p = sub.add_parser("shots", help="seeded shot histogram of a profile or circuit file")
    p.add_argument("--s1")
    p.add_argument("--s2")
    p.add_argument("--qasm", help="circuit file to simulate instead of a profile")
    p.add_argument("--shots", type=int, default=8192)
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--out")
    p.set_defaults(func=cmd_shots)

    p = sub.add_parser("reproduce", help="run every reference check and write a report")
    p.add_argument("--out", default="ewl-reproduction")
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--tol", type=float, default=1e-9)
    p.set_defaults(func=cmd_reproduce)
    return parser


def run(argv=None, out=None):
    out = out or sys.stdout
    try:
        args = build_parser().parse_args(argv)
        return args.func(args, out) or 0
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (ValueError, IndexError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
