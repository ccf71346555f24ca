"""Command-line front end.

Exit status: 0 on success, 1 when a game fails validation, a solve does not
converge or an input file cannot be used, 2 on usage errors.
"""
from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from .analysis import (
    DemandPath,
    asymptotic_decomposition,
    build_limit_game,
    degrees,
    find_gauge,
    gauge_check,
    mdg_components,
    price_of_anarchy,
)
from .analysis.limits import Gauge
from .equilibrium import SolverConfig, solve_so, solve_wardrop
from .game import Game, average_cost, check_demand, total_cost, validate_game
from .harness import builtin_game, convergence_report, parse_grid, random_game, scale_poa
from .ingest import enumerate_paths, read_tntp

log = logging.getLogger("ncgame")


class InputError(Exception):
    """Bad input content (exit status 1)."""


def parse_demand(spec: str) -> dict:
    """``"g1:10,g2:5"`` or ``"@file.json"`` (a JSON object group -> volume)."""
    if spec.startswith("@"):
        try:
            data = json.loads(Path(spec[1:]).read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise InputError(f"cannot read demand file: {exc}") from None
        if not isinstance(data, dict):
            raise InputError("demand file must hold a JSON object")
        return {str(k): float(v) for k, v in data.items()}
    out = {}
    for item in filter(None, (p.strip() for p in spec.split(","))):
        key, sep, val = item.rpartition(":")
        if not sep or not key:
            raise argparse.ArgumentTypeError(f"bad demand entry {item!r}; expected group:volume")
        try:
            out[key] = float(val)
        except ValueError:
            raise argparse.ArgumentTypeError(f"bad volume in {item!r}") from None
    if not out:
        raise argparse.ArgumentTypeError("empty demand")
    return out


def _demand_arg(spec: str):
    # files are read later so that a missing file is an input error, not a usage error
    return spec if spec.startswith("@") else parse_demand(spec)


def _positive_int(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}") from None
    if v < 1:
        raise argparse.ArgumentTypeError("must be >= 1")
    return v


def _load_game(path) -> Game:
    try:
        return Game.load(path)
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror or exc}") from None
    except (json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
        raise InputError(f"{path} is not a valid game file: {exc}") from None


def _load_path(path) -> DemandPath:
    try:
        return DemandPath.load(path)
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror or exc}") from None
    except (json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
        raise InputError(f"{path} is not a valid demand path: {exc}") from None


def _config(args) -> SolverConfig:
    return SolverConfig(tol=args.tol, max_iter=args.max_iter, method=args.method)


def _write(text: str, out) -> None:
    if out:
        Path(out).write_text(text if text.endswith("\n") else text + "\n")
    else:
        sys.stdout.write(text if text.endswith("\n") else text + "\n")


def _require_valid(game: Game) -> bool:
    rep = validate_game(game)
    if not rep.ok:
        print(f"invalid game:\n{rep}", file=sys.stderr)
    return rep.ok


# -- subcommands --------------------------------------------------------------


def cmd_validate(args) -> int:
    rep = validate_game(_load_game(args.game))
    print(rep)
    return 0 if rep.ok else 1


def cmd_solve(args) -> int:
    game = _load_game(args.game)
    if not _require_valid(game):
        return 1
    demand = _resolve_demand(game, args.demand)
    solver = solve_wardrop if args.mode == "we" else solve_so
    res = solver(game, demand, _config(args))
    out = res.to_dict(game)
    out["total_cost"] = total_cost(game, res.profile)
    if sum(demand.values()) > 0:
        out["average_cost"] = average_cost(game, demand, res.profile)
    _write(json.dumps(out, indent=2), args.output)
    return 0 if res.converged else 1


def _resolve_demand(game, demand):
    d = parse_demand(demand) if isinstance(demand, str) else demand
    try:
        check_demand(game, d)
    except ValueError as exc:
        raise InputError(str(exc)) from None
    return d


def cmd_poa(args) -> int:
    game = _load_game(args.game)
    if not _require_valid(game):
        return 1
    demand = _resolve_demand(game, args.demand)
    try:
        res = price_of_anarchy(game, demand, _config(args))
    except ValueError as exc:
        raise InputError(str(exc)) from None
    if args.json:
        _write(res.to_json(indent=2), args.output)
    else:
        poa = "undefined" if res.poa is None else f"{res.poa:.10g}"
        _write(
            f"poa = {poa}\nC_ne = {res.C_ne:.10g}\nC_so = {res.C_so:.10g}\n"
            f"gap_ne = {res.ne.gap:.3g}\ngap_so = {res.so.gap:.3g}",
            args.output,
        )
    return 0 if res.ne.converged and res.so.converged else 1


def cmd_scale(args) -> int:
    game = _load_game(args.game)
    if not _require_valid(game):
        return 1
    path = _load_path(args.path)
    try:
        grid = parse_grid(args.grid)
        run = scale_poa(game, path, grid, _config(args), record_time=not args.no_timing, workers=args.workers)
    except ValueError as exc:
        raise InputError(str(exc)) from None
    _write(run.to_csv(), args.csv)
    if args.json:
        Path(args.json).write_text(run.to_json(indent=2) + "\n")
    if args.report:
        try:
            dec = asymptotic_decomposition(game, path)
        except ValueError:
            dec = None
        try:
            print(convergence_report(run, dec), file=sys.stderr)
        except ValueError as exc:
            print(f"no convergence report: {exc}", file=sys.stderr)
    return 0 if all(r.converged for r in run.records) else 1


def _fmt(v):
    return "-" if v is None else str(v)


def analyze(game: Game, path: DemandPath, config: SolverConfig | None = None) -> dict:
    """Everything ``analyze`` prints, as plain data."""
    deg = degrees(game)
    dec = asymptotic_decomposition(game, path)
    out = {
        "degrees": {
            "resource": {a: _fmt(v) for a, v in deg.resource.items()},
            "group": {k: _fmt(v) for k, v in deg.group.items()},
        },
        "mdg_components": mdg_components(game),
        "decomposition": dec.to_dict(),
        "decomposition_table": dec.render(),
    }
    path_gauge = find_gauge(game, path=path)
    out["path_gauge"] = None if path_gauge is None else path_gauge.to_dict()
    out["phase_gauges"] = {}
    limits = {}
    for ph, pd in zip(path.phases, dec.phases):
        single = DemandPath([type(ph)(1, 0, ph.terms)])
        gauge = find_gauge(game, path=single)
        out["phase_gauges"][ph.residue] = None if gauge is None else gauge.to_dict()
        base = pd.levels[0]
        scaling = Gauge() if base.alpha_index is None else Gauge(1.0, base.alpha[0], base.alpha[1])
        lg = build_limit_game(game, path, ph.residue, scaling)
        entry = lg.to_dict()
        if lg.valid:
            entry["well_designed"] = lg.is_well_designed(config)
        limits[ph.residue] = entry
    out["limit_games"] = limits
    if path_gauge is not None:
        out["path_gauge_report"] = gauge_check(game, path, path_gauge).to_dict()
    return out


def cmd_analyze(args) -> int:
    game = _load_game(args.game)
    if not _require_valid(game):
        return 1
    path = _load_path(args.path)
    try:
        data = analyze(game, path, _config(args))
    except ValueError as exc:
        raise InputError(str(exc)) from None
    if args.json:
        data = {k: v for k, v in data.items() if k != "decomposition_table"}
        _write(json.dumps(data, indent=2, default=str), args.output)
        return 0
    lines = ["degrees (resource): " + ", ".join(f"{a}={v}" for a, v in data["degrees"]["resource"].items())]
    lines.append("degrees (group): " + ", ".join(f"{k}={v}" for k, v in data["degrees"]["group"].items()))
    lines.append("MDG components: " + " | ".join(",".join(c) for c in data["mdg_components"]))
    lines.append("")
    lines.append("asymptotic decomposition")
    lines.append(data["decomposition_table"])
    lines.append("")
    for r, lg in data["limit_games"].items():
        head = f"limit game, phase {r}, g = T^{lg['gauge']['rho']}"
        if lg["valid"]:
            lims = ", ".join(f"{a}: {_limit_str(v)}" for a, v in lg["limits"].items())
            lines.append(f"{head}: valid; {lims}; well designed = {lg.get('well_designed')}")
        else:
            lines.append(f"{head}: {lg['condition']} fails ({lg['reason']})")
    pg = data["path_gauge"]
    lines.append("")
    lines.append(f"single gauge for the whole path: {'none' if pg is None else _gauge_str(pg)}")
    for r, g in data["phase_gauges"].items() if len(data["phase_gauges"]) > 1 else ():
        lines.append(f"  phase {r} alone: {'none' if g is None else _gauge_str(g)}")
    _write("\n".join(lines), args.output)
    return 0


def _limit_str(d):
    if d["kind"] == "power":
        return f"{d['coefficient']:g}*x^{d['exponent']}"
    return "0" if d["kind"] == "zero" else "inf"


def _gauge_str(d):
    return str(Gauge(d["c"], d["rho"], d["beta"]))


def cmd_ingest(args) -> int:
    try:
        net, trips = read_tntp(args.net, args.trips)
    except OSError as exc:
        raise InputError(f"cannot read input: {exc}") from None
    except ValueError as exc:
        raise InputError(str(exc)) from None
    game, demand = enumerate_paths(net, trips, args.k)
    rep = validate_game(game)
    game.save(args.output)
    demand_out = args.demand_output or str(Path(args.output).with_suffix("")) + ".demand.json"
    Path(demand_out).write_text(json.dumps(demand, indent=2) + "\n")
    print(
        f"{net.n_nodes} nodes, {net.n_links} links, {game.n_groups} OD groups, "
        f"{game.n_strategies} paths -> {args.output} (demand: {demand_out}); validation: {rep}"
    )
    return 0 if rep.ok else 1


def cmd_corpus(args) -> int:
    if args.name == "random":
        game = random_game(args.seed, tuple(args.sizes), args.max_degree)
    else:
        try:
            game = builtin_game(args.name)
        except (KeyError, ValueError) as exc:
            raise InputError(str(exc)) from None
    _write(game.to_json(indent=2), args.output)
    return 0


# -- parser -------------------------------------------------------------------


def _solver_flags(p):
    g = p.add_argument_group("solver")
    g.add_argument("--tol", type=float, default=1e-9, help="relative gap tolerance (default 1e-9)")
    g.add_argument("--max-iter", type=_positive_int, default=10_000, help="iteration cap (default 10000)")
    g.add_argument("--method", choices=("pairwise", "frank_wolfe"), default="pairwise")


def _version() -> str:
    from importlib.metadata import PackageNotFoundError, version

    try:
        return version("artifact")
    except PackageNotFoundError:
        return "unknown"


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="ncgame", description="Non-atomic congestion games: equilibria, PoA and asymptotics.")
    ap.add_argument("--version", action="version", version=f"%(prog)s {_version()}")
    ap.add_argument("-v", "--verbose", action="store_true", help="log solver progress")
    sub = ap.add_subparsers(dest="command", metavar="command", required=True)

    p = sub.add_parser("validate", help="check a game file against the model assumptions")
    p.add_argument("game")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("solve", help="Wardrop equilibrium or system optimum")
    p.add_argument("game")
    p.add_argument("--mode", choices=("we", "so"), default="we")
    p.add_argument("--demand", required=True, type=_demand_arg, help='"group:volume,..." or @file.json')
    p.add_argument("-o", "--output", help="write JSON here instead of stdout")
    _solver_flags(p)
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("poa", help="price of anarchy at one demand vector")
    p.add_argument("game")
    p.add_argument("--demand", required=True, type=_demand_arg, help='"group:volume,..." or @file.json')
    p.add_argument("--json", action="store_true", help="print JSON")
    p.add_argument("-o", "--output")
    _solver_flags(p)
    p.set_defaults(func=cmd_poa)

    p = sub.add_parser("scale", help="PoA along a demand path (CSV)")
    p.add_argument("game")
    p.add_argument("--path", required=True, help="demand path JSON")
    p.add_argument("--grid", default="1:16384:geometric", help="a:b:geometric[:num] or a:b:linear[:step]")
    p.add_argument("--csv", help="CSV output file (stdout if omitted)")
    p.add_argument("--json", help="JSON mirror of the records")
    p.add_argument("--no-timing", action="store_true", help="write 0 in the ms column (byte-stable output)")
    p.add_argument("--report", action="store_true", help="print a convergence report to stderr")
    p.add_argument("--workers", type=_positive_int, default=None, help="threads (default: $NCGAME_THREADS or 1)")
    _solver_flags(p)
    p.set_defaults(func=cmd_scale)

    p = sub.add_parser("analyze", help="degrees, MDG components, decomposition, limit games, gauges")
    p.add_argument("game")
    p.add_argument("--path", required=True, help="demand path JSON")
    p.add_argument("--json", action="store_true")
    p.add_argument("-o", "--output")
    _solver_flags(p)
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("ingest", help="TNTP network + trips -> game JSON")
    p.add_argument("--net", required=True)
    p.add_argument("--trips", required=True)
    p.add_argument("--k", type=_positive_int, default=8, help="paths per OD pair (default 8)")
    p.add_argument("-o", "--output", required=True, help="game JSON")
    p.add_argument("--demand-output", help="demand JSON (default: <output stem>.demand.json)")
    p.set_defaults(func=cmd_ingest)

    p = sub.add_parser("corpus", help="write a built-in or seeded random game")
    p.add_argument("name", help="pigou(BETA), double_limits, all_degree_equal, mdg_pair, degree4_pair or random")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--sizes", type=int, nargs=3, default=(3, 8, 6), metavar=("GROUPS", "STRATEGIES", "RESOURCES"))
    p.add_argument("--max-degree", type=int, default=4)
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_corpus)
    return ap


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        if hasattr(args, "tol"):
            try:
                _config(args)
            except ValueError as exc:
                raise argparse.ArgumentTypeError(str(exc)) from None
        return args.func(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except argparse.ArgumentTypeError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 2


def main() -> None:
    sys.exit(run())
