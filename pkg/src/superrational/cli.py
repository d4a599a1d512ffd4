"""Command line front end: ``superrational analyze`` and ``superrational types``.

Exit codes: 0 success (warnings allowed), 1 internal error, 2 input error.
Reports are deterministic for fixed inputs and flags; floats are printed
with 12 significant digits.
"""

from __future__ import annotations

import argparse
import itertools
import json
import sys
import warnings
from fractions import Fraction

from . import __version__
from .bk import (BKSpace, as_state, bk_outcome, greatest_identification_relation,
                 is_bk_superrational_type, is_superrational_state, is_superrational_state_dissimilar,
                 make_superrational_bk_space)
from .epistemic import (MIXED, PURE, HarsanyiSpace, is_superrational_bayesian_strategy,
                        is_superrational_type, is_superrational_type_mixed,
                        make_superrational_space, play, superrational_strategy)
from .errors import (DifferentActionSets, ModeMismatch, NonConvergence, ParseError,
                     TypeSetsDiffer, UnknownType)
from .game import (Game, diagonal, is_symmetric, pure_nash, sr_justifiable_actions,
                   superrational_profiles)
from .io import (TypeSpaceFile, dumps, read_game, read_strategies, read_type_space,
                 type_space_to_dict)
from .mixed import MixedStrategy, OptimizerConfig, superrational_mixed
from .nash import mixed_nash_2p

EXIT_OK, EXIT_INTERNAL, EXIT_INPUT = 0, 1, 2
MAX_LISTED_WORLDS = 64
INPUT_ERRORS = (ParseError, ModeMismatch, TypeSetsDiffer, UnknownType, DifferentActionSets,
                OSError)


class InputError(Exception):
    pass


def num(x) -> float:
    """Round a float to the 12 significant digits used in every report."""
    return float(f"{float(x):.12g}")


def fmt(x) -> str:
    if isinstance(x, Fraction):
        return str(x)
    return f"{float(x):.12g}"


def profile_str(p) -> str:
    return "(" + ",".join(p) + ")"


def strategy_dict(labels, sigma: MixedStrategy) -> dict:
    if sigma.exact:
        return {a: str(p) for a, p in zip(labels, sigma.probs)}
    return {a: num(p) for a, p in zip(labels, sigma.probs)}


def _config(args) -> OptimizerConfig:
    try:
        return OptimizerConfig(tolerance=args.tol, grid_points_per_dim=args.grid,
                               multistarts=args.starts, rng_seed=args.seed)
    except ValueError as exc:
        raise InputError(str(exc)) from None


def _config_echo(cfg: OptimizerConfig) -> dict:
    return {"seed": cfg.rng_seed, "tolerance": cfg.tolerance,
            "grid": cfg.grid_points_per_dim, "starts": cfg.multistarts}


def _mixed_section(g: Game, cfg: OptimizerConfig, warns: list) -> dict:
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always", NonConvergence)
        rep = superrational_mixed(g, cfg)
    for w in caught:
        if issubclass(w.category, NonConvergence):
            warns.append(f"non-convergence: {w.message}")
    labels = g.actions[0]
    out: dict = {"status": rep.status, "converged": rep.converged}
    out["maximizers"] = [{"strategy": strategy_dict(labels, m.strategy),
                          "values": [num(v) for v in m.values]} for m in rep.maximizers]
    if rep.best_value is not None:
        out["best_value"] = num(rep.best_value)
    if rep.player_optima:
        out["player_optima"] = [{"player": o.player + 1, "value": num(o.value),
                                 "argmax": [strategy_dict(labels, s) for s in o.argmax]}
                                for o in rep.player_optima]
    if rep.minimax_gap is not None:
        out["minimax_gap"] = num(rep.minimax_gap)
    for note in rep.notes:
        warns.append(f"critical point is a minimum: {note}")
    return out


def cmd_analyze(args) -> dict:
    g = read_game(args.gamefile)
    cfg = _config(args)
    warns: list[str] = []
    res: dict = {}
    report = {"command": "analyze", "input": args.gamefile, "config": _config_echo(cfg),
              "game": {"players": g.n, "actions": [list(a) for a in g.actions]},
              "results": res, "warnings": warns}
    sym = is_symmetric(g)
    res["symmetric"] = sym.symmetric
    if not sym.symmetric:
        if sym.witness:
            tau, prof, player = sym.witness
            warns.append(f"non-symmetric game: payoff of player {player + 1} at "
                         f"{profile_str(prof)} changes when players are permuted by "
                         f"{tuple(t + 1 for t in tau)}")
        else:
            warns.append(f"non-symmetric game: {sym.reason}")
    if g.common_actions:
        res["diagonal"] = [profile_str(p) for p in diagonal(g)]
        res["sr_justifiable"] = list(sr_justifiable_actions(g))
        res["superrational_profiles"] = [profile_str(p) for p in superrational_profiles(g)]
    else:
        warns.append("different action sets: superrational analysis skipped, "
                     "only pure Nash equilibria reported")
    res["pure_nash"] = [profile_str(p) for p in pure_nash(g)]
    if args.mixed:
        if g.common_actions:
            res["mixed"] = _mixed_section(g, cfg, warns)
        else:
            warns.append("--mixed ignored: players have different action sets")
    if args.nash2p:
        if g.n != 2:
            warns.append(f"--nash2p ignored: the game has {g.n} players")
        else:
            nr = mixed_nash_2p(g)
            res["nash2p"] = {"degenerate": nr.degenerate, "equilibria": [
                [strategy_dict(g.actions[0], x), strategy_dict(g.actions[1], y)]
                for x, y in nr.equilibria]}
            if nr.degenerate:
                warns.append("degenerate game: some equilibria form a continuum; "
                             "only its extreme points are listed")
    return report


# -- types ---------------------------------------------------------------------

def _harsanyi_section(h: HarsanyiSpace, args, cfg, warns, res):
    verdicts = []
    if not h.common_types:
        warns.append("type sets differ between players: superrational-type checks need "
                     "one common set of type labels")
    else:
        for i, ts in enumerate(h.types):
            for t in ts:
                v = (is_superrational_type(h, i, t) if h.mode == PURE
                     else is_superrational_type_mixed(h, i, t, cfg))
                row = {"player": i + 1, "type": t, "superrational": v.ok}
                row.update({"action": v.value} if v.ok else {"reason": v.reason})
                verdicts.append(row)
    res["types"] = verdicts
    if args.strategies:
        sf = read_strategies(args.strategies, h)
        strategies, realized, source = sf.strategies, sf.types, args.strategies
    else:
        strategies = tuple(superrational_strategy(h, i, cfg) for i in range(h.game.n))
        realized, source = None, "canonical"
    if realized is None:
        realized = tuple(ts[0] for ts in h.types)
    checks = []
    for b in strategies if h.common_types else ():
        v = is_superrational_bayesian_strategy(h, b, cfg)
        row = {"player": b.player + 1, "map": {t: b(t) for t in h.types[b.player]},
               "superrational": v.ok}
        if not v.ok:
            row.update({"witness": v.witness, "reason": v.reason})
        checks.append(row)
    res["strategies"] = {"source": source, "checks": checks}
    out = play(h, realized, strategies, cfg)
    if h.mode == PURE:
        prof = list(out.profile)
        target = list(out.superrational_profile) if out.superrational_profile else None
    else:
        labels = h.game.actions[0]
        prof = [strategy_dict(labels, s) for s in out.profile]
        target = ([strategy_dict(labels, s) for s in out.superrational_profile]
                  if out.superrational_profile else None)
    res["play"] = {"types": list(realized), "profile": prof, "theorem_flag": out.theorem_flag,
                   "superrational_profile": target}


def _state_lists(s: BKSpace, cfg, weak: bool, relation):
    out = []
    for i, ts in enumerate(s.types):
        acts = s.game.actions[i] if s.mode == PURE else range(len(s.candidates))
        found = []
        for t in ts:
            for a in acts:
                ok = (s.common_types and is_superrational_state(s, i, (a, t), weak, cfg)) or \
                    is_superrational_state_dissimilar(s, i, (a, t), weak, cfg, relation)
                if ok:
                    found.append((a, t))
        out.append(found)
    return out


def _bk_section(f: TypeSpaceFile, args, cfg, warns, res):
    s = f.space
    if s.common_types:
        rows = []
        for i, ts in enumerate(s.types):
            for t in ts:
                v = is_bk_superrational_type(s, i, t, cfg)
                row = {"player": i + 1, "type": t, "superrational": v.ok}
                row.update({"action": v.value} if v.ok else {"reason": v.reason})
                rows.append(row)
        res["types"] = rows
    r = greatest_identification_relation(s)
    res["identification_blocks"] = [[f"{i + 1}:{t}" for i, t in b] for b in r.blocks]
    strict = _state_lists(s, cfg, False, r)
    res["sr_states"] = [{"player": i + 1, "states": [[a, t] for a, t in st]}
                        for i, st in enumerate(strict)]
    if args.weak:
        weak = _state_lists(s, cfg, True, r)
        res["weak_sr_states"] = [{"player": i + 1, "states": [[a, t] for a, t in st]}
                                 for i, st in enumerate(weak)]
    if f.states is not None:
        worlds = [tuple(f.states)]
    else:
        worlds = list(itertools.islice(itertools.product(*strict), MAX_LISTED_WORLDS + 1))
        if len(worlds) > MAX_LISTED_WORLDS:
            warns.append(f"only the first {MAX_LISTED_WORLDS} superrational states of the "
                         "world are evaluated")
            worlds = worlds[:MAX_LISTED_WORLDS]
        if not worlds:
            warns.append("no state of the world has every player in a superrational state")
    outcomes = []
    for w in worlds:
        o = bk_outcome(s, w, cfg)
        if s.mode == PURE:
            prof = list(o.profile)
        else:
            prof = [strategy_dict(s.game.actions[0], x) for x in o.profile]
        outcomes.append({"states": [[x.action, x.type] for x in map(as_state, w)],
                         "profile": prof, "theorem_flag": o.theorem_flag})
    res["outcomes"] = outcomes


def cmd_types(args) -> dict:
    cfg = _config(args)
    warns: list[str] = []
    if args.make_superrational:
        g = read_game(args.file)
        kind = args.kind or "harsanyi"
        mode = MIXED if args.mode == "mixed" else PURE
        try:
            if kind == "harsanyi":
                space = make_superrational_space(g, mode, cfg)
            else:
                space = make_superrational_bk_space(g, mode, cfg)
        except ValueError as exc:
            raise InputError(str(exc)) from None
        f = TypeSpaceFile(kind, space)
        if args.save:
            with open(args.save, "w", encoding="utf-8") as fh:
                fh.write(dumps(type_space_to_dict(f)))
    else:
        f = read_type_space(args.file)
        if args.kind and args.kind != f.kind:
            raise InputError(f"{args.file} holds a {f.kind} space, --kind asked for {args.kind}")
        if args.mode and args.mode != f.space.mode:
            raise InputError(f"{args.file} is in {f.space.mode} mode, --mode asked for {args.mode}")
    s = f.space
    if f.kind == "bk" and args.strategies:
        raise InputError("--strategies applies to harsanyi spaces only")
    res: dict = {}
    report = {"command": "types", "input": args.file, "config": _config_echo(cfg),
              "kind": f.kind, "mode": s.mode, "generated": bool(args.make_superrational),
              "results": res, "warnings": warns}
    if s.mode == MIXED:
        report["candidates"] = [strategy_dict(s.game.actions[0], c) for c in s.candidates]
    if not is_symmetric(s.game):
        warns.append("non-symmetric game: theorem flags stay off")
    if f.kind == "harsanyi":
        _harsanyi_section(s, args, cfg, warns, res)
    else:
        _bk_section(f, args, cfg, warns, res)
    return report


# -- rendering -------------------------------------------------------------------

def _jsonable(x):
    if isinstance(x, Fraction):
        return str(x)
    if isinstance(x, float):
        return num(x)
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    return x


def _dist(d: dict) -> str:
    return "(" + ", ".join(f"{k}={fmt(v) if not isinstance(v, str) else v}" for k, v in d.items()) + ")"


def _yn(b) -> str:
    return "yes" if b else "no"


def render_table(rep: dict) -> str:
    lines = [f"{rep['command']}: {rep['input']}"]
    c = rep["config"]
    lines.append(f"config: seed={c['seed']} tolerance={fmt(c['tolerance'])} "
                 f"grid={c['grid']} starts={c['starts']}")
    res = rep["results"]
    if rep["command"] == "analyze":
        lines += _table_analyze(rep, res)
    else:
        lines += _table_types(rep, res)
    if rep["warnings"]:
        lines.append("warnings:")
        lines += [f"  - {w}" for w in rep["warnings"]]
    return "\n".join(lines) + "\n"


def _set(items) -> str:
    return "{" + ", ".join(items) + "}"


def _table_analyze(rep, res):
    g = rep["game"]
    out = [f"players: {g['players']}"]
    for i, acts in enumerate(g["actions"]):
        out.append(f"  actions of player {i + 1}: {', '.join(acts)}")
    out.append(f"symmetric: {_yn(res['symmetric'])}")
    if "sr_justifiable" in res:
        out.append(f"superrationally justifiable actions: {_set(res['sr_justifiable'])}")
        out.append(f"superrational profiles: {_set(res['superrational_profiles'])}")
    out.append(f"pure Nash equilibria: {_set(res['pure_nash'])}")
    if "mixed" in res:
        m = res["mixed"]
        out.append(f"mixed superrational profile: {m['status']}"
                   f" (converged: {_yn(m['converged'])})")
        for mx in m["maximizers"]:
            vals = ", ".join(fmt(v) for v in mx["values"])
            out.append(f"  maximizer {_dist(mx['strategy'])} payoffs ({vals})")
        for o in m.get("player_optima", []):
            arg = ", ".join(_dist(a) for a in o["argmax"])
            out.append(f"  player {o['player']}: diagonal maximum {fmt(o['value'])} at {arg}")
        if "minimax_gap" in m:
            out.append(f"  minimax gap: {fmt(m['minimax_gap'])}")
    if "nash2p" in res:
        nr = res["nash2p"]
        out.append(f"mixed Nash equilibria (degenerate: {_yn(nr['degenerate'])}):")
        for x, y in nr["equilibria"]:
            out.append(f"  {_dist(x)} / {_dist(y)}")
    return out


def _table_types(rep, res):
    def act(a):
        return f"#{a}" if rep["mode"] == MIXED else a

    out = [f"kind: {rep['kind']}  mode: {rep['mode']}"
           + ("  (generated superrational space)" if rep["generated"] else "")]
    for k, c in enumerate(rep.get("candidates", [])):
        out.append(f"  candidate #{k}: {_dist(c)}")
    if "types" in res:
        out.append("superrational types:")
        for row in res["types"]:
            verdict = f"yes, action {act(row['action'])}" if row["superrational"] else f"no ({row['reason']})"
            out.append(f"  player {row['player']} type {row['type']}: {verdict}")
    if "strategies" in res:
        st = res["strategies"]
        out.append(f"bayesian strategies ({st['source']}):")
        for row in st["checks"]:
            m = ", ".join(f"{t}->{act(a)}" for t, a in row["map"].items())
            verdict = "superrational" if row["superrational"] else \
                f"not superrational at type {row['witness']}"
            out.append(f"  player {row['player']}: {m}: {verdict}")
    if "play" in res:
        p = res["play"]
        prof = "(" + ",".join(x if isinstance(x, str) else _dist(x) for x in p["profile"]) + ")"
        out.append(f"play at types ({','.join(p['types'])}): {prof}"
                   f"  theorem flag: {'on' if p['theorem_flag'] else 'off'}")
    if "identification_blocks" in res:
        blocks = ", ".join(_set(b) for b in res["identification_blocks"])
        out.append(f"greatest identification relation: {blocks}")
    for key, title in (("sr_states", "superrational states"), ("weak_sr_states", "weak superrational states")):
        if key in res:
            out.append(f"{title}:")
            for row in res[key]:
                sts = _set(f"({act(a)},{t})" for a, t in row["states"])
                out.append(f"  player {row['player']}: {sts}")
    if "outcomes" in res:
        out.append("outcomes:")
        for o in res["outcomes"]:
            sts = ", ".join(f"({act(a)},{t})" for a, t in o["states"])
            prof = "(" + ",".join(x if isinstance(x, str) else _dist(x) for x in o["profile"]) + ")"
            out.append(f"  {sts} -> {prof}  theorem flag: {'on' if o['theorem_flag'] else 'off'}")
    return out


def render(rep: dict, form: str) -> str:
    if form == "json":
        return json.dumps(_jsonable(rep), indent=2, ensure_ascii=False) + "\n"
    return render_table(rep)


# -- entry point -------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="superrational",
                                     description="Superrational solutions of finite games.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def optimizer_flags(p):
        p.add_argument("--tol", type=float, default=1e-9, help="optimizer tolerance (relative)")
        p.add_argument("--grid", type=int, default=101, help="grid points per simplex edge")
        p.add_argument("--starts", type=int, default=32, help="random multistarts")
        p.add_argument("--seed", type=int, default=0, help="seed for the random starts")
        p.add_argument("--format", choices=("table", "json"), default="table")

    a = sub.add_parser("analyze", help="solve a game file")
    a.add_argument("gamefile")
    a.add_argument("--mixed", action="store_true", help="search mixed superrational profiles")
    a.add_argument("--nash2p", action="store_true", help="all extreme Nash equilibria (2 players)")
    optimizer_flags(a)

    t = sub.add_parser("types", help="check a type-space file")
    t.add_argument("file", help="type-space file, or a game file with --make-superrational")
    t.add_argument("--strategies", help="bayesian strategies to check and play (harsanyi)")
    t.add_argument("--weak", action="store_true",
                   help="also list states passing all conditions except justifiability")
    t.add_argument("--make-superrational", action="store_true",
                   help="treat FILE as a game and build a one-type superrational space")
    t.add_argument("--kind", choices=("harsanyi", "bk"))
    t.add_argument("--mode", choices=("pure", "mixed"))
    t.add_argument("--save", help="with --make-superrational, write the generated space here")
    optimizer_flags(t)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        rep = cmd_analyze(args) if args.command == "analyze" else cmd_types(args)
    except (InputError, *INPUT_ERRORS) as exc:
        print(f"superrational: error: {exc.args[0] if exc.args else exc}", file=sys.stderr)
        return EXIT_INPUT
    except Exception as exc:  # anything else is a bug
        print(f"superrational: internal error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    sys.stdout.write(render(rep, args.format))
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
