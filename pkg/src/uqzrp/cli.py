"""Command-line entry point: ``uqzrp {steady,verify,mpa,simulate,conjecture}``.

Results go to stdout as JSON (CSV for ``conjecture``); a one-line summary
goes to stderr.  Exit codes: 0 ok, 1 a check failed, 2 usage or parameter
regime error, 3 sector too large.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
import time
from fractions import Fraction
from importlib import metadata

from . import markov, mpa, simulator, suites
from .qboson import DivergentTrace
from .qseries import format_rational, parse_rational
from .statespace import DEFAULT_DIM_CAP, SectorTooLarge, enumerate_sector, format_config, parse_config

EXIT_OK, EXIT_CHECK, EXIT_USAGE, EXIT_CAP = 0, 1, 2, 3


class RegimeError(ValueError):
    pass


def _version() -> str:
    try:
        return metadata.version("artifact")
    except metadata.PackageNotFoundError:  # running from a source tree
        return "0+unknown"


def rational(text: str) -> Fraction:
    """``p/q``, an integer, or a decimal such as ``0.3`` (read exactly)."""
    try:
        return parse_rational(text)
    except ValueError:
        try:
            return Fraction(text)
        except ValueError:
            raise argparse.ArgumentTypeError(f"not a rational number: {text!r}") from None


def rational_list(text: str) -> list[Fraction]:
    return [rational(t) for t in text.split(",")]


def int_list(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(t) for t in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers: {text!r}") from None


def _enc(x):
    return format_rational(x)


def _header(args, command: str) -> dict:
    params = {}
    for k, v in sorted(vars(args).items()):
        if k in ("func", "command"):
            continue
        if isinstance(v, Fraction):
            v = _enc(v)
        elif isinstance(v, (list, tuple)):
            v = [_enc(x) if isinstance(x, Fraction) else x for x in v]
        params[k] = v
    return {"tool": "uqzrp", "version": _version(), "command": command, "mode": getattr(args, "mode", "exact"), "seed": getattr(args, "seed", None), "params": params}


def _emit(obj) -> None:
    json.dump(obj, sys.stdout, indent=1, ensure_ascii=False)
    sys.stdout.write("\n")


def _say(msg: str) -> None:
    print(msg, file=sys.stderr)


# -- parameter validation --------------------------------------------------------------


def _check_q(q):
    if not 0 < q < 1:
        raise RegimeError(f"need 0 < q < 1, got q = {q}")


def _check_transfer_regime(lam, mus, q):
    _check_q(q)
    if not 0 < lam < 1:
        raise RegimeError(f"need 0 < lambda < 1, got {lam}")
    for i, mu in enumerate(mus):
        if not 0 < mu < lam:
            raise RegimeError(f"need 0 < mu_{i + 1} < lambda, got mu_{i + 1} = {mu}, lambda = {lam}")


def _check_generator_regime(a, b, mu, q):
    _check_q(q)
    if not 0 < mu < 1:
        raise RegimeError(f"need 0 < mu < 1, got {mu}")
    if a < 0 or b < 0 or a == b == 0:
        raise RegimeError("need a, b >= 0, not both zero")


def _site_mus(args, L):
    if args.mus is not None:
        if len(args.mus) != L:
            raise RegimeError(f"--mus needs {L} values, got {len(args.mus)}")
        return tuple(args.mus)
    if args.mu is not None:
        return (args.mu,) * L
    return None


def _sector(args):
    if len(args.m) != args.n:
        raise RegimeError(f"--m needs {args.n} entries")
    return enumerate_sector(args.n, args.L, args.m, args.cap)


def _to_mode(x, mode):
    return float(x) if mode == "float" else x


# -- subcommands -------------------------------------------------------------------------


def cmd_steady(args) -> int:
    sector = _sector(args)
    if args.dynamics == "transfer":
        mus = _site_mus(args, args.L)
        if mus is None or args.lam is None:
            raise RegimeError("transfer dynamics needs --lambda and --mus (or --mu)")
        _check_transfer_regime(args.lam, mus, args.q)
        conv = lambda x: _to_mode(x, args.mode)  # noqa: E731
        op = markov.transfer_matrix(sector, conv(args.lam), tuple(map(conv, mus)), conv(args.q))
    else:
        if args.mu is None:
            raise RegimeError("generator dynamics needs --mu")
        _check_generator_regime(args.a, args.b, args.mu, args.q)
        conv = lambda x: _to_mode(x, args.mode)  # noqa: E731
        op = markov.hamiltonian(sector, conv(args.a), conv(args.b), conv(args.mu), conv(args.q))
    state = markov.steady_state(op)
    entries = []
    for c, p in zip(sector.configs, state.probs):
        e = {"config": format_config(c), "float": float(p)}
        if args.mode == "exact":
            e["exact"] = _enc(p)
        entries.append(e)
    _emit({"header": _header(args, "steady"), "sector": {"n": sector.n, "L": sector.L, "m": list(sector.m), "dim": sector.dim}, "normalization": state.normalization, "probabilities": entries})
    _say(f"steady: {sector.dim} configurations, unit-sum normalization")
    return EXIT_OK


def cmd_verify(args) -> int:
    names = list(suites.SUITES) if args.suite == "all" else [args.suite]
    report, failed = [], 0
    for name in names:
        t0 = time.perf_counter()
        fn = suites.SUITES[name]
        checks = fn(weights=args.weight) if name == "ybe" and args.weight is not None else fn()
        bad = [c for c in checks if not c]
        failed += len(bad)
        report.append({"suite": name, "checks": len(checks), "failed": len(bad), "seconds": round(time.perf_counter() - t0, 3), "failures": [c.to_json() for c in bad[:20]]})
        _say(f"{name}: {len(checks) - len(bad)}/{len(checks)} passed")
    _emit({"header": _header(args, "verify"), "suites": report, "ok": failed == 0})
    return EXIT_OK if failed == 0 else EXIT_CHECK


def cmd_mpa(args) -> int:
    if args.n != 2:
        raise RegimeError("matrix product weights are implemented for n = 2")
    sector = _sector(args)
    if args.formula == mpa.TAZRP:
        mus, q = None, Fraction(0)
        if args.crosscheck:
            raise RegimeError("--crosscheck is not available for the tazrp formula")
    else:
        if args.q is None:
            raise RegimeError("--q is required")
        _check_q(args.q)
        q = args.q
        if args.formula == mpa.INHOMOGENEOUS:
            if args.mus is None:
                raise RegimeError("the inhomogeneous formula needs --mus")
            mus = _site_mus(args, args.L)
        else:
            if args.mu is None:
                raise RegimeError("the homogeneous formula needs --mu")
            mus = args.mu
    configs = [parse_config(args.config, 2)] if args.config else list(sector.configs)
    values = [mpa.mpa_probability(mpa.MpaQuery(c, mus if mus is not None else 0, q, args.formula)) for c in configs]
    out = {
        "header": _header(args, "mpa"),
        "sector": {"n": 2, "L": sector.L, "m": list(sector.m), "dim": sector.dim},
        "normalization": mpa.MPA_GAUGE,
        "entries": [{"config": format_config(c), "value": _enc(v)} for c, v in zip(configs, values)],
    }
    code = EXIT_OK
    if args.crosscheck:
        try:
            lam = args.lam
            if args.formula == mpa.INHOMOGENEOUS and lam is not None:
                _check_transfer_regime(lam, mus, q)
            rep = mpa.crosscheck_steady(sector, mus, q, args.formula, lam=lam)
            out["ratio_to_direct"] = _enc(rep.ratio_to_direct)
            out["proportional"] = True
            _say(f"mpa: proportional to the direct steady state, ratio {_enc(rep.ratio_to_direct)}")
        except mpa.ProportionalityError as exc:
            out["proportional"] = False
            out["witness"] = {k: _enc(v) if isinstance(v, Fraction) else v for k, v in exc.witness.items()}
            code = EXIT_CHECK
            _say(f"mpa: NOT proportional: {exc}")
    _emit(out)
    return code


def cmd_simulate(args) -> int:
    if args.mu is None:
        raise RegimeError("--mu is required")
    m = args.m
    if len(m) != args.n:
        raise RegimeError(f"--m needs {args.n} entries")
    _check_q(args.q)
    sector = enumerate_sector(args.n, args.L, m, args.cap)
    dim_ok = sector.dim <= args.exact_cap
    initial = simulator.SimState(sector.configs[0], seed=args.seed)
    record = [] if args.trajectory else None
    if args.dynamics == "continuous":
        _check_generator_regime(args.a, args.b, args.mu, args.q)
        rates = markov.RateTable(args.a, args.b, args.mu, args.q)
        dist = simulator.run_continuous(initial, simulator.EventTable(sector, rates), args.events, args.burn_in, args.seed, record)
        exact_op = (lambda: markov.hamiltonian(sector, args.a, args.b, args.mu, args.q))
    else:
        if args.lam is None:
            raise RegimeError("discrete dynamics needs --lambda")
        mus = (args.mu,) * args.L
        _check_transfer_regime(args.lam, mus, args.q)
        T = markov.transfer_matrix(sector, args.lam, mus, args.q)
        dist = simulator.run_discrete(initial, simulator.TransitionTable(T), args.events, args.burn_in, args.seed)
        exact_op = (lambda: T)
    if record is not None:
        simulator.write_trajectory_csv(args.trajectory, sector, record)
    summary = {"header": _header(args, "simulate"), "rng": simulator.RNG_NAME, "horizon": args.events, "seed": args.seed, "params": {"a": _enc(args.a), "b": _enc(args.b), "q": _enc(args.q), "mu": _enc(args.mu)}}
    summary["empirical"] = [{"config": format_config(c), "p": float(p)} for c, p in zip(sector.configs, dist.probabilities())]
    if dim_ok:
        exact = [float(p) for p in markov.steady_state(exact_op()).probs]
        summary["tv_distance"] = dist.tv_distance(exact)
        _say(f"simulate: total variation to the exact steady state {summary['tv_distance']:.4g}")
    else:
        summary["tv_distance"] = None
        _say(f"simulate: warning: sector dimension {sector.dim} exceeds --exact-cap, skipping the exact comparison")
    _emit(summary)
    return EXIT_OK


def cmd_conjecture(args) -> int:
    w = csv.writer(sys.stdout)
    w.writerow(["L", "m1", "m2", "j", "r", "lhs", "rhs", "equal", "asserted"])
    failures = 0
    rows = 0
    for L in sorted(args.Ls):
        for m in sorted(args.ms):
            size = sum(m)
            for j in range(2, L + 1):
                for r in range(size + 1):
                    lhs, rhs, eq = mpa.conjecture_ldma(m, L, j, r, args.mu, args.q)
                    asserted = r in (0, 1, size)
                    if asserted and not eq:
                        failures += 1
                    w.writerow([L, m[0], m[1], j, r, _enc(lhs), _enc(rhs), str(eq).lower(), str(asserted).lower()])
                    rows += 1
    _say(f"conjecture: {rows} rows, {failures} failures among asserted rows (r in {{0, 1, |m|}})")
    return EXIT_OK if failures == 0 else EXIT_CHECK


# -- parser -----------------------------------------------------------------------------------


def _m_list(text: str):
    return [int_list(part) for part in text.split(";")]


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="uqzrp", description="Exact and Monte Carlo tools for the multispecies q-boson zero range process.")
    sub = p.add_subparsers(dest="command", required=True)

    def model(sp, *, need_q=True):
        sp.add_argument("--n", type=int, default=2, help="number of species")
        sp.add_argument("--L", type=int, required=True, help="number of sites")
        sp.add_argument("--m", type=int_list, required=True, help="species totals, e.g. 1,1")
        sp.add_argument("--q", type=rational, required=need_q)
        sp.add_argument("--mus", type=rational_list, help="one mu per site, e.g. 1/4,1/5")
        sp.add_argument("--mu", type=rational, help="homogeneous mu")
        sp.add_argument("--lambda", dest="lam", type=rational)
        sp.add_argument("--cap", type=int, default=DEFAULT_DIM_CAP, help="refuse sectors larger than this")

    s = sub.add_parser("steady", help="exact steady state of one sector")
    model(s)
    s.add_argument("--dynamics", choices=("transfer", "generator"), default="transfer")
    s.add_argument("--a", type=rational, default=Fraction(1))
    s.add_argument("--b", type=rational, default=Fraction(1))
    s.add_argument("--mode", choices=("exact", "float"), default="exact")
    s.set_defaults(func=cmd_steady)

    v = sub.add_parser("verify", help="run an identity suite on the built-in grid")
    v.add_argument("suite", choices=[*suites.SUITES, "all"])
    v.add_argument("--weight", type=int_list, help="restrict the ybe suite to one weight")
    v.set_defaults(func=cmd_verify)

    m = sub.add_parser("mpa", help="matrix product weights (two species)")
    model(m, need_q=False)
    m.add_argument("--formula", choices=mpa.FORMULAS, default=mpa.INHOMOGENEOUS)
    m.add_argument("--config", help="a single configuration, e.g. '∅,12'")
    m.add_argument("--crosscheck", action="store_true", help="compare with the exact steady state")
    m.set_defaults(func=cmd_mpa)

    sim = sub.add_parser("simulate", help="Monte Carlo estimate of the stationary law")
    model(sim)
    sim.add_argument("--dynamics", choices=("continuous", "discrete"), default="continuous")
    sim.add_argument("--a", type=rational, default=Fraction(1))
    sim.add_argument("--b", type=rational, default=Fraction(1))
    sim.add_argument("--events", type=int, default=10**6)
    sim.add_argument("--burn-in", type=int, default=None, help="default: 10%% of --events")
    sim.add_argument("--seed", type=int, default=0)
    sim.add_argument("--trajectory", help="write the trajectory to this CSV file")
    sim.add_argument("--exact-cap", type=int, default=5000, help="largest sector solved exactly for the comparison")
    sim.set_defaults(func=cmd_simulate)

    c = sub.add_parser("conjecture", help="separation-ratio experiment (CSV)")
    c.add_argument("--Ls", type=int_list, default=(3, 4))
    c.add_argument("--ms", type=_m_list, default=[(1, 1), (2, 1), (1, 2), (2, 2)], help="semicolon-separated totals, e.g. '2,1;2,2'")
    c.add_argument("--q", type=rational, default=Fraction(1, 3))
    c.add_argument("--mu", type=rational, default=Fraction(1, 5))
    c.set_defaults(func=cmd_conjecture)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except SectorTooLarge as exc:
        _emit({"error": "sector_too_large", "message": str(exc)})
        _say(f"error: {exc}")
        return EXIT_CAP
    except (RegimeError, DivergentTrace, ValueError) as exc:
        _emit({"error": "regime" if isinstance(exc, RegimeError) else "invalid_input", "message": str(exc)})
        _say(f"error: {exc}")
        return EXIT_USAGE
    except markov.NotIrreducible as exc:
        _emit({"error": "not_irreducible", "message": str(exc)})
        _say(f"error: {exc}")
        return EXIT_CHECK


if __name__ == "__main__":
    sys.exit(main())
