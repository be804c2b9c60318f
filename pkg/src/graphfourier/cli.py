"""Command-line front end.

Exit codes: 0 success, 2 invalid input (bad flag, malformed file, domain
error), 1 internal error or a failed verification suite.
"""
from __future__ import annotations

import argparse
import json
import logging
import math
import sys
import time

import numpy as np

from . import builders, io, suites
from .errors import GraphFourierError
from .graphs import (
    GeneratorSpec,
    box_dimension,
    gen,
    good_function,
    graph_pushforward,
    sup_error,
    transport,
)
from .measures import AtomicMeasure2D, decay_exponent, ft_eval
from .slicing import decay_bound_integral, slice_energy_profile, slice_tube

log = logging.getLogger("graphfourier")


class UsageError(GraphFourierError):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _floats(text: str) -> list[float]:
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}")


def _pair(text: str) -> tuple[float, float]:
    vals = _floats(text)
    if len(vals) != 2:
        raise argparse.ArgumentTypeError(f"expected 'xi1,xi2', got {text!r}")
    return vals[0], vals[1]


def _require_seed(args) -> int:
    if args.seed is None:
        raise UsageError("--seed is required for stochastic runs")
    return args.seed


def _emit(obj) -> None:
    print(json.dumps(obj))


def cmd_gen(args) -> None:
    params = {}
    if args.kind == "fbm":
        _require_seed(args)
        params["hurst"] = args.hurst
    elif args.kind == "weierstrass":
        params.update(a=args.a, b=args.b, terms=args.terms)
    elif args.kind == "polynomial":
        params["coeffs"] = args.coeffs or []
    else:
        params["c"] = args.c
    if args.renormalize:
        params["renormalize"] = True
    params = {k: v for k, v in params.items() if v is not None}
    f = gen(GeneratorSpec(args.kind, params, args.n, args.seed))
    io.write_function(f, args.out)


def cmd_measure(args) -> None:
    if args.function:
        f = io.read_function(args.function)
        if args.base == "uniform":
            base = builders.uniform_base(f)
        else:
            rng = np.random.default_rng(_require_seed(args))
            base = builders.random_base(f, rng, args.atoms)
        mu = graph_pushforward(f, base)
    elif args.shape == "circle":
        mu = builders.circle(args.m)
    elif args.shape == "segment":
        mu = builders.segment(args.m)
    elif args.shape == "square":
        mu = builders.unit_square(args.m, np.random.default_rng(_require_seed(args)))
    elif args.shape == "dirac":
        mu = builders.dirac(*args.at)
    else:
        raise UsageError("give --function or --shape")
    io.write_measure(mu, args.out)


def cmd_ft(args) -> None:
    mu = _read_2d(args.measure)
    xi = np.array(args.xi, dtype=float).reshape(-1, 2)
    if len(xi) == 0:
        raise UsageError("give at least one --xi")
    vals = ft_eval(mu, xi)
    rows = [(a, b, v.real, v.imag, abs(v)) for (a, b), v in zip(xi.tolist(), vals)]
    text = io._csv_text(["xi1", "xi2", "re", "im", "modulus"],
                        [tuple(float(c) for c in r) for r in rows])
    if args.out:
        io.atomic_write(args.out, text)
    else:
        sys.stdout.write(text)


def _read_2d(path) -> AtomicMeasure2D:
    mu = io.read_measure(path)
    if not isinstance(mu, AtomicMeasure2D):
        raise UsageError(f"{path}: expected a planar measure")
    return mu


def cmd_decay(args) -> None:
    mu = _read_2d(args.measure)
    est = decay_exponent(mu, args.rmin, args.rmax, args.per_octave, args.density,
                         threads=args.threads)
    io.write_decay(est, args.out)
    summary = io.decay_summary(est)
    if args.summary:
        io.atomic_write(args.summary, json.dumps(summary) + "\n")
    _emit(summary)


def cmd_goodfn(args) -> None:
    f = io.read_function(args.function)
    g = good_function(f, args.M, args.epsilon, args.patch_points)
    io.write_goodfn(g, args.out, args.sidecar)
    _emit({"N": g.N, "delta": g.delta, "sup_error": sup_error(f, g),
           "horizontal": len(g.horizontal_idx), "vertical": len(g.vertical_idx)})


def cmd_transport_check(args) -> None:
    given = [args.g, args.h, args.measure]
    if any(given):
        if not all(given) or not args.out:
            raise UsageError("--g, --h, --measure and --out go together")
        g, h = io.read_function(args.g), io.read_function(args.h)
        mu = _read_2d(args.measure)
        nu = transport(mu, g, h)
        xi = np.array(args.xi or [(0.0, 1.0)], dtype=float).reshape(-1, 2)
        lhs = np.abs(ft_eval(mu, xi) - ft_eval(nu, xi))
        rhs = 2 * np.pi * np.hypot(xi[:, 0], xi[:, 1]) * g.sup_distance(h)
        io.write_measure(nu, args.out)
        _emit({"sup_distance": g.sup_distance(h), "violations": int(np.sum(lhs > rhs + 1e-9)),
               "lhs": lhs.tolist(), "rhs": rhs.tolist()})
        return
    res = suites.transport_suite(_require_seed(args), args.trials)
    _emit({"trials": res.trials, "violations": res.failures, "max_ratio": res.statistic})
    if not res.passed:
        raise SuiteFailed


def cmd_slice(args) -> None:
    mu = _read_2d(args.measure)
    nu, mass = slice_tube(mu, args.t, args.delta)
    d = io.measure_to_dict(nu) if nu is not None else {"atoms": [], "weights": []}
    d["tube_mass"] = mass
    io.atomic_write(args.out, json.dumps(d) + "\n")


def _t_grid(spec: str) -> np.ndarray:
    try:
        start, stop, num = spec.split(":")
        return np.linspace(float(start), float(stop), int(num))
    except ValueError:
        raise UsageError(f"--t-grid must be start:stop:num, got {spec!r}") from None


def cmd_energy(args) -> None:
    mu = _read_2d(args.measure)
    grid = _t_grid(args.t_grid)
    rep = slice_energy_profile(mu, args.s, args.delta, grid)
    if args.tau is not None:
        rep.rhs_bound_estimate = decay_bound_integral(args.s, args.tau)
    io.write_energy(rep, args.out)
    _emit({"integral_estimate": _json_float(rep.integral_estimate),
           "rhs_bound_estimate": _json_float(rep.rhs_bound_estimate)})


def _json_float(v: float):
    return v if math.isfinite(v) else ("inf" if v > 0 else None)


def cmd_boxdim(args) -> None:
    _emit({"box_dimension": box_dimension(io.read_function(args.function))})


class SuiteFailed(Exception):
    pass


def cmd_verify(args) -> None:
    seed = _require_seed(args)
    runs = [
        ("transport", lambda: suites.transport_suite(seed, args.trials)),
        ("goodfn", lambda: suites.good_bound_suite(seed, n_measures=args.trials)),
        ("cos_min", lambda: suites.cosine_suite()),
        ("projection", lambda: suites.projection_suite(seed)),
    ]
    if not args.skip_sweep:
        runs.append(("decay_sweep", lambda: suites.decay_sweep(seed, threads=args.threads)))
    ok = True
    print(f"{'check':<12}{'trials':>9}{'failures':>10}  {'statistic':<24}result")
    for key, run in runs:
        t0 = time.perf_counter()
        res = run()
        ok &= res.passed
        log.info("%s took %.2fs", key, time.perf_counter() - t0)
        print(f"{key:<12}{res.trials:>9}{res.failures:>10}  {res.statistic:<24.15g}"
              f"{'PASS' if res.passed else 'FAIL'}")
    if not ok:
        raise SuiteFailed


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="graphfourier", description=__doc__.splitlines()[0])
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    g = sub.add_parser("gen", help="sample a generated function to CSV")
    g.add_argument("--kind", required=True, choices=["fbm", "weierstrass", "polynomial", "constant"])
    g.add_argument("--n", type=int, default=1024)
    g.add_argument("--seed", type=int)
    g.add_argument("--hurst", type=float)
    g.add_argument("--a", type=float)
    g.add_argument("--b", type=float)
    g.add_argument("--terms", type=int, default=30)
    g.add_argument("--coeffs", type=_floats)
    g.add_argument("--c", type=float)
    g.add_argument("--renormalize", action="store_true")
    g.add_argument("--out", required=True)
    g.set_defaults(func=cmd_gen)

    m = sub.add_parser("measure", help="build a measure JSON")
    m.add_argument("--function")
    m.add_argument("--base", choices=["uniform", "random"], default="uniform")
    m.add_argument("--atoms", type=int)
    m.add_argument("--shape", choices=["circle", "segment", "square", "dirac"])
    m.add_argument("--m", type=int, default=4096)
    m.add_argument("--at", type=_pair, default=(0.0, 0.0))
    m.add_argument("--seed", type=int)
    m.add_argument("--out", required=True)
    m.set_defaults(func=cmd_measure)

    f = sub.add_parser("ft", help="evaluate the Fourier transform")
    f.add_argument("--measure", required=True)
    f.add_argument("--xi", type=_pair, action="append", default=[])
    f.add_argument("--out")
    f.set_defaults(func=cmd_ft)

    d = sub.add_parser("decay", help="annulus suprema and decay exponent")
    d.add_argument("--measure", required=True)
    d.add_argument("--rmin", type=float, default=8.0)
    d.add_argument("--rmax", type=float, default=256.0)
    d.add_argument("--per-octave", type=int, default=1)
    d.add_argument("--density", type=float, help="samples per unit frequency")
    d.add_argument("--threads", type=int, default=1)
    d.add_argument("--summary")
    d.add_argument("--out", required=True)
    d.set_defaults(func=cmd_decay)

    gf = sub.add_parser("goodfn", help="good-function approximation")
    gf.add_argument("--function", required=True)
    gf.add_argument("--M", type=int, required=True)
    gf.add_argument("--epsilon", type=float, required=True)
    gf.add_argument("--patch-points", type=int, default=17)
    gf.add_argument("--out", required=True)
    gf.add_argument("--sidecar", required=True)
    gf.set_defaults(func=cmd_goodfn)

    t = sub.add_parser("transport-check", help="graph transport and its Fourier bound")
    t.add_argument("--g")
    t.add_argument("--h")
    t.add_argument("--measure")
    t.add_argument("--xi", type=_pair, action="append")
    t.add_argument("--seed", type=int)
    t.add_argument("--trials", type=int, default=200)
    t.add_argument("--out")
    t.set_defaults(func=cmd_transport_check)

    s = sub.add_parser("slice", help="vertical tube slice")
    s.add_argument("--measure", required=True)
    s.add_argument("--t", type=float, required=True)
    s.add_argument("--delta", type=float, required=True)
    s.add_argument("--out", required=True)
    s.set_defaults(func=cmd_slice)

    e = sub.add_parser("energy", help="slice energy profile")
    e.add_argument("--measure", required=True)
    e.add_argument("--s", type=float, required=True)
    e.add_argument("--delta", type=float, required=True)
    e.add_argument("--t-grid", default="0:1:32")
    e.add_argument("--tau", type=float, help="decay exponent for the comparison integral")
    e.add_argument("--threads", type=int, default=1)
    e.add_argument("--out", required=True)
    e.set_defaults(func=cmd_energy)

    b = sub.add_parser("boxdim", help="box-counting dimension of a graph")
    b.add_argument("--function", required=True)
    b.set_defaults(func=cmd_boxdim)

    v = sub.add_parser("verify-lemmas", help="run the verification suites")
    v.add_argument("--seed", type=int)
    v.add_argument("--trials", type=int, default=200)
    v.add_argument("--skip-sweep", action="store_true")
    v.add_argument("--threads", type=int, default=1)
    v.set_defaults(func=cmd_verify)
    return p


def run(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
        logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                            format="%(levelname)s %(name)s: %(message)s")
        args.func(args)
    except SuiteFailed:
        return 1
    except (GraphFourierError, OSError) as exc:
        print(f"graphfourier: error: {exc}".replace("\n", " "), file=sys.stderr)
        return 2
    except Exception as exc:  # noqa: BLE001
        print(f"graphfourier: internal error: {type(exc).__name__}: {exc}".replace("\n", " "),
              file=sys.stderr)
        return 1
    return 0


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
