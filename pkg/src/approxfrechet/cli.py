"""Command line: decide, compute, gen, plot, bench.

Exit codes: decide 0 = yes, 1 = no; 2 for usage, input and parameter
errors everywhere.  Logging level comes from FRECHET_LOG.
"""

import argparse
import json
import logging
import os
import sys
import time
from dataclasses import asdict, dataclass, field


from .approx import Decider, Params, compute_approx
from .approx_discrete import DiscreteDecider, compute_approx_discrete
from .bench import MODES, format_report, run_bench
from .freespace import (COUNTER_NAMES, compute_exact, decide_exact, discrete_compute_exact,
                        discrete_decide_exact, new_counters)
from .geometry import KINDS, CurveError, generate_synthetic, read_csv, write_csv
from .plot import write_freespace_svg

log = logging.getLogger("approxfrechet")


@dataclass
class RunResult:
    mode: str
    value: float = None
    decision: str = None
    lower: float = None
    upper: float = None
    eps: float = None
    ratio_bound: float = None
    seed: int = None
    counters: dict = field(default_factory=dict)
    wall_time: float = None

    def to_json(self):
        return json.dumps(asdict(self), indent=2, sort_keys=True) + "\n"


class UsageError(Exception):
    pass


def _setup_logging():
    level = os.environ.get("FRECHET_LOG", "error").lower()
    if level not in ("error", "info", "debug"):
        level = "error"
    logging.basicConfig(level=getattr(logging, level.upper()), stream=sys.stderr,
                        format="%(levelname)s %(name)s: %(message)s")


def _counters(c):
    return {k: int(v) for k, v in zip(COUNTER_NAMES, c)}


def _params(args, m):
    kw = dict(eps=args.eps, seed=args.seed, mu1=args.mu1, mu2=args.mu2, mu3=args.mu3,
              omega=args.omega, deterministic_fallback_only=args.deterministic_fallback)
    try:
        return Params.schedule(m, **kw)
    except ValueError as e:
        raise UsageError("parameter inconsistency: %s" % e) from None


def _curves(args):
    a = read_csv(args.curve_a)
    b = read_csv(args.curve_b)
    return a, b


def _emit(args, text):
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def cmd_decide(args):
    if args.delta is None:
        raise UsageError("decide needs --delta")
    a, b = _curves(args)
    mode = args.mode
    c = new_counters()
    t0 = time.perf_counter()
    res = RunResult(mode=mode, seed=args.seed)
    if mode == "exact":
        ans = decide_exact(a, b, args.delta, counters=c)
        res.ratio_bound = 1.0
    elif mode == "discrete":
        ans = discrete_decide_exact(a, b, args.delta, counters=c)
        res.ratio_bound = 1.0
    else:
        if len(a) < 2 or len(b) < 2:
            raise UsageError("approximate modes need at least 2 vertices per curve")
        p = _params(args, min(len(a), len(b)))
        res.eps = args.eps
        if mode == "approx":
            dec = Decider(a, b, params=p)
        else:
            dec = DiscreteDecider(a, b, params=p)
        res.ratio_bound = dec.ratio_bound
        ans = dec.decide(args.delta, c)
    res.decision = "yes" if ans else "no"
    res.counters = _counters(c)
    if args.timing:
        res.wall_time = time.perf_counter() - t0
    if args.json:
        _emit(args, res.to_json())
    else:
        _emit(args, res.decision + "\n")
    return 0 if ans else 1


def cmd_compute(args):
    a, b = _curves(args)
    mode = args.mode
    t0 = time.perf_counter()
    res = RunResult(mode=mode, seed=args.seed)
    if mode == "exact":
        c = new_counters()
        v = compute_exact(a, b, counters=c)
        res.value, res.lower, res.upper, res.ratio_bound = v, v / (1 + 1e-9), v, 1.0
        res.counters = _counters(c)
    elif mode == "discrete":
        c = new_counters()
        v = discrete_compute_exact(a, b, counters=c)
        res.value, res.lower, res.upper, res.ratio_bound = v, v, v, 1.0
        res.counters = _counters(c)
    else:
        if len(a) < 2 or len(b) < 2:
            raise UsageError("approximate modes need at least 2 vertices per curve")
        p = _params(args, min(len(a), len(b)))
        fn = compute_approx if mode == "approx" else compute_approx_discrete
        r = fn(a, b, params=p)
        res.value, res.lower, res.upper = r.value, r.lower, r.upper
        res.eps, res.ratio_bound, res.counters = r.eps, r.ratio_bound, r.counters
    if args.timing:
        res.wall_time = time.perf_counter() - t0
    if args.json:
        _emit(args, res.to_json())
    else:
        _emit(args, "%.12g\n" % res.value)
    return 0


def cmd_gen(args):
    base = read_csv(args.base) if args.base else None
    c = generate_synthetic(args.kind, args.n, seed=args.seed, dim=args.dim, step=args.step,
                           amplitude=args.amplitude, radius=args.radius, noise=args.noise,
                           base=base)
    if args.out:
        write_csv(args.out, c)
    else:
        for p in c:
            sys.stdout.write(",".join(repr(float(v)) for v in p) + "\n")
    return 0


def cmd_plot(args):
    if args.delta is None:
        raise UsageError("plot needs --delta")
    if not args.out:
        raise UsageError("plot needs --out")
    a, b = _curves(args)
    write_freespace_svg(args.out, a, b, args.delta, with_path=not args.no_path)
    return 0


def cmd_bench(args):
    modes = [s.strip() for s in args.modes.split(",") if s.strip()]
    for m in modes:
        if m not in MODES:
            raise UsageError("unknown mode %r" % m)
    try:
        sizes = [int(s) for s in args.sizes.split(",") if s.strip()]
    except ValueError:
        raise UsageError("--sizes must be a comma separated list of integers") from None
    if any(s < 2 for s in sizes) or args.reps < 1:
        raise UsageError("sizes must be >= 2 and reps >= 1")
    rep = run_bench(modes, sizes, args.reps, args.eps, args.seed)
    if args.json or args.out:
        _emit(args, json.dumps(rep, indent=2, sort_keys=True) + "\n")
    else:
        sys.stdout.write(format_report(rep) + "\n")
    return 0


def _common(p, curves=True):
    if curves:
        p.add_argument("--curve-a", required=True, metavar="PATH")
        p.add_argument("--curve-b", required=True, metavar="PATH")
    p.add_argument("--out", metavar="PATH")
    p.add_argument("--json", action="store_true")


def _approx_flags(p):
    p.add_argument("--mode", choices=MODES, default="exact")
    p.add_argument("--eps", type=float, default=0.5)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--mu1", type=int)
    p.add_argument("--mu2", type=int)
    p.add_argument("--mu3", type=int)
    p.add_argument("--omega", type=int)
    p.add_argument("--deterministic-fallback", action="store_true")
    p.add_argument("--timing", action="store_true", help="fill in wall_time")


def build_parser():
    ap = argparse.ArgumentParser(prog="approxfrechet",
                                 description="Exact and approximate Frechet distances of polygonal curves.")
    sub = ap.add_subparsers(dest="cmd", required=True)

    p = sub.add_parser("decide", help="is the distance at most delta?")
    _common(p)
    _approx_flags(p)
    p.add_argument("--delta", type=float)
    p.set_defaults(func=cmd_decide)

    p = sub.add_parser("compute", help="distance value (exact or approximate)")
    _common(p)
    _approx_flags(p)
    p.set_defaults(func=cmd_compute)

    p = sub.add_parser("gen", help="write a synthetic curve as CSV")
    p.add_argument("--kind", choices=KINDS, default="walk")
    p.add_argument("--n", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--dim", type=int, default=2)
    p.add_argument("--step", type=float, default=1.0)
    p.add_argument("--amplitude", type=float, default=1.0)
    p.add_argument("--radius", type=float, default=1.0)
    p.add_argument("--noise", type=float, default=0.0)
    p.add_argument("--base", metavar="PATH", help="base curve for perturbed-copy")
    p.add_argument("--out", metavar="PATH")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("plot", help="free-space diagram as SVG")
    _common(p)
    p.add_argument("--delta", type=float)
    p.add_argument("--no-path", action="store_true")
    p.set_defaults(func=cmd_plot)

    p = sub.add_parser("bench", help="counter scaling over generated walks")
    p.add_argument("--modes", default="exact,approx")
    p.add_argument("--sizes", default="128,256,512,1024")
    p.add_argument("--reps", type=int, default=3)
    p.add_argument("--eps", type=float, default=0.5)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", metavar="PATH")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_bench)
    return ap


def main(argv=None):
    _setup_logging()
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        return args.func(args)
    except (UsageError, CurveError, ValueError, OSError) as e:
        sys.stderr.write("error: %s\n" % e)
        return 2


if __name__ == "__main__":
    sys.exit(main())
