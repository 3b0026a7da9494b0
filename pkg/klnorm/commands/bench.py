"""
commands/bench.py
Subcomando `bench`: tempos por símbolo e contadores de operação, em CSV.
"""
from .. import config
from ..schemas import AlgorithmName
from ..services.bench import DEFAULT_ALGOS, DIST_ALIASES, bench_frame, run_bench
from . import EXIT_OK, emit_frame, int_list, int_value, str_list


def register(subparsers) -> None:
    p = subparsers.add_parser("bench", help="wall-clock scaling benchmark (best of K)")
    p.add_argument("--algos", type=str_list, default=[a.value for a in DEFAULT_ALGOS])
    p.add_argument("--r", type=int_list, default=[64, 512, 4096], dest="rs")
    p.add_argument("--dist", type=str_list, default=["uniform"], dest="dists", help=f"any of {', '.join(DIST_ALIASES)}")
    p.add_argument("--M", type=int_value, default=config.SWEEP_M)
    p.add_argument("--N", type=int_value, default=1_000_000)
    p.add_argument("--repeats", type=int_value, default=config.BENCH_REPEATS)
    p.add_argument("--warmups", type=int_value, default=config.BENCH_WARMUPS)
    p.add_argument("--parallel", action="store_true", help="time cells concurrently (serial by default)")
    p.add_argument("--workers", type=int_value, default=config.SWEEP_WORKERS)
    p.set_defaults(handler=run)


def run(args) -> int:
    algos = [AlgorithmName(a) for a in args.algos]
    for dist in args.dists:
        if dist not in DIST_ALIASES:
            raise ValueError(f"unknown distribution {dist!r}; choose from {', '.join(DIST_ALIASES)}")
    rows = run_bench(
        algos=algos,
        rs=args.rs,
        dists=args.dists,
        M=args.M,
        N=args.N,
        repeats=args.repeats,
        warmups=args.warmups,
        serial=not args.parallel,
        workers=args.workers,
    )
    emit_frame(bench_frame(rows))
    return EXIT_OK
