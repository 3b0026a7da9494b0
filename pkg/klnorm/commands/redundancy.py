"""
commands/redundancy.py
Subcomando `redundancy`: gaps de KL das heurísticas (linhas testemunha, sweep, arquivos).
"""
import json

from .. import config
from ..services import redundancy as service
from . import EXIT_OK, emit_frame, int_list, int_value


def register(subparsers) -> None:
    p = subparsers.add_parser("redundancy", help="KL gap of each heuristic against the optimum")
    mode = p.add_mutually_exclusive_group()
    mode.add_argument("--witness", action="store_true", help="the four witness rows")
    mode.add_argument("--sweep", action="store_true", help="per-distribution maxima over the synthetic grid")
    p.add_argument("--cells", action="store_true", help="with --sweep, emit every cell instead of the maxima")
    p.add_argument("--r", type=int_list, default=config.SWEEP_R, dest="rs")
    p.add_argument("--N", type=int_list, default=config.SWEEP_N, dest="ns")
    p.add_argument("--M", type=int_value, default=config.SWEEP_M)
    p.add_argument("--bytes-file", action="append", default=[], help="add one row per file (repeatable)")
    p.add_argument("--format", default="csv", choices=["csv", "json"])
    p.add_argument("--bits", action="store_true", help="report gaps in bits instead of nats")
    p.add_argument("--workers", type=int_value, default=config.SWEEP_WORKERS)
    p.set_defaults(handler=run, parser=p)


def run(args) -> int:
    if not (args.witness or args.sweep or args.bytes_file):
        args.parser.error("choose --witness, --sweep or at least one --bytes-file")
    rows = []
    if args.witness:
        rows += service.witness_rows()
    if args.sweep:
        cells = service.sweep_rows(args.rs, args.ns, args.M, workers=args.workers)
        rows += cells if args.cells else service.aggregate_rows(cells)
    if args.bytes_file:
        rows += service.file_rows(args.bytes_file, args.M)
    if args.format == "json":
        shown = [service.in_bits(row) if args.bits else row for row in rows]
        print(json.dumps([row.dict() for row in shown]))
    else:
        emit_frame(service.rows_frame(rows, bits=args.bits))
    return EXIT_OK
