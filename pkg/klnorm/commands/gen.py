"""
commands/gen.py
Subcomando `gen`: escreve um arquivo de contagens de uma distribuição sintética.
"""
from ..models import DistSpec
from ..schemas import Family
from ..services import gen as service
from . import EXIT_OK, int_value


def register(subparsers) -> None:
    p = subparsers.add_parser("gen", help="write a counts file for a synthetic distribution")
    p.add_argument("--dist", required=True, choices=[f.value for f in Family])
    p.add_argument("--r", type=int_value, required=True)
    p.add_argument("--N", type=int_value, required=True)
    p.add_argument("--p", type=float)
    p.add_argument("--s", type=float)
    p.add_argument("--output", "-o", help="output path (stdout when omitted)")
    p.set_defaults(handler=run)


def run(args) -> int:
    h = service.generate(DistSpec(family=args.dist, r=args.r, N=args.N, p=args.p, s=args.s))
    if args.output:
        service.write_counts(h.counts, args.output)
    else:
        print(service.format_counts(h.counts))
    return EXIT_OK
