"""
commands/normalize.py
Subcomando `normalize`: roda um algoritmo sobre uma entrada e emite a tabela.
"""
import json
import logging

import pandas as pd

from ..models import DistSpec, Histogram, NormReport
from ..schemas import AlgorithmName, ComparatorMode, Family, NormalizeOut, OutputFormat, RunConfig
from ..services.algorithms import run_algorithm
from ..services.core import LN2, build_histogram
from ..services.gen import byte_histogram_file, generate, read_counts, read_counts_file
from ..template_utils.templates import DEFAULT_TEMPLATES, render_tmpl
from . import EXIT_OK, int_value

logger = logging.getLogger("klnorm.commands")


def register(subparsers) -> None:
    p = subparsers.add_parser("normalize", help="normalize a histogram to integer frequencies summing to M")
    p.add_argument("--algo", required=True, choices=[a.value for a in AlgorithmName])
    p.add_argument("--target", "-M", required=True, type=int_value, help="target total M")
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--counts", help='whitespace-separated counts, e.g. "22 4 4"')
    src.add_argument("--counts-file")
    src.add_argument("--bytes-file", help="histogram of the byte values of a file")
    src.add_argument("--dist", choices=[f.value for f in Family], help="generate the input")
    p.add_argument("--r", type=int_value, dest="dist_r")
    p.add_argument("--N", type=int_value, dest="dist_n")
    p.add_argument("--p", type=float)
    p.add_argument("--s", type=float)
    p.add_argument("--mode", default=ComparatorMode.float64.value, choices=[m.value for m in ComparatorMode])
    p.add_argument("--format", default=OutputFormat.json.value, choices=[f.value for f in OutputFormat])
    p.add_argument("--bits", action="store_true", help="also report KL in bits")
    p.set_defaults(handler=run)


def load_histogram(cfg: RunConfig) -> Histogram:
    if cfg.counts is not None:
        return build_histogram(cfg.counts)
    if cfg.counts_file is not None:
        return read_counts_file(cfg.counts_file)
    if cfg.bytes_file is not None:
        return byte_histogram_file(cfg.bytes_file)
    return generate(DistSpec(family=cfg.family, r=cfg.dist_r, N=cfg.dist_n, p=cfg.p, s=cfg.s))


def to_output(report: NormReport, h: Histogram, bits: bool = False) -> NormalizeOut:
    return NormalizeOut(
        algorithm=report.algorithm,
        M=report.table.target,
        N=h.total,
        r=h.support_size,
        freqs=report.freqs,
        phi=report.phi,
        kl_nats=report.kl,
        certificate_ok=report.certificate_ok,
        op_counts=report.op_counts,
        kl_bits=report.kl / LN2 if bits else None,
        pre_fixup_freqs=report.pre_fixup.freqs if report.pre_fixup is not None else None,
        fallback_taken=report.fallback_taken,
    )


def render(out: NormalizeOut, fmt: OutputFormat) -> str:
    if fmt == OutputFormat.json:
        return json.dumps(out.dict(exclude_none=True))
    if fmt == OutputFormat.csv:
        rec = out.dict(exclude={"op_counts", "freqs", "pre_fixup_freqs"}, exclude_none=True)
        rec["freqs"] = " ".join(map(str, out.freqs))
        rec.update({f"op_{k}": v for k, v in sorted(out.op_counts.items())})
        return pd.DataFrame([rec]).to_csv(index=False).rstrip("\n")
    kl, unit = (out.kl_bits, "bits") if out.kl_bits is not None else (out.kl_nats, "nats")
    lines = [render_tmpl(DEFAULT_TEMPLATES["normalize"], {
        "algorithm": out.algorithm,
        "M": out.M,
        "N": out.N,
        "r": out.r,
        "freqs": " ".join(map(str, out.freqs)),
        "phi": repr(out.phi),
        "kl": repr(kl),
        "unit": unit,
        "certificate": "ok" if out.certificate_ok else "FAILS",
        "op_counts": " ".join(f"{k}={v}" for k, v in sorted(out.op_counts.items())),
    })]
    if out.pre_fixup_freqs is not None:
        lines.append(render_tmpl(DEFAULT_TEMPLATES["normalize_pre_fixup"], {"pre_fixup_freqs": " ".join(map(str, out.pre_fixup_freqs))}))
    if out.fallback_taken is not None:
        lines.append(render_tmpl(DEFAULT_TEMPLATES["normalize_fallback"], {"fallback_taken": out.fallback_taken}))
    return "\n".join(lines)


def run(args) -> int:
    counts = read_counts(args.counts).counts if args.counts is not None else None
    cfg = RunConfig(
        algorithm=args.algo,
        target=args.target,
        mode=args.mode,
        counts=counts,
        counts_file=args.counts_file,
        bytes_file=args.bytes_file,
        family=args.dist,
        dist_r=args.dist_r,
        dist_n=args.dist_n,
        p=args.p,
        s=args.s,
        output_format=args.format,
        bits=args.bits,
    )
    h = load_histogram(cfg)
    logger.info(f"normalize: {cfg.algorithm.value} r={h.support_size} N={h.total} M={cfg.target}")
    report = run_algorithm(cfg.algorithm, h, cfg.target, cfg.mode)
    print(render(to_output(report, h, cfg.bits), cfg.output_format))
    return EXIT_OK
