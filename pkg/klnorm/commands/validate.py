"""
commands/validate.py
Subcomando `validate`: roda a suíte completa; código 2 se alguma verificação falhar.
"""
from .. import config
from ..services.validation import validate_suite
from ..template_utils.templates import DEFAULT_TEMPLATES, render_tmpl
from . import EXIT_OK, EXIT_VALIDATION, int_list, int_value


def register(subparsers) -> None:
    p = subparsers.add_parser("validate", help="run the validation suite")
    p.add_argument("--seed", type=int_value, default=config.VALIDATE_SEED)
    p.add_argument("--cases", type=int_value, default=config.VALIDATE_CASES, help="seeded random oracle instances")
    p.add_argument("--sweep-r", type=int_list, default=config.VALIDATE_SWEEP_R)
    p.add_argument("--sweep-n", type=int_list, default=config.VALIDATE_SWEEP_N)
    p.add_argument("--sweep-m", type=int_list, default=config.VALIDATE_SWEEP_M)
    p.add_argument("--lemma-cases", type=int_value, default=None)
    p.add_argument("--no-exhaustive", action="store_true", help="skip the exhaustive small-instance grid")
    p.add_argument("--format", default="plain", choices=["plain", "json"])
    p.set_defaults(handler=run)


def run(args) -> int:
    summary = validate_suite(
        seed=args.seed,
        cases=args.cases,
        sweep_r=args.sweep_r,
        sweep_n=args.sweep_n,
        sweep_m=args.sweep_m,
        exhaustive=not args.no_exhaustive,
        lemma_cases=args.lemma_cases,
    )
    if args.format == "json":
        print(summary.json())
    else:
        for check in summary.checks:
            status = "pass" if check.passed else "FAIL"
            print(render_tmpl(DEFAULT_TEMPLATES["check"], {"status": status, "name": check.name, "cases": check.cases}))
            for failure in check.failures:
                print(render_tmpl(DEFAULT_TEMPLATES["check_failure"], {"failure": failure}))
        print(render_tmpl(DEFAULT_TEMPLATES["validation_footer"], {
            "status": "passed" if summary.passed else "FAILED",
            "seed": summary.seed,
            "cases": summary.cases,
        }))
    return EXIT_OK if summary.passed else EXIT_VALIDATION
