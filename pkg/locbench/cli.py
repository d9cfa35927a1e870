"""Command-line interface for the localisation workbench."""

import argparse
import sys

import yaml

from . import LocalisationWorkbench
from .fuzz import STRATEGIES
from .theory.audit import IMPLICATIONS
from .theory.hypotheses import FAMILIES
from .workbench import COMMANDS, SLICE_KINDS

EXIT_INVALID = 3


class _Parser(argparse.ArgumentParser):
    """Usage errors are invalid input, not an inconclusive run."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INVALID, f"{self.prog}: error: {message}\n")


def parse_args(argv=None):
    """Parse command line arguments"""
    parser = _Parser(description="Localisation Workbench")
    parser.add_argument("command", choices=COMMANDS, help="Command to run")
    parser.add_argument(
        "operands",
        nargs="*",
        metavar="[FAMILY] DOCUMENT",
        help="Hypothesis family (check only) and DSL document",
    )
    parser.add_argument("--setup", help="Setup name when the document declares several")
    parser.add_argument("--category", help="Category name for connectivity")
    parser.add_argument("--object", dest="obj", help="Object of C for check c1")
    parser.add_argument("--index", help="Object or morphism of D indexing a slice")
    parser.add_argument("--kind", choices=SLICE_KINDS, default="I", help="Slice kind for comma and connectivity")
    parser.add_argument("--under", choices=["D", "T"], default="D", help="Flavour of J: d\\D or d\\T")
    parser.add_argument("--weak", help="Weak replacement name for check t1v")
    parser.add_argument("--kselect", help="K-selector name for check p1")
    parser.add_argument("--functor", help="Functor F: D -> E for kan")
    parser.add_argument("--output", help="Also write the JSON report to this file")
    parser.add_argument("--config", default="workbench_config.yml", help="Configuration file")
    parser.add_argument("--seed", type=int, help="Seed for fuzz-audit and for section choices")
    parser.add_argument("--count", type=int, default=100, help="Number of generated setups")
    parser.add_argument("--strategy", choices=STRATEGIES, default="poset", help="Generation strategy")
    parser.add_argument(
        "--implication",
        action="append",
        choices=[i.name for i in IMPLICATIONS],
        help="Implication to audit (repeatable, all by default)",
    )
    parser.add_argument("--max-objects", type=int, default=4, help="Object bound for generated categories")
    parser.add_argument("--max-morphisms", type=int, default=8, help="Morphism bound for generated categories")
    parser.add_argument("--pi1-budget", type=int, help="Coset budget for fundamental group decisions")
    parser.add_argument("--kb-budget", type=int, help="Rule budget for Knuth-Bendix completion")
    parser.add_argument("--poset-bound", type=int, help="Largest poset size for p3 and referee")
    parser.add_argument("--envelope-k", type=int, help="Family size truncation of the coproduct envelope")
    parser.add_argument("--no-save", action="store_true", help="Do not write the report under results/reports")

    args = parser.parse_args(argv)
    args.family = None
    operands = list(args.operands)
    if args.command == "check":
        if not operands or operands[0] not in FAMILIES:
            parser.error(f"check needs a hypothesis family, one of {', '.join(FAMILIES)}")
        args.family = operands.pop(0)
    if len(operands) > 1:
        parser.error(f"unexpected arguments: {' '.join(operands[1:])}")
    args.document = operands[0] if operands else None
    if args.command != "fuzz-audit" and args.document is None:
        parser.error(f"{args.command} needs a document")
    return args


def run(args, workbench: LocalisationWorkbench):
    """Dispatch one parsed command to the workbench."""
    workbench.set_budgets(
        max_cosets=args.pi1_budget,
        kb_max_rules=args.kb_budget,
        poset_bound=args.poset_bound,
        envelope_k=args.envelope_k,
    )
    doc = args.document
    if args.command == "validate":
        return workbench.validate(doc)
    if args.command == "comma":
        return workbench.comma(doc, args.index, args.kind, args.setup, args.under)
    if args.command == "connectivity":
        return workbench.connectivity(doc, args.category, args.setup, args.index, args.kind)
    if args.command == "check":
        return workbench.check(doc, args.family, args.setup, args.weak, args.kselect, args.obj)
    if args.command == "localize":
        return workbench.localize(doc, args.setup)
    if args.command == "equivalence":
        return workbench.equivalence(doc, args.setup, args.seed)
    if args.command == "kan":
        return workbench.kan(doc, args.functor, args.setup)
    if args.command == "envelope":
        return workbench.envelope(doc, args.setup, args.envelope_k)
    return workbench.fuzz_audit(
        args.seed or 0,
        args.count,
        args.strategy,
        args.implication,
        args.max_objects,
        args.max_morphisms,
    )


def main(argv=None):
    """Main entry point"""
    args = parse_args(argv)
    try:
        workbench = LocalisationWorkbench(args.config)
    except yaml.YAMLError as e:
        print(f"Error: invalid configuration {args.config}: {e}", file=sys.stderr)
        sys.exit(EXIT_INVALID)

    if args.command == "comma" and args.index is None:
        print("Error: comma needs --index", file=sys.stderr)
        sys.exit(EXIT_INVALID)

    report = run(args, workbench)
    text = report.to_json()
    print(text)
    if args.output:
        with open(args.output, "w", encoding="utf-8") as f:
            f.write(text)
    if not args.no_save:
        workbench.save(report, {"setup": args.setup, "hypothesis": args.family, "seed": args.seed})
    sys.exit(report.exit_code)


if __name__ == "__main__":
    main()
