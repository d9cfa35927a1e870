"""Implication audit: antecedent checkers against consequent checkers over a stream of setups."""

import logging
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, Iterable, List, Optional, Sequence, Tuple

from ..categories.setup import LocalisationSetup
from ..errors import WorkbenchError
from ..fuzz import shrink
from ..utils.config import Budgets
from ..utils.dsl import print_document, setup_document
from .hypotheses import FAILS, HOLDS, UNKNOWN, HypothesisReport, run_family

logger = logging.getLogger(__name__)

Statuses = Dict[str, str]


@dataclass(frozen=True)
class Implication:
    """If every antecedent id Holds, every consequent id must Hold."""

    name: str
    antecedent: Tuple[str, ...]
    consequent: Tuple[str, ...]


T0 = ("t0.0", "t0.1", "t0.2")

IMPLICATIONS: Tuple[Implication, ...] = (
    Implication("riou=>t0", ("riou.i", "riou.ii", "riou.iv"), T0),
    Implication("c2=>t0", ("c2.0", "c2.1'"), T0),
    Implication("p1a=>c2", ("p1.a1", "p1.a2"), ("c2.0", "c2.1'")),
    Implication("p2=>t0", ("p2.d1", "p2.d2", "p2.d3", "p2.d4", "p2.d5"), T0),
    Implication("referee=>pi1", ("referee",), ("referee.pi1",)),
)

# t0 without (1′): expected to occur, kept as examples
SEPARATIONS: Tuple[Implication, ...] = (Implication("t0-not-c2", T0, ("c2.1'",)),)

# neither direction is assumed
OPEN_TARGETS: Tuple[Implication, ...] = (Implication("riou=>c2.1'", ("riou.i", "riou.ii", "riou.iv"), ("c2.1'",)),)


def combine(ids: Sequence[str], statuses: Statuses) -> str:
    """Fails if one fails, Unknown if one is unknown, else Holds."""
    values = [statuses.get(i, UNKNOWN) for i in ids]
    if FAILS in values:
        return FAILS
    if UNKNOWN in values:
        return UNKNOWN
    return HOLDS


def _referee_pi1(report: HypothesisReport) -> str:
    if not report.holds:
        return UNKNOWN
    verdicts = report.witness.get("consequence", {}).values()
    if FAILS in verdicts:
        return FAILS
    if UNKNOWN in verdicts:
        return UNKNOWN
    return HOLDS


class _Evaluator:
    """Runs each checker family at most once per setup."""

    def __init__(self, setup: LocalisationSetup, budgets: Budgets, poset_bound: int):
        self.setup = setup
        self.budgets = budgets
        self.poset_bound = poset_bound
        self.statuses: Statuses = {}
        self._done: set = set()

    def _load(self, family: str) -> None:
        if family in self._done:
            return
        self._done.add(family)
        try:
            reports = run_family(family, self.setup, self.budgets, poset_bound=self.poset_bound)
        except WorkbenchError as e:
            logger.warning("%s on %s: %s", family, self.setup.name, e)
            return
        for report in reports:
            self.statuses[report.hypothesis] = report.status
            if report.hypothesis == "referee":
                self.statuses["referee.pi1"] = _referee_pi1(report)

    def status(self, ids: Sequence[str]) -> str:
        for i in ids:
            self._load(i.split(".")[0])
        return combine(ids, self.statuses)


@dataclass
class ImplicationTally:
    """Counts for one implication over the audited stream."""

    name: str
    applicable: int = 0
    confirmed: int = 0
    tainted: int = 0
    violations: List[Dict[str, Any]] = field(default_factory=list)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "applicable": self.applicable,
            "confirmed": self.confirmed,
            "tainted": self.tainted,
            "violations": self.violations,
        }


@dataclass
class AuditReport:
    cases: int = 0
    skipped: int = 0
    tallies: Dict[str, ImplicationTally] = field(default_factory=dict)
    separations: Dict[str, List[str]] = field(default_factory=dict)
    open_targets: Dict[str, Dict[str, Any]] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(not t.violations for t in self.tallies.values())

    @property
    def violations(self) -> int:
        return sum(len(t.violations) for t in self.tallies.values())

    def to_dict(self) -> Dict[str, Any]:
        return {
            "cases": self.cases,
            "skipped": self.skipped,
            "passed": self.passed,
            "implications": {name: t.to_dict() for name, t in sorted(self.tallies.items())},
            "separations": {name: {"found": len(b), "bundles": b} for name, b in sorted(self.separations.items())},
            "open_targets": self.open_targets,
        }


def _bundle(setup: LocalisationSetup) -> str:
    return print_document(setup_document(setup))


def _violation_predicate(
    implication: Implication, budgets: Budgets, poset_bound: int
) -> Callable[[LocalisationSetup], bool]:
    def predicate(candidate: LocalisationSetup) -> bool:
        evaluator = _Evaluator(candidate, budgets, poset_bound)
        return (
            evaluator.status(implication.antecedent) == HOLDS
            and evaluator.status(implication.consequent) == FAILS
        )

    return predicate


def implication_audit(
    setups: Iterable[LocalisationSetup],
    budgets: Optional[Budgets] = None,
    implications: Optional[Sequence[str]] = None,
    poset_bound: Optional[int] = None,
    shrink_violations: bool = True,
    keep_examples: int = 3,
) -> AuditReport:
    """Check each selected implication on every setup of the stream.

    Unknown verdicts on either side exclude a case from the implication
    and are counted as tainted; they never produce a violation. Violations
    are shrunk and stored as DSL bundles.
    """
    budgets = budgets or Budgets()
    bound = poset_bound if poset_bound is not None else budgets.poset_bound
    chosen = [i for i in IMPLICATIONS if implications is None or i.name in implications]
    report = AuditReport(tallies={i.name: ImplicationTally(i.name) for i in chosen})
    report.separations = {s.name: [] for s in SEPARATIONS}
    report.open_targets = {
        o.name: {"applicable": 0, "holds": 0, "fails": 0, "tainted": 0, "bundles": []} for o in OPEN_TARGETS
    }
    for setup in setups:
        if not setup.validate().passed:
            report.skipped += 1
            continue
        report.cases += 1
        evaluator = _Evaluator(setup, budgets, bound)
        for implication in chosen:
            tally = report.tallies[implication.name]
            before = evaluator.status(implication.antecedent)
            if before == FAILS:
                continue
            if before == UNKNOWN:
                tally.tainted += 1
                continue
            after = evaluator.status(implication.consequent)
            if after == UNKNOWN:
                tally.tainted += 1
                continue
            tally.applicable += 1
            if after == HOLDS:
                tally.confirmed += 1
                continue
            logger.error("%s violated on %s", implication.name, setup.name)
            witness = setup
            if shrink_violations:
                witness = shrink(setup, _violation_predicate(implication, budgets, bound))
            tally.violations.append({"setup": setup.name, "bundle": _bundle(witness)})
        for separation in SEPARATIONS:
            found = report.separations[separation.name]
            if (
                len(found) < keep_examples
                and evaluator.status(separation.antecedent) == HOLDS
                and evaluator.status(separation.consequent) == FAILS
            ):
                found.append(_bundle(setup))
        for target in OPEN_TARGETS:
            counts = report.open_targets[target.name]
            before = evaluator.status(target.antecedent)
            if before != HOLDS:
                continue
            counts["applicable"] += 1
            after = evaluator.status(target.consequent)
            if after == HOLDS:
                counts["holds"] += 1
            elif after == FAILS:
                counts["fails"] += 1
                if len(counts["bundles"]) < keep_examples:
                    counts["bundles"].append(_bundle(setup))
            else:
                counts["tainted"] += 1
    logger.info(
        "audited %d setups (%d skipped): %d violations",
        report.cases,
        report.skipped,
        report.violations,
    )
    return report
