"""Main workbench class for localisation setups."""

import json
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional, Sequence

from .categories.comma import phi_comparison, slice_I, slice_I_underline, slice_J
from .categories.connectivity import connectivity, pi0
from .categories.core import (
    chain_diagram,
    compose_functors,
    point_diagram,
    validate_category,
    validate_class,
    validate_functor,
    validate_poset,
)
from .categories.envelope import check_envelope_lift
from .categories.groups import UNKNOWN as PI1_UNKNOWN
from .errors import BudgetExceeded, DslError, NotInverting, PreconditionViolation
from .fuzz import GenConfig, stream
from .theory.audit import implication_audit
from .theory.hypotheses import FAILS, HOLDS, HypothesisReport, run_family
from .theory.localisation import (
    CERTIFIED,
    EQUIVALENCE,
    NOT_EQUIVALENCE,
    UNDECIDED,
    build_equivalence,
    equivalence_oracle,
    induced_functor,
    kan_extend,
    localise,
)
from .utils import config, logging
from .utils.config import Budgets
from .utils.dsl import Workspace, load_document, resolve
from .utils.report import FAIL, INCONCLUSIVE, PASS, JsonReport, digest, plain

COMMANDS = ("validate", "comma", "connectivity", "check", "localize", "equivalence", "kan", "envelope", "fuzz-audit")
SLICE_KINDS = ("I", "J", "I_underline", "phi")


def hypothesis_outcome(report: HypothesisReport) -> str:
    """Non-blocking reports never fail a run."""
    if not report.blocking:
        return PASS
    if report.status == HOLDS:
        return PASS
    if report.status == FAILS:
        return FAIL
    return INCONCLUSIVE


class LocalisationWorkbench:
    """Main workbench class for localisation setups."""

    def __init__(self, config_file: str = "workbench_config.yml"):
        """Initialize workbench instance.

        Args:
            config_file: YAML configuration; defaults apply when it is absent
        """
        self.config: Dict[str, Any] = config.load_config(config_file) if Path(config_file).exists() else {}
        self.logger = logging.setup_logging(
            self.config.get("logs_dir", "results/logs"), self.config.get("log_level", "INFO")
        )
        self.results_dir = Path(self.config.get("results_dir", "results"))
        self.results_dir.mkdir(parents=True, exist_ok=True)
        self.reports_dir = Path(self.config.get("reports_dir", self.results_dir / "reports"))
        self.bundles_dir = Path(self.config.get("bundles_dir", self.results_dir / "bundles"))
        self.budgets = Budgets.from_config(self.config)

    def set_budgets(self, **overrides: Optional[int]) -> Budgets:
        """Apply per-run budget overrides; None values keep the configured budget."""
        self.budgets = self.budgets.override(**overrides)
        return self.budgets

    # -- plumbing ---------------------------------------------------------------------

    def _run(
        self,
        command: str,
        document: Optional[str],
        body: Callable[[JsonReport, Optional[Workspace]], None],
        seed: Optional[int] = None,
        input_text: Optional[str] = None,
    ) -> JsonReport:
        """Load the document, run ``body`` and map workbench errors onto the report.

        Args:
            command: Command name for the report
            document: Path of the DSL document, or None for generated input
            body: Fills the report from the resolved workspace
            seed: Seed recorded in the report
            input_text: Text digested when there is no document

        Returns:
            The filled report
        """
        report = JsonReport(command, seed=seed, budgets=self.budgets.as_dict())
        self.logger.info("Running %s on %s", command, document or "generated input")
        try:
            workspace = None
            if document is not None:
                text = Path(document).read_text(encoding="utf-8")
                report.input_digest = digest(text)
                workspace = resolve(load_document(document), self.budgets)
            elif input_text is not None:
                report.input_digest = digest(input_text)
            body(report, workspace)
        except DslError as e:
            self.logger.error("Invalid document: %s", e)
            report.fail_input(type(e).__name__, str(e), line=e.line, column=e.column)
        except OSError as e:
            self.logger.error("Cannot read input: %s", e)
            report.fail_input("io", str(e))
        except PreconditionViolation as e:
            self.logger.error("Precondition failed: %s", e)
            report.add(e.check, "PreconditionViolation", FAIL, e.witness, detail=str(e))
        except NotInverting as e:
            self.logger.error("%s", e)
            report.add("not_inverting", "NotInverting", FAIL, {"morphism": e.morphism}, detail=str(e))
        except BudgetExceeded as e:
            self.logger.warning("Budget exhausted: %s", e)
            report.add(f"budget.{e.budget}", "BudgetExceeded", INCONCLUSIVE, {"limit": e.limit}, detail=str(e))
        self.logger.info("%s finished with exit code %d", command, report.exit_code)
        return report

    def save(self, report: JsonReport, params: Dict[str, Any]) -> Path:
        return report.save(self.reports_dir, params)

    # -- commands -----------------------------------------------------------------------

    def validate(self, document: str) -> JsonReport:
        """Validate every declaration of a document.

        Args:
            document: Path of the DSL document

        Returns:
            Report with one record per declaration
        """

        def body(report: JsonReport, ws: Workspace) -> None:
            checks: List = []
            checks += [(f"category.{n}", validate_category(C)) for n, C in ws.categories.items()]
            checks += [(f"class.{n}", validate_class(S)) for n, S in ws.classes.items()]
            checks += [(f"functor.{n}", validate_functor(T)) for n, T in ws.functors.items()]
            checks += [(f"setup.{n}", L.validate()) for n, L in ws.setups.items()]
            checks += [(f"poset.{n}", validate_poset(E)) for n, E in ws.posets.items()]
            for record_id, result in checks:
                data = result.to_dict()
                report.add(
                    record_id,
                    result.status,
                    PASS if result.passed else FAIL,
                    data["violations"],
                    details=data["details"],
                )

        return self._run("validate", document, body)

    def comma(self, document: str, index: str, kind: str = "I", setup: Optional[str] = None, under: str = "D") -> JsonReport:
        """Build one slice category of a setup.

        Args:
            document: Path of the DSL document
            index: Object or morphism of D indexing the slice
            kind: I, J, I_underline or phi
            setup: Setup name when the document declares several
            under: Flavour of J, ``D`` for d\\D or ``T`` for d\\T

        Returns:
            Report with the objects and size of the slice
        """
        if kind not in SLICE_KINDS:
            raise ValueError(f"unknown slice kind {kind}, expected one of {SLICE_KINDS}")

        def body(report: JsonReport, ws: Workspace) -> None:
            L = ws.setup(setup)
            self._require_valid(L)
            cap = self.budgets.morphism_cap
            diagram = self._index(L, index)
            if kind == "phi":
                if index not in L.D.objects:
                    raise PreconditionViolation("comma.index", f"phi needs an object of D, got {index}")
                phi = phi_comparison(L, index, under, cap=cap)
                report.add(
                    f"comma.phi.{index}",
                    "Built",
                    PASS,
                    objects=dict(phi.omap),
                    morphisms=dict(phi.mmap),
                )
                return
            if kind == "I":
                family = slice_I(L, diagram, cap)
            elif kind == "J":
                family = slice_J(L, diagram, under, cap)
            else:
                family = slice_I_underline(L, diagram, cap)
            report.add(
                f"comma.{kind}.{index}",
                "Built",
                PASS,
                objects=family.payloads,
                morphisms=len(family.category),
                components=len(pi0(family.category)),
            )

        return self._run("comma", document, body)

    def connectivity(
        self,
        document: str,
        category: Optional[str] = None,
        setup: Optional[str] = None,
        index: Optional[str] = None,
        kind: str = "I",
    ) -> JsonReport:
        """Connectivity of a declared category, or of a slice of a setup.

        Args:
            document: Path of the DSL document
            category: Declared category name
            setup: Setup name, used with ``index``
            index: Object or morphism of D indexing a slice
            kind: Slice kind (I, J or I_underline)

        Returns:
            Report whose single record is inconclusive when some π₁ verdict is Unknown
        """

        def body(report: JsonReport, ws: Workspace) -> None:
            if category is not None:
                K = ws.category(category)
            else:
                if index is None:
                    raise DslError("connectivity needs --category or --index")
                L = ws.setup(setup)
                self._require_valid(L)
                diagram = self._index(L, index)
                cap = self.budgets.morphism_cap
                if kind == "J":
                    K = slice_J(L, diagram, cap=cap).category
                elif kind == "I_underline":
                    K = slice_I_underline(L, diagram, cap).category
                else:
                    K = slice_I(L, diagram, cap).category
            result = connectivity(K, self.budgets)
            unknown = any(v.status == PI1_UNKNOWN for v in result.pi1)
            report.add(
                f"connectivity.{K.name}",
                "Unknown" if unknown else "Decided",
                INCONCLUSIVE if unknown else PASS,
                **result.to_dict(),
            )

        return self._run("connectivity", document, body)

    def check(
        self,
        document: str,
        family: str,
        setup: Optional[str] = None,
        weak: Optional[str] = None,
        kselect: Optional[str] = None,
        obj: Optional[str] = None,
    ) -> JsonReport:
        """Run one hypothesis family.

        Args:
            document: Path of the DSL document
            family: t0, c2, c1, riou, p1, p2, p3, referee, tu0 or t1v
            setup: Setup name when the document declares several
            weak: Weak replacement name for t1v
            kselect: K-selector name for p1
            obj: Object of C for c1

        Returns:
            Report with one record per hypothesis id
        """

        def body(report: JsonReport, ws: Workspace) -> None:
            L = ws.setup(setup)
            reports = run_family(
                family,
                L,
                self.budgets,
                weak=ws.weak_for(weak) if weak else None,
                selector=ws.kselect_for(kselect) if kselect else None,
                c=obj,
                poset_bound=self.budgets.poset_bound,
            )
            for r in reports:
                data = r.to_dict()
                report.add(
                    r.hypothesis,
                    r.status,
                    hypothesis_outcome(r),
                    r.witness,
                    detail=data.get("detail", ""),
                    blocking=r.blocking,
                )

        return self._run(f"check {family}", document, body)

    def localize(self, document: str, setup: Optional[str] = None) -> JsonReport:
        """Models of S⁻¹C and S′⁻¹D for a setup."""

        def body(report: JsonReport, ws: Workspace) -> None:
            L = ws.setup(setup)
            for side, K, S in (("C", L.C, L.S), ("D", L.D, L.Sprime)):
                model = localise(K, S, self.budgets)
                report.add(
                    f"localize.{side}",
                    "Decided" if model.decided else "Undecided",
                    PASS if model.decided else INCONCLUSIVE,
                    model=model.to_dict(),
                )

        return self._run("localize", document, body)

    def equivalence(self, document: str, setup: Optional[str] = None, choice_seed: Optional[int] = None) -> JsonReport:
        """Build the equivalence certificate and compare it with the oracle.

        A certificate that cannot be built because a hypothesis fails is a
        failed record; the oracle still runs.
        """

        def body(report: JsonReport, ws: Workspace) -> None:
            L = ws.setup(setup)
            self._require_valid(L)
            certified = None
            try:
                cert = build_equivalence(L, self.budgets, choice_seed)
            except PreconditionViolation as e:
                report.add("certificate", "PreconditionViolation", FAIL, {"check": e.check, "witness": e.witness}, detail=str(e))
            else:
                certified = cert.certified
                if cert.certified:
                    outcome = PASS
                elif not cert.checks:
                    outcome = INCONCLUSIVE
                else:
                    outcome = FAIL
                report.add("certificate", cert.status, outcome, certificate=cert.to_dict())
            verdict = equivalence_oracle(L, self.budgets)
            outcome = {EQUIVALENCE: PASS, NOT_EQUIVALENCE: FAIL}.get(verdict.status, INCONCLUSIVE)
            report.add("oracle", verdict.status, outcome, verdict.witness)
            if certified:
                agree = verdict.status == EQUIVALENCE
                report.add(
                    "agreement",
                    "Agree" if agree else verdict.status,
                    PASS if agree else (FAIL if verdict.status == NOT_EQUIVALENCE else INCONCLUSIVE),
                )

        return self._run("equivalence", document, body, seed=choice_seed)

    def kan(self, document: str, functor: str, setup: Optional[str] = None) -> JsonReport:
        """Extend a declared functor F: D -> E along Q.

        G: S⁻¹C -> E is the functor induced by F∘T.
        """

        def body(report: JsonReport, ws: Workspace) -> None:
            L = ws.setup(setup)
            self._require_valid(L)
            if functor not in ws.functors:
                raise DslError(f"unknown functor {functor}")
            F = ws.functors[functor]
            cert = build_equivalence(L, self.budgets)
            if not cert.certified:
                raise PreconditionViolation("certified equivalence", cert.reason, {"setup": L.name})
            G = induced_functor(cert.source_model, compose_functors(F, L.T), f"{F.name}T~")
            result = kan_extend(L, F, G, cert, self.budgets)
            report.add(f"kan.{F.name}", result.status, PASS if result.status == CERTIFIED else FAIL, extension=result.to_dict())

        return self._run("kan", document, body)

    def envelope(self, document: str, setup: Optional[str] = None, k: Optional[int] = None) -> JsonReport:
        """Lift the certified equivalence to the coproduct envelopes at truncation k."""
        k = self.budgets.envelope_k if k is None else k

        def body(report: JsonReport, ws: Workspace) -> None:
            L = ws.setup(setup)
            self._require_valid(L)
            result = check_envelope_lift(L, k, self.budgets)
            data = result.to_dict()
            if result.certified:
                outcome = PASS
            elif result.status == UNDECIDED:
                outcome = INCONCLUSIVE
            else:
                outcome = FAIL
            report.add(f"envelope.{k}", data["status"], outcome, data.get("witness"), checks=result.checks, detail=result.detail)

        return self._run("envelope", document, body)

    def fuzz_audit(
        self,
        seed: int = 0,
        count: int = 100,
        strategy: str = "poset",
        implications: Optional[Sequence[str]] = None,
        max_objects: int = 4,
        max_morphisms: int = 8,
    ) -> JsonReport:
        """Run the implication audit over a generated stream.

        Args:
            seed: First seed of the stream
            count: Number of generated setups
            strategy: Generation strategy
            implications: Names of the implications to audit (all by default)
            max_objects: Object bound per generated category
            max_morphisms: Non-identity morphism bound per generated category

        Returns:
            Report with one record per implication, separation and open target
        """
        cfg = GenConfig(seed=seed, max_objects=max_objects, max_morphisms=max_morphisms, strategy=strategy)
        params = {"seed": seed, "count": count, "strategy": strategy, "max_objects": max_objects, "max_morphisms": max_morphisms}

        def body(report: JsonReport, _: Optional[Workspace]) -> None:
            audit = implication_audit(stream(cfg, count), self.budgets, implications)
            report.add("audit.stream", "Done", PASS, cases=audit.cases, skipped=audit.skipped)
            data = audit.to_dict()
            for name, tally in audit.tallies.items():
                report.add(
                    f"audit.{name}",
                    "Violated" if tally.violations else "Confirmed",
                    FAIL if tally.violations else PASS,
                    tally.violations,
                    **{k: v for k, v in data["implications"][name].items() if k != "violations"},
                )
                for violation in tally.violations:
                    self._save_bundle(violation["setup"], violation["bundle"], seed)
            for name, sep in data["separations"].items():
                report.add(f"separation.{name}", "Found" if sep["found"] else "NotFound", PASS, **sep)
            for name, counts in data["open_targets"].items():
                report.add(f"open.{name}", "Open", PASS, **counts)

        return self._run("fuzz-audit", None, body, seed=seed, input_text=json.dumps(params, sort_keys=True))

    # -- helpers -------------------------------------------------------------------------

    @staticmethod
    def _require_valid(setup) -> None:
        result = setup.validate()
        if not result.passed:
            raise PreconditionViolation("setup.valid", f"{setup.name} is not a valid setup", plain(result.violations))

    @staticmethod
    def _index(setup, index: str):
        """An object or morphism of D as a slice index."""
        if index in setup.D.objects:
            return point_diagram(index)
        if index in setup.D.morphisms:
            return chain_diagram(setup.D, [index])
        raise DslError(f"{index} is neither an object nor a morphism of {setup.D.name}")

    def _save_bundle(self, name: str, text: str, seed: int) -> Path:
        self.bundles_dir.mkdir(parents=True, exist_ok=True)
        path = self.bundles_dir / config.generate_file_name({"setup": name, "seed": seed}, "bundle", "cat")
        with open(path, "w", encoding="utf-8") as f:
            f.write(text)
        self.logger.info("Counterexample bundle saved to: %s", path)
        return path
