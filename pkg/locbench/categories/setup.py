"""The localisation square: T: C -> D with marked classes S ⊂ C, S′ ⊂ D."""

from dataclasses import dataclass, field
from typing import Any, Dict, Hashable

from .core import (
    DEFAULT_MORPHISM_CAP,
    FinCategory,
    FinPoset,
    FunctorData,
    MorphClass,
    ValidationReport,
    diagram_category,
    lift_functor,
    validate_category,
    validate_class,
    validate_functor,
)


@dataclass(frozen=True)
class LocalisationSetup:
    """C, D, T, S and S′ with T(S) ⊆ S′.

    ``slices`` caches the slice categories built from this setup.
    """

    name: str
    C: FinCategory
    D: FinCategory
    T: FunctorData
    S: MorphClass
    Sprime: MorphClass
    slices: Dict[Hashable, Any] = field(default_factory=dict, init=False, repr=False, compare=False)

    __hash__ = object.__hash__

    def validate(self) -> ValidationReport:
        """Validate every component and the class condition T(S) ⊆ S′."""
        report = ValidationReport(self.name)
        for sub in (
            validate_category(self.C),
            validate_category(self.D),
            validate_class(self.S),
            validate_class(self.Sprime),
        ):
            report.violations.extend((f"{sub.subject}: {law}", ids) for law, ids in sub.violations)
        if report.violations:
            return report
        if self.T.source != self.C or self.T.target != self.D:
            report.add("functor endpoints", self.T.name)
            return report
        functor = validate_functor(self.T, self.S, self.Sprime)
        report.violations.extend((f"{functor.subject}: {law}", ids) for law, ids in functor.violations)
        report.details.update(functor.details)
        if functor.passed:
            for s in sorted(self.S.members):
                if self.T(s) not in self.Sprime:
                    report.add("class image", s, self.T(s))
        return report


def lift_setup(setup: LocalisationSetup, E: FinPoset, cap: int = DEFAULT_MORPHISM_CAP) -> LocalisationSetup:
    """T^E: C^E -> D^E with S(E) and S′(E)."""
    source = diagram_category(setup.C, E, cap)
    target = diagram_category(setup.D, E, cap)
    return LocalisationSetup(
        f"{setup.name}^{E.name}",
        source.category,
        target.category,
        lift_functor(setup.T, source, target),
        source.lift_class(setup.S),
        target.lift_class(setup.Sprime),
    )
