"""Mechanical checkers for the sufficient hypotheses on a localisation setup.

Every checker returns a list of :class:`HypothesisReport`, one per
hypothesis id. Per-index scans walk objects, arrows and composable pairs
of D in name order and stop at the first failure, so a ``Fails`` report
always names the lexicographically least witness.
"""

import logging
from dataclasses import dataclass, field, replace
from typing import Any, Callable, Dict, FrozenSet, Iterable, List, Optional, Sequence, Tuple

from ..categories.comma import (
    CommaCategory,
    SliceFamily,
    comma,
    face_payload,
    is_cofinal,
    phi_comparison,
    slice_I,
    slice_I_underline,
    slice_J,
    slice_components,
    under_functor,
)
from ..categories.catalog import point
from ..categories.connectivity import filtering_check, pi0, pi1_presentation
from ..categories.core import (
    Diagram,
    FinCategory,
    FinPoset,
    FunctorData,
    MorphClass,
    chain,
    chain_diagram,
    constant_functor,
    enumerate_diagrams,
    enumerate_posets,
    find_pushouts,
    full_subcategory,
    has_finite_products,
    identity_functor,
    is_product,
    point_diagram,
    poset_product,
    validate_functor,
)
from ..categories.groups import NONTRIVIAL, TRIVIAL, decide_triviality
from ..categories.setup import LocalisationSetup, lift_setup
from ..errors import BudgetExceeded, PreconditionViolation
from ..utils.config import Budgets
from .localisation import saturation

logger = logging.getLogger(__name__)

HOLDS = "Holds"
FAILS = "Fails"
UNKNOWN = "Unknown"

__all__ = [
    "FAILS",
    "HOLDS",
    "UNKNOWN",
    "HypothesisReport",
    "KSelector",
    "LocalisationSetup",
    "UnderSetup",
    "WeakReplacement",
    "arrow_payload",
    "check_c1",
    "check_c2",
    "check_p1",
    "check_p2",
    "check_p3",
    "check_referee",
    "check_riou",
    "check_t0",
    "check_t1v",
    "check_tu0",
    "grade_status",
    "slice_status",
    "in_good_position",
    "pair_payload",
    "replay",
    "run_family",
    "summarise",
    "under_setup",
]

Witness = Dict[str, Any]


@dataclass
class HypothesisReport:
    """Verdict of one hypothesis; ``Fails`` carries a replayable witness."""

    hypothesis: str
    status: str
    witness: Witness = field(default_factory=dict)
    detail: str = ""
    blocking: bool = True

    @property
    def holds(self) -> bool:
        return self.status == HOLDS

    def to_dict(self) -> Dict[str, Any]:
        result = {"hypothesis": self.hypothesis, "status": self.status, "witness": self.witness}
        if self.detail:
            result["detail"] = self.detail
        if not self.blocking:
            result["blocking"] = False
        return result


@dataclass
class WeakReplacement:
    """Chosen subcategories I′ of the saturated slices ⟨I⟩.

    Selections are slice payloads. An index without a selection stands for
    the plain slice I at that index, so the empty replacement is I itself.
    """

    name: str
    objects: Dict[str, FrozenSet[Any]] = field(default_factory=dict)
    arrows: Dict[str, FrozenSet[Any]] = field(default_factory=dict)
    pairs: Dict[Tuple[str, str], FrozenSet[Any]] = field(default_factory=dict)


@dataclass
class KSelector:
    """Families K_d ⊆ d\\T given by payloads (c, j: d -> T(c)); unset d means Φ(I_d)."""

    name: str
    selections: Dict[str, FrozenSet[Tuple[str, str]]] = field(default_factory=dict)


def arrow_payload(x0: Tuple[str, str], x1: Tuple[str, str], g: str) -> Any:
    """Payload of an object of I_f: x0 -> x1 over f, joined by g in C."""
    return (x0, x1), ((("0", "1"), (g,)),)


def pair_payload(C: FinCategory, x0: Tuple[str, str], x1: Tuple[str, str], x2: Tuple[str, str], g1: str, g2: str) -> Any:
    """Payload of an object of I_{(f2,f1)}; the long edge is g2∘g1."""
    return (x0, x1, x2), (
        (("0", "1"), (g1,)),
        (("0", "2"), (C.compose(g2, g1),)),
        (("1", "2"), (g2,)),
    )


# -- scanning helpers -----------------------------------------------------------


def _scan(
    hypothesis: str,
    indices: Iterable[Witness],
    evaluate: Callable[[Witness], Tuple[str, Witness]],
    blocking: bool = True,
) -> HypothesisReport:
    """First Fails wins; otherwise the first Unknown; otherwise Holds."""
    unknown: Optional[Witness] = None
    for index in indices:
        try:
            status, info = evaluate(index)
        except BudgetExceeded as e:
            logger.warning("%s at %s: %s", hypothesis, index, e)
            status, info = UNKNOWN, {"budget": e.budget, "limit": e.limit}
        logger.debug("%s at %s: %s", hypothesis, index, status)
        if status == FAILS:
            return HypothesisReport(hypothesis, FAILS, {**index, **info}, blocking=blocking)
        if status == UNKNOWN and unknown is None:
            unknown = {**index, **info}
    if unknown is not None:
        return HypothesisReport(hypothesis, UNKNOWN, unknown, blocking=blocking)
    return HypothesisReport(hypothesis, HOLDS, blocking=blocking)


def _verdict(ok: bool, info: Optional[Witness] = None) -> Tuple[str, Witness]:
    return (HOLDS, {}) if ok else (FAILS, info or {})


def grade_status(K: FinCategory, grade: int, budgets: Budgets) -> Tuple[str, Witness]:
    """Whether K is ``grade``-connected, for grades -1, 0 and 1."""
    if not K.objects:
        return FAILS, {"nonempty": False}
    if grade < 0:
        return HOLDS, {}
    parts = pi0(K)
    if len(parts) > 1:
        return FAILS, {"components": parts}
    if grade == 0:
        return HOLDS, {}
    verdict = decide_triviality(pi1_presentation(K, parts[0]), budgets)
    status = {TRIVIAL: HOLDS, NONTRIVIAL: FAILS}.get(verdict.status, UNKNOWN)
    return status, ({} if status == HOLDS else {"pi1": verdict.to_dict()})


def _objects(D: FinCategory) -> List[Witness]:
    return [{"d": d} for d in D.objects]


def _arrows(D: FinCategory) -> List[Witness]:
    return [{"f": f} for f in sorted(D.morphisms)]


def _pairs(D: FinCategory) -> List[Witness]:
    return [{"f2": g, "f1": f} for g, f in sorted(D.composable_pairs())]


def _index_diagram(D: FinCategory, index: Witness) -> Diagram:
    if "d" in index:
        return point_diagram(index["d"])
    if "f" in index:
        return chain_diagram(D, [index["f"]])
    return chain_diagram(D, [index["f1"], index["f2"]])


def slice_status(
    setup: LocalisationSetup,
    index: Any,
    grade: int,
    budgets: Budgets,
    kind: str = "I",
) -> Tuple[str, Witness]:
    """:func:`grade_status` of a slice; grades below 1 skip assembling it."""
    cap = budgets.morphism_cap
    if grade >= 1:
        build = slice_I_underline if kind == "I_underline" else slice_I
        return grade_status(build(setup, index, cap).category, grade, budgets)
    parts = slice_components(setup, index, kind, cap)
    if not parts:
        return FAILS, {"nonempty": False}
    if grade < 0:
        return HOLDS, {}
    if len(parts) > 1:
        return FAILS, {"components": parts}
    return HOLDS, {}


def _graded_family(
    prefix: str,
    setup: LocalisationSetup,
    kind: str,
    budgets: Budgets,
) -> List[HypothesisReport]:
    """Grades 1, 0 and -1 of the ``kind`` slices over objects, arrows and composable pairs."""
    D = setup.D
    reports = []
    for grade, label, indices in ((1, "0", _objects(D)), (0, "1", _arrows(D)), (-1, "2", _pairs(D))):

        def evaluate(index: Witness, grade: int = grade) -> Tuple[str, Witness]:
            return slice_status(setup, _index_diagram(D, index), grade, budgets, kind)

        reports.append(_scan(f"{prefix}.{label}", indices, evaluate))
    return reports


def _require_valid(setup: LocalisationSetup) -> None:
    report = setup.validate()
    if not report.passed:
        raise PreconditionViolation("setup.valid", "; ".join(report.laws()), report.to_dict())


class _Slices:
    """Slices of one setup at a fixed cap; families live in the setup cache."""

    def __init__(self, setup: LocalisationSetup, cap: int):
        self.setup = setup
        self.cap = cap

    def I(self, d: str) -> SliceFamily:
        return slice_I(self.setup, d, self.cap)

    def J(self, d: str, under: str) -> SliceFamily:
        return slice_J(self.setup, d, under, self.cap)

    def phi(self, d: str, under: str) -> FunctorData:
        key = ("phi", d, under, self.cap)
        if key not in self.setup.slices:
            self.setup.slices[key] = phi_comparison(self.setup, d, under, self.I(d), self.J(d, under), self.cap)
        return self.setup.slices[key]


# -- simplicial theorem and its corollary ------------------------------------------


def check_t0(setup: LocalisationSetup, budgets: Optional[Budgets] = None) -> List[HypothesisReport]:
    """I_d 1-connected, I_f 0-connected, I_{(f2,f1)} non-empty.

    Raises:
        PreconditionViolation: If the setup is not valid
    """
    budgets = budgets or Budgets()
    _require_valid(setup)
    reports = _graded_family("t0", setup, "I", budgets)
    logger.info("t0 on %s: %s", setup.name, [r.status for r in reports])
    return reports


def check_c2(setup: LocalisationSetup, budgets: Optional[Budgets] = None, under: str = "D") -> List[HypothesisReport]:
    """I_d 1-connected and Φ_d: I_d -> J_d cofinal for every d."""
    budgets = budgets or Budgets()
    _require_valid(setup)
    slices = _Slices(setup, budgets.morphism_cap)
    D = setup.D

    def connected(index: Witness) -> Tuple[str, Witness]:
        return grade_status(slices.I(index["d"]).category, 1, budgets)

    def cofinal(index: Witness) -> Tuple[str, Witness]:
        report = is_cofinal(slices.phi(index["d"], under), budgets.morphism_cap)
        j = report.first_failure()
        if j is None:
            return HOLDS, {}
        return FAILS, {"j": j, "components": report.components[j]}

    reports = [_scan("c2.0", _objects(D), connected), _scan("c2.1'", _objects(D), cofinal)]
    logger.info("c2 on %s: %s", setup.name, [r.status for r in reports])
    return reports


# -- Riou's hypotheses and their lift to diagram categories --------------------


def _image_objects(setup: LocalisationSetup) -> FrozenSet[str]:
    return frozenset(setup.T.obj(c) for c in setup.C.objects)


def _has_section_object(setup: LocalisationSetup, d: str) -> bool:
    D, T = setup.D, setup.T
    return any(s in setup.Sprime for c in setup.C.objects for s in D.hom(d, T.obj(c)))


def check_riou(setup: LocalisationSetup, budgets: Optional[Budgets] = None) -> List[HypothesisReport]:
    """Hypotheses (i), (ii), (iv) and the non-blocking (iii)."""
    _require_valid(setup)
    C, D, T = setup.C, setup.D, setup.T
    details = validate_functor(T).details

    def clause_i(_: Witness) -> Tuple[str, Witness]:
        if not details["fully_faithful"]:
            return FAILS, {"faithful": details["faithful"], "full": details["full"]}
        for f in sorted(C.morphisms):
            if (f in setup.S) != (T(f) in setup.Sprime):
                return FAILS, {"morphism": f, "in_S": f in setup.S}
        return HOLDS, {}

    def clause_ii(index: Witness) -> Tuple[str, Witness]:
        s, f = index["s"], index["f"]
        pushouts = find_pushouts(D, s, f)
        if not pushouts:
            return FAILS, {"pushout": None}
        return _verdict(any(p.pushed in setup.Sprime for p in pushouts), {"pushout": pushouts[0].obj})

    spans = [
        {"s": s, "f": f}
        for s in sorted(setup.Sprime.members)
        for f in D.out_of(D.src(s))
    ]
    image = _image_objects(setup)

    def clause_iii(index: Witness) -> Tuple[str, Witness]:
        s = index["s"]
        return _verdict(D.src(s) not in image or D.dst(s) in image)

    reports = [
        _scan("riou.i", [{}], clause_i),
        _scan("riou.ii", spans, clause_ii),
        _scan("riou.iii", [{"s": s} for s in sorted(setup.Sprime.members)], clause_iii, blocking=False),
        _scan("riou.iv", _objects(D), lambda index: _verdict(_has_section_object(setup, index["d"]))),
    ]
    logger.info("riou on %s: %s", setup.name, [r.status for r in reports])
    return reports


def _posets(bound: int) -> List[FinPoset]:
    """Posets up to ``bound`` elements, total orders named as chains."""
    result = []
    for E in enumerate_posets(bound):
        n = len(E)
        result.append(chain(n - 1) if len(E.strict_pairs()) == n * (n - 1) // 2 else E)
    return result


def check_p3(
    setup: LocalisationSetup,
    poset_bound: Optional[int] = None,
    budgets: Optional[Budgets] = None,
) -> List[HypothesisReport]:
    """Riou's hypotheses lifted to T^E, 1-connected I_d, and t0 for T^E.

    Slices of T^E at Δⁿ-diagrams of D^E are the slices of T at the
    corresponding E×Δⁿ-diagrams of D, which is how the t0 part is computed.
    """
    budgets = budgets or Budgets()
    bound = poset_bound if poset_bound is not None else budgets.poset_bound
    base = {r.hypothesis: r for r in check_riou(setup, budgets)}
    for key in ("riou.i", "riou.ii", "riou.iv"):
        if not base[key].holds:
            return [
                HypothesisReport(
                    "p3.pre",
                    FAILS,
                    {"hypothesis": key, **base[key].witness},
                    f"{key} does not hold, nothing lifted",
                )
            ]
    posets = _posets(bound)
    by_name = {E.name: E for E in posets}
    cap = budgets.morphism_cap

    def lifted(index: Witness) -> Tuple[str, Witness]:
        lift = lift_setup(setup, by_name[index["poset"]], cap)
        for report in check_riou(lift, budgets):
            if report.blocking and not report.holds:
                return report.status, {"hypothesis": report.hypothesis, **report.witness}
        return HOLDS, {}

    def simply_connected(index: Witness) -> Tuple[str, Witness]:
        return slice_status(setup, index["d"], 1, budgets)

    grades = {0: 1, 1: 0, 2: -1}
    indices = []
    diagrams: Dict[Tuple[str, int, str], Diagram] = {}
    for E in posets:
        for n in grades:
            for diagram in enumerate_diagrams(setup.D, poset_product(E, chain(n)), cap):
                label = diagram.label()
                diagrams[(E.name, n, label)] = diagram
                indices.append({"poset": E.name, "n": n, "diagram": label})

    def lifted_t0(index: Witness) -> Tuple[str, Witness]:
        diagram = diagrams[(index["poset"], index["n"], index["diagram"])]
        return slice_status(setup, diagram, grades[index["n"]], budgets)

    reports = [
        HypothesisReport("p3.pre", HOLDS),
        _scan("p3.a", [{"poset": E.name} for E in posets], lifted),
        _scan("p3.b", _objects(setup.D), simply_connected),
        _scan("p3.c", indices, lifted_t0),
    ]
    logger.info("p3 on %s (bound %d): %s", setup.name, bound, [r.status for r in reports])
    return reports


def check_referee(
    setup: LocalisationSetup,
    poset_bound: Optional[int] = None,
    budgets: Optional[Budgets] = None,
) -> HypothesisReport:
    """Every I_{d•} 0-connected for |E| ≤ bound, plus the 1-connected consequence.

    The ∞-connected conclusion is not certified; the witness records the
    π1 verdict of each I_d as the bounded consequence that can be checked.
    """
    budgets = budgets or Budgets()
    _require_valid(setup)
    bound = poset_bound if poset_bound is not None else budgets.poset_bound
    cap = budgets.morphism_cap
    indices = []
    diagrams = {}
    for E in _posets(bound):
        for diagram in enumerate_diagrams(setup.D, E, cap):
            diagrams[(E.name, diagram.label())] = diagram
            indices.append({"poset": E.name, "diagram": diagram.label()})

    def evaluate(index: Witness) -> Tuple[str, Witness]:
        diagram = diagrams[(index["poset"], index["diagram"])]
        return slice_status(setup, diagram, 0, budgets)

    report = _scan("referee", indices, evaluate)
    if report.holds:
        consequence = {}
        for d in setup.D.objects:
            try:
                consequence[d] = slice_status(setup, d, 1, budgets)[0]
            except BudgetExceeded:
                consequence[d] = UNKNOWN
        report.witness = {"consequence": consequence}
        report.detail = f"bounded by |E| <= {bound}; infinity-connectedness asserted, not certified"
    logger.info("referee on %s (bound %d): %s", setup.name, bound, report.status)
    return report


# -- propositions with filtering and good position hypotheses ----------------


def _is_terminal(C: FinCategory, x: str) -> bool:
    return all(len(C.hom(y, x)) == 1 for y in C.objects)


def _product_in(J: FinCategory, j: str, k: str, members: Iterable[str]) -> bool:
    return any(
        is_product(J, p, pi1, pi2)
        for p in sorted(members)
        for pi1 in J.hom(p, j)
        for pi2 in J.hom(p, k)
    )


def _k_family(selector: Optional[KSelector], d: str, J: SliceFamily, phi: FunctorData) -> Tuple[List[str], List[Any]]:
    """Object ids of K_d and any selected payloads that are not in J_d."""
    if selector is None or d not in selector.selections:
        return sorted({phi.obj(x) for x in phi.source.objects}), []
    chosen = selector.selections[d]
    missing = sorted(p for p in chosen if p not in J.object_index)
    return sorted(J.object_index[p] for p in chosen if p in J.object_index), missing


def check_p1(
    setup: LocalisationSetup,
    selector: Optional[KSelector] = None,
    budgets: Optional[Budgets] = None,
) -> List[HypothesisReport]:
    """Cofiltering (a), cancellation (b) and product-family (c) conditions.

    a) and b) use J_d = d\\D; c) uses J_d = d\\T, whose products come from
    products of C preserved by T.
    """
    budgets = budgets or Budgets()
    _require_valid(setup)
    C, D, T = setup.C, setup.D, setup.T
    cap = budgets.morphism_cap
    slices = _Slices(setup, cap)

    def a1(index: Witness) -> Tuple[str, Witness]:
        report = filtering_check(slices.I(index["d"]).category)
        return _verdict(report.cofiltering, report.witnesses.get("cofiltering"))

    a2_indices = [{"d": d, "j": j} for d in D.objects for j in slices.J(d, "D").category.objects]

    def a2(index: Witness) -> Tuple[str, Witness]:
        over = under_functor(slices.phi(index["d"], "D"), index["j"], cap).carrier
        report = filtering_check(over)
        return _verdict(report.cofiltering, report.witnesses.get("cofiltering"))

    b1_indices = [
        {"s": s, "f": f, "g": g}
        for s in sorted(setup.Sprime.members)
        for x in C.objects
        if T.obj(x) == D.dst(s)
        for y in C.objects
        for f in C.hom(x, y)
        for g in C.hom(x, y)
        if f < g
    ]

    def b1(index: Witness) -> Tuple[str, Witness]:
        s = index["s"]
        return _verdict(D.compose(T(index["f"]), s) != D.compose(T(index["g"]), s))

    def b2(index: Witness) -> Tuple[str, Witness]:
        return _verdict(not slices.I(index["d"]).is_empty)

    b3_indices = [
        {"d": d, "i": i, "j": j}
        for d in D.objects
        for i in slices.I(d).category.objects
        for j in slices.J(d, "D").category.objects
    ]

    def b3(index: Witness) -> Tuple[str, Witness]:
        I = slices.I(index["d"]).category
        J = slices.J(index["d"], "D").category
        phi = slices.phi(index["d"], "D")
        return _verdict(
            any(I.hom(k, index["i"]) and J.hom(phi.obj(k), index["j"]) for k in I.objects)
        )

    def c0(_: Witness) -> Tuple[str, Witness]:
        products = has_finite_products(C)
        if products.terminal is None:
            return FAILS, {"terminal": None}
        if products.failing_pair is not None:
            return FAILS, {"pair": list(products.failing_pair)}
        if not _is_terminal(D, T.obj(products.terminal)):
            return FAILS, {"terminal": products.terminal, "preserved": False}
        for (a, b), (p, pi1, pi2) in sorted(products.products.items()):
            if not is_product(D, T.obj(p), T(pi1), T(pi2)):
                return FAILS, {"pair": [a, b], "preserved": False}
        return HOLDS, {}

    def c1(index: Witness) -> Tuple[str, Witness]:
        d = index["d"]
        J, phi = slices.J(d, "T"), slices.phi(d, "T")
        K, missing = _k_family(selector, d, J, phi)
        if missing:
            return FAILS, {"unknown": [list(p) for p in missing]}
        if not K:
            return FAILS, {"nonempty": False}
        image = sorted({phi.obj(x) for x in phi.source.objects})
        outside = [x for x in image if x not in K]
        if outside:
            return FAILS, {"not_in_K": outside[0]}
        for k in K:
            if not any(J.category.hom(x, k) for x in image):
                return FAILS, {"k": k, "empty": "I_d/k"}
        return HOLDS, {}

    def c2(index: Witness) -> Tuple[str, Witness]:
        d = index["d"]
        J, phi = slices.J(d, "T"), slices.phi(d, "T")
        K, _ = _k_family(selector, d, J, phi)
        for k in K:
            for j in J.category.objects:
                if not _product_in(J.category, j, k, K):
                    return FAILS, {"j": j, "k": k}
        return HOLDS, {}

    reports = [
        _scan("p1.a1", _objects(D), a1),
        _scan("p1.a2", a2_indices, a2),
        _scan("p1.b1", b1_indices, b1),
        _scan("p1.b2", _objects(D), b2),
        _scan("p1.b3", b3_indices, b3),
        _scan("p1.c0", [{}], c0),
        _scan("p1.c1", _objects(D), c1),
        _scan("p1.c2", _objects(D), c2),
    ]
    logger.info("p1 on %s: %s", setup.name, [r.status for r in reports])
    return reports


def in_good_position(D: FinCategory, Sprime: MorphClass, s: str, f: str) -> bool:
    """The pushout of s along f exists and the pushed arrow lies in S′."""
    return any(p.pushed in Sprime for p in find_pushouts(D, s, f))


def check_p2(setup: LocalisationSetup, budgets: Optional[Budgets] = None) -> List[HypothesisReport]:
    """Conditions d1-d5, and the ordered-and-filtering shape of I_{d•}."""
    budgets = budgets or Budgets()
    _require_valid(setup)
    D, Sp = setup.D, setup.Sprime
    cap = budgets.morphism_cap
    members = sorted(Sp.members)

    d1_indices = [
        {"s": s, "t1": t1, "t2": t2}
        for s in members
        for t1 in members
        if D.src(t1) == D.dst(s)
        for t2 in members
        if t1 < t2 and D.src(t2) == D.src(t1) and D.dst(t2) == D.dst(t1)
    ]

    def d1(index: Witness) -> Tuple[str, Witness]:
        s = index["s"]
        return _verdict(D.compose(index["t1"], s) != D.compose(index["t2"], s))

    d2_indices = [
        {"s": s, "f": f}
        for f in members
        for s in members
        if D.src(s) == D.src(f)
    ]
    d3_indices = [
        {"s": s, "f": f, "g": g}
        for s in members
        for f in D.out_of(D.src(s))
        for g in D.out_of(D.dst(f))
    ]

    def d3(index: Witness) -> Tuple[str, Witness]:
        s, f, g = index["s"], index["f"], index["g"]
        return _verdict(not in_good_position(D, Sp, s, D.compose(g, f)) or in_good_position(D, Sp, s, f))

    def d5(index: Witness) -> Tuple[str, Witness]:
        f = index["f"]
        I = slice_I(setup, D.src(f), cap)
        return _verdict(any(in_good_position(D, Sp, s, f) for _, s in I.payloads.values()))

    def shape(index: Witness) -> Tuple[str, Witness]:
        report = filtering_check(slice_I(setup, _index_diagram(D, index), cap).category)
        return _verdict(report.ordered and report.filtering, report.witnesses)

    riou_i = check_riou(setup, budgets)[0]
    reports = [
        _scan("p2.d1", d1_indices, d1),
        _scan("p2.d2", d2_indices, lambda index: _verdict(in_good_position(D, Sp, index["s"], index["f"]))),
        _scan("p2.d3", d3_indices, d3),
        replace(riou_i, hypothesis="p2.d4"),
        _scan("p2.d5", _arrows(D), d5),
        _scan("p2.shape", _objects(D) + _arrows(D) + _pairs(D), shape, blocking=False),
    ]
    logger.info("p2 on %s: %s", setup.name, [r.status for r in reports])
    return reports


# -- underline slices -----------------------------------------------------------


def check_tu0(setup: LocalisationSetup, budgets: Optional[Budgets] = None) -> List[HypothesisReport]:
    """Two-out-of-three closure (*) and the grades of the underline slices."""
    budgets = budgets or Budgets()
    _require_valid(setup)
    D, Sp = setup.D, setup.Sprime
    star_indices = [{"s": s, "t": t} for s, t in sorted(D.composable_pairs())]

    def star(index: Witness) -> Tuple[str, Witness]:
        s, t = index["s"], index["t"]
        return _verdict(not (s in Sp and D.compose(s, t) in Sp) or t in Sp)

    reports = [_scan("tu0.star", star_indices, star)]
    reports += _graded_family("tu0", setup, "I_underline", budgets)
    logger.info("tu0 on %s: %s", setup.name, [r.status for r in reports])
    return reports


# -- weak replacements --------------------------------------------------------------


T1V_IDS = ("t1v.valid", "t1v.face1", "t1v.face2", "t1v.unit", "t1v.0", "t1v.1", "t1v.2")


def check_t1v(
    setup: LocalisationSetup,
    weak: Optional[WeakReplacement] = None,
    budgets: Optional[Budgets] = None,
) -> List[HypothesisReport]:
    """Validity, face stability, unit objects and grades of a weak replacement.

    Pull-back stability is checked along S′ arrows between objects and
    along S′ squares between arrows of D.
    """
    budgets = budgets or Budgets()
    _require_valid(setup)
    weak = weak or WeakReplacement("I")
    C, D = setup.C, setup.D
    cap = budgets.morphism_cap
    sat_S = saturation(C, setup.S, budgets)
    sat_Sp = saturation(D, setup.Sprime, budgets)
    if not (sat_S.exact and sat_Sp.exact):
        logger.warning("saturation of %s is partial, weak replacement not checked", setup.name)
        return [HypothesisReport(h, UNKNOWN, {}, "saturation is partial") for h in T1V_IDS]
    S_sat, Sp_sat = sat_S.members.members, sat_Sp.members.members
    cache: Dict[Tuple, SliceFamily] = {}

    def saturated(index: Witness) -> SliceFamily:
        key = tuple(sorted(index.items()))
        if key not in cache:
            cache[key] = slice_I(setup, _index_diagram(D, index), cap, S=S_sat, Sprime=Sp_sat)
        return cache[key]

    def selected(index: Witness) -> FrozenSet[Any]:
        if "d" in index:
            chosen = weak.objects.get(index["d"])
        elif "f" in index:
            chosen = weak.arrows.get(index["f"])
        else:
            chosen = weak.pairs.get((index["f2"], index["f1"]))
        if chosen is None:
            chosen = frozenset(slice_I(setup, _index_diagram(D, index), cap).payloads.values())
        return frozenset(p for p in chosen if p in saturated(index).object_index)

    def restricted(index: Witness) -> FinCategory:
        family = saturated(index)
        return full_subcategory(family.category, [family.object_index[p] for p in selected(index)])

    declared = (
        [({"d": d}, sel) for d, sel in sorted(weak.objects.items())]
        + [({"f": f}, sel) for f, sel in sorted(weak.arrows.items())]
        + [({"f2": k[0], "f1": k[1]}, sel) for k, sel in sorted(weak.pairs.items())]
    )

    def valid(_: Witness) -> Tuple[str, Witness]:
        for index, chosen in declared:
            if "d" in index and index["d"] not in D.objects:
                return FAILS, {"unknown index": index}
            if "f" in index and index["f"] not in D.morphisms:
                return FAILS, {"unknown index": index}
            if "f2" in index and (index["f2"], index["f1"]) not in set(D.composable_pairs()):
                return FAILS, {"unknown index": index}
            known = saturated(index).object_index
            outside = sorted(str(p) for p in chosen if p not in known)
            if outside:
                return FAILS, {"index": index, "payload": outside[0]}
        for s in sorted(setup.Sprime.members):
            d, d_prime = D.src(s), D.dst(s)
            here = selected({"d": d})
            for c, x in sorted(selected({"d": d_prime})):
                if (c, D.compose(x, s)) not in here:
                    return FAILS, {"pullback": s, "payload": [c, x]}
        for f in sorted(D.morphisms):
            for f2 in sorted(D.morphisms):
                for t0 in D.hom(D.src(f), D.src(f2)):
                    for t1 in D.hom(D.dst(f), D.dst(f2)):
                        if t0 not in setup.Sprime or t1 not in setup.Sprime:
                            continue
                        if D.compose(f2, t0) != D.compose(t1, f):
                            continue
                        here = selected({"f": f})
                        for (x0, x1), trans in sorted(selected({"f": f2})):
                            pulled = arrow_payload(
                                (x0[0], D.compose(x0[1], t0)), (x1[0], D.compose(x1[1], t1)), dict(trans)[("0", "1")][0]
                            )
                            if pulled not in here:
                                return FAILS, {"pullback": [t0, t1], "from": f2, "to": f}
        return HOLDS, {}

    def face1(index: Witness) -> Tuple[str, Witness]:
        f = index["f"]
        ends = {"0": selected({"d": D.src(f)}), "1": selected({"d": D.dst(f)})}
        for p in sorted(selected(index), key=str):
            for e, allowed in ends.items():
                if face_payload(p, ["0", "1"], [e]) not in allowed:
                    return FAILS, {"payload": str(p), "face": e}
        return HOLDS, {}

    def face2(index: Witness) -> Tuple[str, Witness]:
        f2, f1 = index["f2"], index["f1"]
        faces = {
            ("0", "1"): selected({"f": f1}),
            ("1", "2"): selected({"f": f2}),
            ("0", "2"): selected({"f": D.compose(f2, f1)}),
        }
        for p in sorted(selected(index), key=str):
            for keep, allowed in faces.items():
                if face_payload(p, ["0", "1", "2"], list(keep)) not in allowed:
                    return FAILS, {"payload": str(p), "face": "".join(keep)}
        return HOLDS, {}

    def unit(index: Witness) -> Tuple[str, Witness]:
        chosen = selected({"f": D.identity[index["d"]]})
        return _verdict(
            any(
                values[0] == values[1] and dict(trans)[("0", "1")] == (C.identity[values[0][0]],)
                for values, trans in chosen
            )
        )

    reports = [
        _scan("t1v.valid", [{}], valid),
        _scan("t1v.face1", _arrows(D), face1),
        _scan("t1v.face2", _pairs(D), face2),
        _scan("t1v.unit", _objects(D), unit),
    ]
    for grade, label, indices in ((1, "0", _objects(D)), (0, "1", _arrows(D)), (-1, "2", _pairs(D))):

        def evaluate(index: Witness, grade: int = grade) -> Tuple[str, Witness]:
            return grade_status(restricted(index), grade, budgets)

        reports.append(_scan(f"t1v.{label}", indices, evaluate))
    logger.info("t1v on %s with %s: %s", setup.name, weak.name, [r.status for r in reports])
    return reports


# -- under-category setups --------------------------------------------------------


@dataclass
class UnderSetup:
    """c\\C -> T(c)\\D with the classes inherited from S and S′."""

    setup: LocalisationSetup
    source: CommaCategory
    target: CommaCategory
    base: str


def _under(K: FinCategory, x: str, cap: int) -> CommaCategory:
    return comma(constant_functor(point(), K, x), identity_functor(K), cap)


def under_setup(setup: LocalisationSetup, c: str, cap: Optional[int] = None) -> UnderSetup:
    """The setup T′: c\\C -> T(c)\\D, g ↦ T(g), with classes read on underlying arrows."""
    cap = cap or Budgets().morphism_cap
    C, D, T = setup.C, setup.D, setup.T
    if c not in C.objects:
        raise PreconditionViolation("c1.object", f"{c} is not an object of {C.name}", {"c": c})
    source, target = _under(C, c, cap), _under(D, T.obj(c), cap)
    omap = {
        x: target.object_index[(p, T.obj(c2), T(g))]
        for x, (p, c2, g) in source.object_decode.items()
    }
    mmap = {}
    for m, (phi, psi) in source.morphism_decode.items():
        x, y = source.carrier.src(m), source.carrier.dst(m)
        mmap[m] = target.morphism_index[(omap[x], omap[y], phi, T(psi))]
    name = f"{setup.name}/{c}"
    functor = FunctorData(f"{T.name}/{c}", source.carrier, target.carrier, omap, mmap)
    S = MorphClass(
        source.carrier,
        frozenset(m for m, (_, psi) in source.morphism_decode.items() if psi in setup.S),
        f"{setup.S.name}/{c}",
    )
    Sprime = MorphClass(
        target.carrier,
        frozenset(m for m, (_, psi) in target.morphism_decode.items() if psi in setup.Sprime),
        f"{setup.Sprime.name}/{c}",
    )
    sub = LocalisationSetup(name, source.carrier, target.carrier, functor, S, Sprime)
    return UnderSetup(sub, source, target, c)


def _prefixed(report: HypothesisReport, c: str) -> HypothesisReport:
    return replace(report, hypothesis=f"c1.{report.hypothesis}", witness={"c": c, **report.witness})


def check_c1(setup: LocalisationSetup, c: str, budgets: Optional[Budgets] = None) -> List[HypothesisReport]:
    """t0 and c2 on the under-category setup at ``c``, and the slice isomorphisms.

    Raises:
        PreconditionViolation: If T is not fully faithful or ``c`` is unknown
    """
    budgets = budgets or Budgets()
    _require_valid(setup)
    if not validate_functor(setup.T).details["fully_faithful"]:
        raise PreconditionViolation("c1.precondition", f"{setup.T.name} is not fully faithful", {"T": setup.T.name})
    cap = budgets.morphism_cap
    under = under_setup(setup, c, cap)
    reports = [_prefixed(r, c) for r in check_t0(under.setup, budgets)]
    reports += [_prefixed(r, c) for r in check_c2(under.setup, budgets)]

    def iso(index: Witness) -> Tuple[str, Witness]:
        delta = index["delta"]
        _, d, _ = under.target.object_decode[delta]
        sub = slice_I(under.setup, delta, cap)
        base = slice_I(setup, d, cap)
        objects = {}
        for oid, (x, s) in sub.payloads.items():
            image = (under.source.object_decode[x][1], under.target.morphism_decode[s][1])
            if image not in base.object_index:
                return FAILS, {"object": oid}
            objects[oid] = base.object_index[image]
        if len(set(objects.values())) != len(objects) or len(objects) != len(base.category.objects):
            return FAILS, {"objects": "not a bijection"}
        morphisms = set()
        for (x, y, comps), m in sub.morphism_index.items():
            sigma = under.source.morphism_decode[comps[0][0]][1]
            key = (objects[x], objects[y], ((sigma,),))
            if key not in base.morphism_index:
                return FAILS, {"morphism": m}
            morphisms.add(base.morphism_index[key])
        if len(morphisms) != len(sub.morphism_index) or len(morphisms) != len(base.morphism_index):
            return FAILS, {"morphisms": "not a bijection"}
        return HOLDS, {}

    iso_report = _scan("c1.iso", [{"delta": x} for x in under.setup.D.objects], iso)
    if not iso_report.holds:
        iso_report.witness = {"c": c, **iso_report.witness}
    reports.append(iso_report)
    logger.info("c1 on %s at %s: %s", setup.name, c, [r.status for r in reports])
    return reports


# -- dispatch and replay -------------------------------------------------------------


FAMILIES = ("t0", "c2", "riou", "p1", "p2", "p3", "referee", "tu0", "t1v", "c1")


def run_family(
    family: str,
    setup: LocalisationSetup,
    budgets: Optional[Budgets] = None,
    weak: Optional[WeakReplacement] = None,
    selector: Optional[KSelector] = None,
    c: Optional[str] = None,
    poset_bound: Optional[int] = None,
) -> List[HypothesisReport]:
    """Run one checker family by name.

    Raises:
        ValueError: For an unknown family
        PreconditionViolation: When c1 is asked for without an object
    """
    budgets = budgets or Budgets()
    if family == "t0":
        return check_t0(setup, budgets)
    if family == "c2":
        return check_c2(setup, budgets)
    if family == "riou":
        return check_riou(setup, budgets)
    if family == "p1":
        return check_p1(setup, selector, budgets)
    if family == "p2":
        return check_p2(setup, budgets)
    if family == "p3":
        return check_p3(setup, poset_bound, budgets)
    if family == "referee":
        return [check_referee(setup, poset_bound, budgets)]
    if family == "tu0":
        return check_tu0(setup, budgets)
    if family == "t1v":
        return check_t1v(setup, weak, budgets)
    if family == "c1":
        if c is None:
            raise PreconditionViolation("c1.object", "check_c1 needs an object of C")
        return check_c1(setup, c, budgets)
    raise ValueError(f"unknown hypothesis family: {family}")


def replay(setup: LocalisationSetup, report: HypothesisReport, budgets: Optional[Budgets] = None, **context: Any) -> bool:
    """Re-run the family of ``report`` and compare status and witness."""
    family = report.hypothesis.split(".")[0]
    if family == "c1" and "c" not in context:
        context["c"] = report.witness.get("c")
    for fresh in run_family(family, setup, budgets, **context):
        if fresh.hypothesis == report.hypothesis:
            return fresh.status == report.status and fresh.witness == report.witness
    return False


def summarise(reports: Sequence[HypothesisReport]) -> str:
    """Holds if every blocking report holds, Fails if one fails, else Unknown."""
    blocking = [r for r in reports if r.blocking]
    if any(r.status == FAILS for r in blocking):
        return FAILS
    if any(r.status == UNKNOWN for r in blocking):
        return UNKNOWN
    return HOLDS
