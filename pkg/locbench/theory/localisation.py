"""Localisations S⁻¹C, the equivalence certificate for T̄ and the extension RF.

Three engines compute S⁻¹C: right fractions f∘s⁻¹ when the Ore and
cancellation conditions hold, left fractions through the opposite
category, and Knuth-Bendix completion of the word presentation otherwise.
A model is *decided* when it is a finite category; only decided models
are used for certificates.
"""

import logging
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Sequence, Tuple

import networkx as nx
import numpy as np

from ..categories.comma import SliceFamily, slice_I
from ..categories.core import (
    DEFAULT_MORPHISM_CAP,
    FinCategory,
    FunctorData,
    MorphClass,
    Morphism,
    chain_diagram,
    compose_functors,
    inverse_of,
    is_isomorphism,
    opposite,
    validate_functor,
)
from ..categories.setup import LocalisationSetup
from ..errors import BudgetExceeded, NotInverting, PreconditionViolation
from ..utils.config import Budgets
from .rewriting import LocPresentation, RewriteSystem, inverse_symbol, kb_complete, loc_presentation

logger = logging.getLogger(__name__)

Letter = Tuple[str, int]
Roof = Tuple[str, str]

DEFAULT_ROOF_CAP = 1000000

CERTIFIED = "Certified"
UNVERIFIED = "Unverified"

__all__ = [
    "CERTIFIED",
    "UNVERIFIED",
    "EquivalenceCertificate",
    "FractionModel",
    "KanExtensionResult",
    "LocPresentation",
    "LocalisationModel",
    "OracleVerdict",
    "OreReport",
    "RewriteSystem",
    "SaturationResult",
    "build_equivalence",
    "compare_certificates",
    "equivalence_oracle",
    "fraction_model",
    "hom_fractions",
    "induced_functor",
    "kan_extend",
    "kb_complete",
    "loc_presentation",
    "localise",
    "localised_functor",
    "ore_check",
    "rewriting_model",
    "saturation",
]


def word_to_str(word: Sequence[Letter]) -> str:
    return " ".join(g if e == 1 else inverse_symbol(g) for g, e in word) or "1"


# -- fractions ------------------------------------------------------------------


@dataclass
class OreReport:
    """Ore square completion and cancellation for one direction of fractions."""

    direction: str
    square: Optional[Dict[str, str]] = None
    cancellation: Optional[Dict[str, str]] = None

    @property
    def holds(self) -> bool:
        return self.square is None and self.cancellation is None

    def to_dict(self) -> Dict[str, Any]:
        return {
            "direction": self.direction,
            "holds": self.holds,
            "square": self.square,
            "cancellation": self.cancellation,
        }


def _S_into(C: FinCategory, S: MorphClass) -> Dict[str, List[str]]:
    into: Dict[str, List[str]] = {x: [] for x in C.objects}
    for s in sorted(S.members):
        into[C.dst(s)].append(s)
    return into


def _ore_completion(C: FinCategory, S_into: Dict[str, List[str]], t: str, f: str) -> Optional[Roof]:
    """(s', f') with t∘f' = f∘s' and s' ∈ S, for t ∈ S and f sharing a target."""
    for s2 in S_into[C.src(f)]:
        for f2 in C.hom(C.src(s2), C.src(t)):
            if C.compose(t, f2) == C.compose(f, s2):
                return s2, f2
    return None


def _as_class_on(C: FinCategory, S: MorphClass) -> MorphClass:
    return MorphClass(C, S.members, S.name)


def ore_check(C: FinCategory, S: MorphClass, direction: str = "right") -> OreReport:
    """Exhaustive check of the conditions for f∘s⁻¹ (right) or s⁻¹∘f (left) fractions."""
    if direction == "left":
        report = ore_check(opposite(C), _as_class_on(opposite(C), S), "right")
        report.direction = "left"
        return report
    report = OreReport(direction)
    into = _S_into(C, S)
    for t in sorted(S.members):
        for f in C.into(C.dst(t)):
            if _ore_completion(C, into, t, f) is None:
                report.square = {"t": t, "f": f}
                break
        if report.square:
            break
    for t in sorted(S.members):
        b = C.src(t)
        for a in C.objects:
            parallel = C.hom(a, b)
            for i, f in enumerate(parallel):
                for g in parallel[i + 1:]:
                    if C.compose(t, f) != C.compose(t, g):
                        continue
                    if not any(C.compose(f, s) == C.compose(g, s) for s in into[a]):
                        report.cancellation = {"t": t, "f": f, "g": g}
                        return report
    return report


@dataclass
class FractionModel:
    """S⁻¹C as classes of roofs (s, f) standing for f∘s⁻¹ (or s⁻¹∘f when left)."""

    direction: str
    category: FinCategory
    P: FunctorData
    classes: Dict[str, List[Roof]]
    representatives: Dict[str, List[Letter]]


def _right_fractions(C: FinCategory, S: MorphClass, cap: int, roof_cap: int) -> FractionModel:
    into = _S_into(C, S)
    graph = nx.Graph()
    for x in C.objects:
        for s in into[x]:
            for y in C.objects:
                for f in C.hom(C.src(s), y):
                    graph.add_node((s, f))
    if graph.number_of_nodes() > roof_cap:
        raise BudgetExceeded("roof_cap", roof_cap, f"roofs of {C.name}")
    for s, f in list(graph.nodes):
        for u in C.into(C.src(s)):
            su = C.compose(s, u)
            if su in S:
                graph.add_edge((s, f), (su, C.compose(f, u)))

    def ends(roof: Roof) -> Tuple[str, str]:
        return C.dst(roof[0]), C.dst(roof[1])

    name_of: Dict[Roof, str] = {}
    classes: Dict[str, List[Roof]] = {}
    if nx.number_connected_components(graph) > cap:
        raise BudgetExceeded("morphism_cap", cap, f"fractions of {C.name}")
    for part in nx.connected_components(graph):
        roofs = sorted(part, key=lambda r: (not C.is_identity(r[0]), r))
        plain = sorted(f for s, f in roofs if C.is_identity(s))
        identities = [f for f in plain if C.is_identity(f)]
        if identities:
            name = identities[0]
        elif plain:
            name = plain[0]
        else:
            name = f"[{roofs[0][1]}/{roofs[0][0]}]"
        classes[name] = roofs
        for r in roofs:
            name_of[r] = name

    table = {}
    for g_name, g_roofs in classes.items():
        t, g = g_roofs[0]
        for f_name, f_roofs in classes.items():
            if ends(f_roofs[0])[1] != C.dst(t):
                continue
            s, f = f_roofs[0]
            completion = _ore_completion(C, into, t, f)
            if completion is None:
                raise PreconditionViolation("ore", f"no completion for ({t}, {f})", {"t": t, "f": f})
            s2, f2 = completion
            table[(g_name, f_name)] = name_of[(C.compose(s, s2), C.compose(g, f2))]

    morphisms = [Morphism(name, *ends(roofs[0])) for name, roofs in classes.items()]
    identity = {x: name_of[(C.identity[x], C.identity[x])] for x in C.objects}
    category = FinCategory(f"{S.name}^-1{C.name}", C.objects, morphisms, identity, table)
    P = FunctorData(
        f"P_{C.name}",
        C,
        category,
        {x: x for x in C.objects},
        {f: name_of[(C.identity[C.src(f)], f)] for f in C.morphisms},
    )
    representatives = {}
    for name, roofs in classes.items():
        s, f = roofs[0]
        word = [] if C.is_identity(s) else [(s, -1)]
        representatives[name] = word + ([] if C.is_identity(f) else [(f, 1)])
    return FractionModel("right", category, P, classes, representatives)


def fraction_model(
    C: FinCategory,
    S: MorphClass,
    direction: str = "right",
    cap: int = DEFAULT_MORPHISM_CAP,
    roof_cap: int = DEFAULT_ROOF_CAP,
) -> FractionModel:
    """Fraction model of S⁻¹C.

    ``roof_cap`` bounds the roofs enumerated, ``cap`` the resulting classes.

    Raises:
        PreconditionViolation: The Ore or cancellation condition fails
        BudgetExceeded: Too many roofs or too many classes
    """
    report = ore_check(C, S, direction)
    if not report.holds:
        raise PreconditionViolation("ore", f"{direction} fractions unavailable", report.to_dict())
    if direction == "right":
        return _right_fractions(C, S, cap, roof_cap)
    dual = _right_fractions(opposite(C), _as_class_on(opposite(C), S), cap, roof_cap)
    category = opposite(dual.category)
    P = FunctorData(f"P_{C.name}", C, category, dict(dual.P.omap), dict(dual.P.mmap))
    representatives = {name: list(reversed(word)) for name, word in dual.representatives.items()}
    return FractionModel("left", category, P, dual.classes, representatives)


def hom_fractions(
    C: FinCategory,
    S: MorphClass,
    x: str,
    y: str,
    direction: str = "right",
    cap: int = DEFAULT_MORPHISM_CAP,
    roof_cap: int = DEFAULT_ROOF_CAP,
) -> List[List[Roof]]:
    """Classes of fractions x -> y, each listed by its roofs."""
    model = fraction_model(C, S, direction, cap, roof_cap)
    return [model.classes[m] for m in model.category.hom(x, y)]


# -- models -------------------------------------------------------------------------


@dataclass
class LocalisationModel:
    """S⁻¹C with the localisation functor P, when decided."""

    engine: str
    source: FinCategory
    S: MorphClass
    category: Optional[FinCategory] = None
    P: Optional[FunctorData] = None
    representatives: Dict[str, List[Letter]] = field(default_factory=dict)
    system: Optional[RewriteSystem] = None
    reason: str = ""

    @property
    def decided(self) -> bool:
        return self.category is not None

    def inverse(self, m: str) -> Optional[str]:
        return inverse_of(self.category, m)

    def evaluate(self, src: str, word: Sequence[Letter]) -> str:
        """Value in S⁻¹C of a signed word in C starting at ``src``.

        Raises:
            ValueError: The model is undecided, the word is ill-typed or
                inverts a morphism that is not inverted
        """
        if self.category is None:
            raise ValueError(f"model of {self.S.name}^-1{self.source.name} is undecided")
        M = self.category
        at = M.identity[src]
        for gen, exp in word:
            m = self.P(gen)
            if exp == -1:
                inv = inverse_of(M, m)
                if inv is None:
                    raise ValueError(f"{gen} is not inverted in {M.name}")
                m = inv
            if M.src(m) != M.dst(at):
                raise ValueError(f"ill-typed word at {gen}")
            at = M.compose(m, at)
        return at

    def equal(self, src: str, u: Sequence[Letter], v: Sequence[Letter]) -> Optional[bool]:
        """Equality of two words out of ``src``; None when undecided."""
        if self.category is not None:
            return self.evaluate(src, u) == self.evaluate(src, v)
        if self.system is None:
            return None
        presentation = self.system.presentation
        return self.system.equal(presentation.symbols(u), presentation.symbols(v))

    def to_dict(self) -> Dict[str, Any]:
        result: Dict[str, Any] = {"engine": self.engine, "decided": self.decided}
        if self.category is not None:
            result["objects"] = list(self.category.objects)
            result["morphisms"] = {
                m: {
                    "src": self.category.src(m),
                    "dst": self.category.dst(m),
                    "word": word_to_str(self.representatives.get(m, [])),
                }
                for m in self.category.morphisms
            }
        if self.system is not None:
            result["rewriting"] = self.system.to_dict()
        if self.reason:
            result["reason"] = self.reason
        return result


def rewriting_model(C: FinCategory, S: MorphClass, budgets: Optional[Budgets] = None) -> LocalisationModel:
    """S⁻¹C from the completed presentation; decided iff completion and enumeration close."""
    budgets = budgets or Budgets()
    presentation = loc_presentation(C, S)
    system = kb_complete(presentation, budgets.kb_max_rules, budgets.kb_max_rounds)
    model = LocalisationModel("rewriting", C, S, system=system)
    if not system.complete:
        model.reason = "completion over budget"
        return model
    keys: List[Tuple[str, Tuple[str, ...]]] = []
    for x in C.objects:
        words, closed = system.irreducible_words(x, budgets.word_length)
        if not closed:
            model.reason = f"hom-sets out of {x} exceed word length {budgets.word_length}"
            return model
        keys.extend((x, w) for w in words)
        if len(keys) > budgets.morphism_cap:
            model.reason = "normal forms exceed morphism cap"
            return model

    def name(key: Tuple[str, Tuple[str, ...]]) -> str:
        x, w = key
        if not w:
            return C.identity[x]
        if len(w) == 1 and w[0] in C.morphisms:
            return w[0]
        return "<" + ".".join(w) + ">"

    ends = {key: (key[0], presentation.target(key[0], key[1])) for key in keys}
    table = {}
    for kf in keys:
        for kg in keys:
            if kg[0] == ends[kf][1]:
                table[(name(kg), name(kf))] = name((kf[0], system.reduce(kf[1] + kg[1])))
    category = FinCategory(
        f"{S.name}^-1{C.name}",
        C.objects,
        [Morphism(name(k), *ends[k]) for k in keys],
        {x: C.identity[x] for x in C.objects},
        table,
    )
    model.category = category
    model.P = FunctorData(
        f"P_{C.name}",
        C,
        category,
        {x: x for x in C.objects},
        {f: name((C.src(f), system.reduce(presentation.symbols([(f, 1)])))) for f in C.morphisms},
    )
    model.representatives = {name(k): presentation.to_letters(k[1]) for k in keys}
    return model


def localise(C: FinCategory, S: MorphClass, budgets: Optional[Budgets] = None) -> LocalisationModel:
    """S⁻¹C by right fractions, else left fractions, else rewriting."""
    budgets = budgets or Budgets()

    def build() -> LocalisationModel:
        for direction in ("right", "left"):
            if ore_check(C, S, direction).holds:
                try:
                    fm = fraction_model(C, S, direction, budgets.morphism_cap, budgets.roof_cap)
                except BudgetExceeded as e:
                    logger.warning("fraction model gave up: %s", e)
                    continue
                logger.debug("localised %s at %s by %s fractions", C.name, S.name, direction)
                return LocalisationModel(f"{direction}-fractions", C, S, fm.category, fm.P, fm.representatives)
        return rewriting_model(C, S, budgets)

    return C.cached(("localise", S.members, budgets), build)


@dataclass
class SaturationResult:
    """⟨S⟩: morphisms inverted in S⁻¹C, each with an inverse word."""

    members: MorphClass
    exact: bool
    inverse_words: Dict[str, List[Letter]] = field(default_factory=dict)


def saturation(C: FinCategory, S: MorphClass, budgets: Optional[Budgets] = None) -> SaturationResult:
    """Every u whose image in S⁻¹C has a two-sided inverse.

    Exact when the model is decided; otherwise a lower approximation found
    by searching inverse words up to the configured length.
    """
    budgets = budgets or Budgets()
    model = localise(C, S, budgets)
    inverse_words: Dict[str, List[Letter]] = {}
    for s in S.members:
        inverse_words[s] = [] if C.is_identity(s) else [(s, -1)]
    if model.decided:
        for u in C.morphisms:
            inv = model.inverse(model.P(u))
            if inv is not None and u not in inverse_words:
                inverse_words[u] = list(model.representatives[inv])
        exact = True
    else:
        exact = False
        system = model.system
        if system is not None:
            presentation = system.presentation
            for u in C.morphisms:
                if u in inverse_words:
                    continue
                word_u = presentation.symbols([(u, 1)])
                candidates, _ = system.irreducible_words(C.dst(u), budgets.word_length)
                for w in candidates:
                    if presentation.target(C.dst(u), w) != C.src(u):
                        continue
                    if not system.reduce(word_u + w) and not system.reduce(w + word_u):
                        inverse_words[u] = presentation.to_letters(w)
                        break
    members = MorphClass(C, frozenset(inverse_words), f"<{S.name}>")
    return SaturationResult(members, exact, inverse_words)


def induced_functor(model: LocalisationModel, H: FunctorData, name: str = "") -> FunctorData:
    """The functor G: S⁻¹C -> E with G∘P = H, for H: C -> E inverting S.

    Raises:
        NotInverting: H sends a letter of some representative word to a
            non-invertible morphism
    """
    E = H.target
    mmap = {}
    for m, word in model.representatives.items():
        at = E.identity[H.obj(model.category.src(m))]
        for gen, exp in word:
            u = H(gen)
            if exp == -1:
                inv = inverse_of(E, u)
                if inv is None:
                    raise NotInverting(gen, f"{H.name}({gen}) = {u} has no inverse in {E.name}")
                u = inv
            at = E.compose(u, at)
        mmap[m] = at
    return FunctorData(name or f"{H.name}~", model.category, E, dict(H.omap), mmap)


def localised_functor(T: FunctorData, MC: LocalisationModel, MD: LocalisationModel) -> FunctorData:
    """T̄: S⁻¹C -> S′⁻¹D on decided models, through representative words."""
    mmap = {
        m: MD.evaluate(T.obj(MC.category.src(m)), [(T(g), e) for g, e in word])
        for m, word in MC.representatives.items()
    }
    return FunctorData(f"{T.name}bar", MC.category, MD.category, dict(T.omap), mmap)


# -- equivalence certificate ----------------------------------------------------------


class _Zigzags:
    """Shortest zig-zags in a singleton slice I_d, read off as signed words in C."""

    def __init__(self, family: SliceFamily):
        self.family = family
        self.graph = nx.Graph()
        self.graph.add_nodes_from(family.category.objects)
        K = family.category
        for m in K.non_identities():
            u, v = K.src(m), K.dst(m)
            if u != v and not self.graph.has_edge(u, v):
                self.graph.add_edge(u, v, morphism=m)

    def path(self, a: str, b: str) -> List[Tuple[str, int]]:
        nodes = nx.shortest_path(self.graph, a, b)
        K = self.family.category
        steps = []
        for p, q in zip(nodes, nodes[1:]):
            m = self.graph.edges[p, q]["morphism"]
            steps.append((m, 1 if K.src(m) == p else -1))
        return steps

    def word(self, a: str, b: str) -> List[Letter]:
        return [(self.family.components[m][0][0], sign) for m, sign in self.path(a, b)]


@dataclass
class EquivalenceCertificate:
    """The quasi-inverse F̄ of T̄ with every verification recorded."""

    setup: str
    status: str
    reason: str = ""
    section: Dict[str, Tuple[str, str]] = field(default_factory=dict)
    section_objects: Dict[str, str] = field(default_factory=dict)
    gamma: Dict[str, Dict[str, List[Tuple[str, int]]]] = field(default_factory=dict)
    phi: Dict[str, Dict[str, Any]] = field(default_factory=dict)
    F: Optional[FunctorData] = None
    Fbar: Optional[FunctorData] = None
    Tbar: Optional[FunctorData] = None
    unit: Dict[str, str] = field(default_factory=dict)
    counit: Dict[str, str] = field(default_factory=dict)
    checks: Dict[str, bool] = field(default_factory=dict)
    source_model: Optional[LocalisationModel] = field(default=None, repr=False)
    target_model: Optional[LocalisationModel] = field(default=None, repr=False)
    zigzags: Dict[str, _Zigzags] = field(default_factory=dict, repr=False)

    @property
    def certified(self) -> bool:
        return self.status == CERTIFIED

    def to_dict(self) -> Dict[str, Any]:
        result: Dict[str, Any] = {"setup": self.setup, "status": self.status}
        if self.reason:
            result["reason"] = self.reason
        if self.section:
            result["section"] = {d: {"c": c, "s": s} for d, (c, s) in self.section.items()}
            result["gamma"] = {
                d: {x: [[m, sign] for m, sign in path] for x, path in paths.items()}
                for d, paths in self.gamma.items()
            }
            result["phi"] = self.phi
            result["unit"] = self.unit
            result["counit"] = self.counit
            result["checks"] = self.checks
        if self.F is not None:
            result["F"] = {"objects": dict(self.F.omap), "morphisms": dict(self.F.mmap)}
        return result


def _first_failure(checks: Dict[str, bool]) -> Optional[str]:
    return next((name for name, ok in checks.items() if not ok), None)


def _evaluate_letters(model: LocalisationModel, functor: Dict[str, str], src: str, word: Sequence[Letter]) -> Optional[str]:
    """Evaluate a word whose letters are sent to model morphisms by ``functor``."""
    M = model.category
    at = M.identity[src]
    for gen, exp in word:
        m = functor[gen]
        if exp == -1:
            m = inverse_of(M, m)
            if m is None:
                return None
        at = M.compose(m, at)
    return at


def build_equivalence(
    setup: LocalisationSetup,
    budgets: Optional[Budgets] = None,
    choice_seed: Optional[int] = None,
    require_t0: bool = True,
) -> EquivalenceCertificate:
    """Construct F̄ and verify that it is quasi-inverse to T̄.

    Sections s_d are the least objects of I_d, or seeded draws when
    ``choice_seed`` is given.

    Raises:
        PreconditionViolation: Some hypothesis of the simplicial theorem is
            not a definite Holds
    """
    budgets = budgets or Budgets()
    C, D, T = setup.C, setup.D, setup.T
    if require_t0:
        from .hypotheses import HOLDS, check_t0

        for report in check_t0(setup, budgets):
            if report.status != HOLDS:
                raise PreconditionViolation(report.hypothesis, report.detail or report.status, report.witness)

    MC, MD = localise(C, setup.S, budgets), localise(D, setup.Sprime, budgets)
    if not MC.decided:
        return EquivalenceCertificate(setup.name, UNVERIFIED, f"{MC.S.name}^-1{C.name} undecided: {MC.reason}")
    if not MD.decided:
        return EquivalenceCertificate(setup.name, UNVERIFIED, f"{MD.S.name}^-1{D.name} undecided: {MD.reason}")
    M = MC.category
    cert = EquivalenceCertificate(setup.name, UNVERIFIED, source_model=MC, target_model=MD)

    slices = {d: slice_I(setup, d, budgets.morphism_cap) for d in D.objects}
    rng = np.random.default_rng(choice_seed) if choice_seed is not None else None
    for d in D.objects:
        objs = slices[d].category.objects
        if not objs:
            raise PreconditionViolation("t0.2", f"I_{d} is empty", {"d": d})
        pick = objs[0] if rng is None else objs[int(rng.integers(len(objs)))]
        cert.section_objects[d] = pick
        cert.section[d] = slices[d].payloads[pick]
        cert.zigzags[d] = _Zigzags(slices[d])
        cert.gamma[d] = {x: cert.zigzags[d].path(pick, x) for x in objs}
    z = cert.zigzags
    sec = cert.section_objects

    def gamma_word(d: str, a: str, b: str) -> List[Letter]:
        return z[d].word(a, b)

    def phi_word(f: str, slice_f: SliceFamily, g_obj: str, a0: str, a1: str) -> List[Letter]:
        (x0, x1), trans = slice_f.payloads[g_obj]
        (g,) = dict(trans)[("0", "1")]
        d0, d1 = D.src(f), D.dst(f)
        return gamma_word(d0, a0, slices[d0].object_index[x0]) + [(g, 1)] + gamma_word(
            d1, slices[d1].object_index[x1], a1
        )

    fmap: Dict[str, str] = {}
    well_defined = e11 = True
    for f in sorted(D.morphisms):
        d0, d1 = D.src(f), D.dst(f)
        slice_f = slice_I(setup, chain_diagram(D, [f]), budgets.morphism_cap)
        if not slice_f.category.objects:
            raise PreconditionViolation("t0.2", f"I_{f} is empty", {"f": f})
        rep = slice_f.category.objects[0]
        c0 = cert.section[d0][0]
        word = phi_word(f, slice_f, rep, sec[d0], sec[d1])
        fmap[f] = MC.evaluate(c0, word)
        cert.phi[f] = {"representative": rep, "word": word_to_str(word), "value": fmap[f]}
        for other in slice_f.category.objects[1:]:
            if MC.evaluate(c0, phi_word(f, slice_f, other, sec[d0], sec[d1])) != fmap[f]:
                well_defined = False
        for a0 in slices[d0].category.objects:
            for a1 in slices[d1].category.objects:
                src = slices[d0].payloads[a0][0]
                direct = MC.evaluate(src, phi_word(f, slice_f, rep, a0, a1))
                via = MC.evaluate(src, gamma_word(d0, a0, sec[d0]) + word + gamma_word(d1, sec[d1], a1))
                if direct != via:
                    e11 = False

    F = FunctorData("F", D, M, {d: cert.section[d][0] for d in D.objects}, fmap)
    cert.F = F
    checks = cert.checks
    checks["lemma.identity"] = all(M.is_identity(F(D.identity[d])) for d in D.objects)
    checks["lemma.cocycle"] = all(F(D.compose(g, f)) == M.compose(F(g), F(f)) for g, f in D.composable_pairs())
    checks["lemma.invertible"] = all(is_isomorphism(M, F(f)) for f in setup.Sprime.members)
    checks["phi.well_defined"] = well_defined
    checks["e11"] = e11

    fbar_map = {}
    for n, word in MD.representatives.items():
        value = _evaluate_letters(MC, fmap, F.obj(MD.category.src(n)), word)
        if value is None:
            checks["Fbar.functor"] = False
            break
        fbar_map[n] = value
    else:
        Fbar = FunctorData("Fbar", MD.category, M, dict(F.omap), fbar_map)
        checks["Fbar.functor"] = validate_functor(Fbar).passed and all(
            Fbar(MD.P(f)) == F(f) for f in D.morphisms
        )
        cert.Fbar = Fbar

    Tbar = localised_functor(T, MC, MD)
    cert.Tbar = Tbar
    checks["Tbar.functor"] = validate_functor(Tbar).passed and all(
        Tbar(MC.P(g)) == MD.P(T(g)) for g in C.morphisms
    )

    for c in C.objects:
        d = T.obj(c)
        target = slices[d].object_index[(c, D.identity[d])]
        cert.counit[c] = MC.evaluate(cert.section[d][0], gamma_word(d, sec[d], target))
    for d in D.objects:
        cert.unit[d] = MD.P(cert.section[d][1])
    checks["unit_counit.iso"] = all(is_isomorphism(M, e) for e in cert.counit.values()) and all(
        is_isomorphism(MD.category, u) for u in cert.unit.values()
    )

    if cert.Fbar is not None:
        Fbar = cert.Fbar
        N = MD.category
        checks["counit.natural"] = all(
            M.compose(m, cert.counit[M.src(m)]) == M.compose(cert.counit[M.dst(m)], Fbar(Tbar(m)))
            for m in M.morphisms
        )
        checks["unit.natural"] = all(
            N.compose(Tbar(Fbar(n)), cert.unit[N.src(n)]) == N.compose(cert.unit[N.dst(n)], n)
            for n in N.morphisms
        )
    failure = _first_failure(checks)
    if failure is None:
        cert.status = CERTIFIED
    else:
        cert.reason = f"check {failure} failed"
    logger.info("equivalence certificate for %s: %s", setup.name, cert.status)
    return cert


def compare_certificates(a: EquivalenceCertificate, b: EquivalenceCertificate) -> Dict[str, Any]:
    """The comparison isomorphism F̄_a ⇒ F̄_b built from zig-zags between the two sections."""
    if not (a.certified and b.certified):
        return {"holds": False, "failure": "uncertified input"}
    MC = a.source_model
    M = MC.category
    theta = {
        d: MC.evaluate(a.section[d][0], a.zigzags[d].word(a.section_objects[d], b.section_objects[d]))
        for d in a.section
    }
    N = a.target_model.category
    for d, t in theta.items():
        if not is_isomorphism(M, t):
            return {"holds": False, "components": theta, "failure": {"not invertible": d}}
    for n in N.morphisms:
        d0, d1 = N.src(n), N.dst(n)
        if M.compose(theta[d1], a.Fbar(n)) != M.compose(b.Fbar(n), theta[d0]):
            return {"holds": False, "components": theta, "failure": {"naturality": n}}
    return {"holds": True, "components": theta}


# -- Kan extension ----------------------------------------------------------------------


@dataclass
class KanExtensionResult:
    """RF = G∘F̄ and η: F ⇒ RF∘Q."""

    RF: FunctorData
    eta: Dict[str, str]
    independent: bool
    natural: bool
    candidates: Dict[str, Dict[str, str]] = field(default_factory=dict)

    @property
    def status(self) -> str:
        return CERTIFIED if self.independent and self.natural else UNVERIFIED

    def to_dict(self) -> Dict[str, Any]:
        return {
            "status": self.status,
            "RF": {"objects": dict(self.RF.omap), "morphisms": dict(self.RF.mmap)},
            "eta": self.eta,
            "independent": self.independent,
            "natural": self.natural,
        }


def kan_extend(
    setup: LocalisationSetup,
    F: FunctorData,
    G: FunctorData,
    certificate: Optional[EquivalenceCertificate] = None,
    budgets: Optional[Budgets] = None,
) -> KanExtensionResult:
    """Extend F: D -> E along Q, given G: S⁻¹C -> E with G∘P = F∘T.

    Raises:
        PreconditionViolation: Uncertified equivalence, mismatched endpoints
            or G∘P ≠ F∘T
        NotInverting: FT does not invert some s ∈ S
    """
    cert = certificate or build_equivalence(setup, budgets)
    if not cert.certified:
        raise PreconditionViolation("certified equivalence", cert.reason)
    MC, MD = cert.source_model, cert.target_model
    C, D, T = setup.C, setup.D, setup.T
    E = F.target
    if F.source != D or G.source != MC.category or G.target != E:
        raise PreconditionViolation("functor endpoints", f"{F.name}: D -> E and {G.name}: S^-1C -> E expected")
    for s in setup.S.non_identities():
        if not is_isomorphism(E, F(T(s))):
            raise NotInverting(s, f"{F.name}({T(s)}) has no inverse")
    for g in sorted(C.morphisms):
        if G(MC.P(g)) != F(T(g)):
            raise PreconditionViolation("G P = F T", f"differs on {g}", {"morphism": g})

    RF = compose_functors(G, cert.Fbar)
    slices = {d: cert.zigzags[d].family for d in D.objects}
    eta: Dict[str, str] = {}
    candidates: Dict[str, Dict[str, str]] = {}
    independent = True
    for d in D.objects:
        values = {}
        for x, (c, s) in slices[d].payloads.items():
            back_counit = inverse_of(E, G(cert.counit[c]))
            back_section = inverse_of(E, G(cert.Fbar(MD.P(s))))
            if back_counit is None or back_section is None:
                independent = False
                continue
            values[x] = E.compose(back_section, E.compose(back_counit, F(s)))
        candidates[d] = values
        eta[d] = values.get(cert.section_objects[d], "")
        if len(set(values.values())) > 1:
            independent = False
    natural = all(
        eta[D.dst(f)] and eta[D.src(f)] and E.compose(eta[D.dst(f)], F(f)) == E.compose(RF(MD.P(f)), eta[D.src(f)])
        for f in D.morphisms
    )
    result = KanExtensionResult(RF, eta, independent, natural, candidates)
    logger.info("extension of %s along %s: %s", F.name, setup.name, result.status)
    return result


# -- oracle --------------------------------------------------------------------------------


EQUIVALENCE = "Equivalence"
NOT_EQUIVALENCE = "NotEquivalence"
UNDECIDED = "Undecided"


@dataclass
class OracleVerdict:
    status: str
    witness: Dict[str, Any] = field(default_factory=dict)

    def to_dict(self) -> Dict[str, Any]:
        return {"status": self.status, "witness": self.witness}


def equivalence_oracle(setup: LocalisationSetup, budgets: Optional[Budgets] = None) -> OracleVerdict:
    """Check full faithfulness and essential surjectivity of T̄ directly."""
    MC = localise(setup.C, setup.S, budgets)
    MD = localise(setup.D, setup.Sprime, budgets)
    if not (MC.decided and MD.decided):
        return OracleVerdict(UNDECIDED, {"reason": MC.reason or MD.reason})
    Tbar = localised_functor(setup.T, MC, MD)
    M, N = MC.category, MD.category
    for x in M.objects:
        for y in M.objects:
            images = {Tbar(m) for m in M.hom(x, y)}
            if len(images) != len(M.hom(x, y)):
                return OracleVerdict(NOT_EQUIVALENCE, {"not faithful": [x, y]})
            if len(images) != len(N.hom(Tbar.obj(x), Tbar.obj(y))):
                return OracleVerdict(NOT_EQUIVALENCE, {"not full": [x, y]})
    for d in N.objects:
        if not any(
            is_isomorphism(N, u) for c in M.objects for u in N.hom(Tbar.obj(c), d)
        ):
            return OracleVerdict(NOT_EQUIVALENCE, {"not essentially surjective": d})
    return OracleVerdict(EQUIVALENCE)
