"""Comma categories, the slices I_d, J_d, I̲_d over diagram indices, and cofinality."""

import logging
from dataclasses import dataclass, field
from typing import (
    TYPE_CHECKING,
    Any,
    Callable,
    Collection,
    Dict,
    FrozenSet,
    Hashable,
    List,
    Optional,
    Sequence,
    Tuple,
    Union,
)

from networkx.utils import UnionFind

from ..errors import BudgetExceeded
from .catalog import point
from .connectivity import pi0
from .core import (
    DEFAULT_MORPHISM_CAP,
    Diagram,
    FinCategory,
    FunctorData,
    assemble_category,
    chain_diagram,
    compose_functors,
    constant_functor,
    enumerate_section_maps,
    enumerate_sections,
    full_subcategory,
    identity_functor,
    point_diagram,
    validate_functor,
)

if TYPE_CHECKING:
    from .setup import LocalisationSetup

logger = logging.getLogger(__name__)

Index = Union[str, Diagram]


@dataclass
class CommaCategory:
    """F↓G for F: A -> C and G: B -> C."""

    carrier: FinCategory
    proj_left: FunctorData
    proj_right: FunctorData
    object_decode: Dict[str, Tuple[str, str, str]]
    morphism_decode: Dict[str, Tuple[str, str]]
    object_index: Dict[Tuple[str, str, str], str]
    morphism_index: Dict[Tuple[str, str, str, str], str]
    fibred_objects: FrozenSet[str] = frozenset()

    def fibred_product(self) -> FinCategory:
        """The full subcategory on triples whose arrow is an identity."""
        return full_subcategory(self.carrier, self.fibred_objects, f"{self.carrier.name}_fib")


def comma(F: FunctorData, G: FunctorData, cap: int = DEFAULT_MORPHISM_CAP) -> CommaCategory:
    """Build F↓G.

    Objects are triples (a, b, f: F(a) -> G(b)); a morphism
    (a, b, f) -> (a', b', f') is a pair (φ, ψ) with G(ψ)f = f'F(φ).

    Raises:
        ValueError: If F and G have different targets
        BudgetExceeded: More than ``cap`` morphisms
    """
    if F.target != G.target:
        raise ValueError(f"{F.name} and {G.name} do not share a target")
    A, B, C = F.source, G.source, F.target
    triples = [
        (a, b, f)
        for a in A.objects
        for b in B.objects
        for f in C.hom(F.obj(a), G.obj(b))
    ]
    ids = {t: f"({t[0]},{t[1]},{t[2]})" for t in triples}
    arrows = []
    for x in triples:
        for y in triples:
            for phi in A.hom(x[0], y[0]):
                for psi in B.hom(x[1], y[1]):
                    if C.compose(G(psi), x[2]) == C.compose(y[2], F(phi)):
                        arrows.append(((ids[x], ids[y], phi, psi), ids[x], ids[y]))

    def compose(g: Tuple, f: Tuple) -> Tuple:
        return (f[0], g[1], A.compose(g[2], f[2]), B.compose(g[3], f[3]))

    decode = {v: k for k, v in ids.items()}

    def ident(x: str) -> Tuple:
        a, b, _ = decode[x]
        return (x, x, A.identity[a], B.identity[b])

    carrier, names = assemble_category(
        f"{F.name}|{G.name}",
        ids.values(),
        arrows,
        compose,
        ident,
        lambda k: f"({k[2]},{k[3]}):{k[0]}->{k[1]}",
        cap,
    )
    morphism_decode = {name: (k[2], k[3]) for k, name in names.items()}
    left = FunctorData(
        f"{carrier.name}->{A.name}",
        carrier,
        A,
        {x: decode[x][0] for x in carrier.objects},
        {m: morphism_decode[m][0] for m in carrier.morphisms},
    )
    right = FunctorData(
        f"{carrier.name}->{B.name}",
        carrier,
        B,
        {x: decode[x][1] for x in carrier.objects},
        {m: morphism_decode[m][1] for m in carrier.morphisms},
    )
    fibred = frozenset(x for x, (_, _, f) in decode.items() if C.is_identity(f))
    return CommaCategory(carrier, left, right, decode, morphism_decode, ids, dict(names), fibred)


def under_functor(F: FunctorData, obj: str, cap: int = DEFAULT_MORPHISM_CAP) -> CommaCategory:
    """F/obj, the comma category F↓obj."""
    return comma(F, constant_functor(point(), F.target, obj), cap)


# -- pointwise slice engine ----------------------------------------------------


class _SliceModel:
    """Local data of a slice at one index object, plus its transitions."""

    def local_objects(self, d: str) -> List[Tuple]:
        raise NotImplementedError

    def transitions(self, x: Tuple, y: Tuple, r: str) -> List[Tuple]:
        raise NotImplementedError

    def verticals(self, x: Tuple, y: Tuple) -> List[Tuple]:
        raise NotImplementedError

    def compose(self, a2: Tuple, a1: Tuple) -> Tuple:
        raise NotImplementedError

    def identity(self, x: Tuple) -> Tuple:
        raise NotImplementedError

    @staticmethod
    def encode(x: Tuple) -> str:
        return "(" + ",".join(x) + ")"

    @staticmethod
    def encode_arrow(a: Tuple) -> str:
        return a[0] if len(a) == 1 else "(" + ",".join(a) + ")"


class _UnderModel(_SliceModel):
    """Pairs (c, s: d -> T(c)) with s in ``right``; verticals in ``left``."""

    def __init__(self, C: FinCategory, D: FinCategory, T: FunctorData, left: Collection[str], right: Collection[str]):
        self.C, self.D, self.T = C, D, T
        self.left, self.right = left, right

    def local_objects(self, d: str) -> List[Tuple]:
        return [
            (c, s)
            for c in self.C.objects
            for s in self.D.hom(d, self.T.obj(c))
            if s in self.right
        ]

    def transitions(self, x: Tuple, y: Tuple, r: str) -> List[Tuple]:
        (c, s), (c2, s2) = x, y
        target = self.D.compose(s2, r)
        return [(g,) for g in self.C.hom(c, c2) if self.D.compose(self.T(g), s) == target]

    def verticals(self, x: Tuple, y: Tuple) -> List[Tuple]:
        (c, s), (c2, s2) = x, y
        return [
            (g,)
            for g in self.C.hom(c, c2)
            if g in self.left and self.D.compose(self.T(g), s) == s2
        ]

    def compose(self, a2: Tuple, a1: Tuple) -> Tuple:
        return (self.C.compose(a2[0], a1[0]),)

    def identity(self, x: Tuple) -> Tuple:
        return (self.C.identity[x[0]],)


class _UnderlineModel(_SliceModel):
    """Diagrams (u, c, j: u -> d, s: u -> T(c)) with j, s ∈ S′."""

    def __init__(self, C: FinCategory, D: FinCategory, T: FunctorData, S: Collection[str], Sprime: Collection[str]):
        self.C, self.D, self.T = C, D, T
        self.S, self.Sprime = S, Sprime

    def local_objects(self, d: str) -> List[Tuple]:
        D = self.D
        return [
            (u, c, j, s)
            for u in D.objects
            for j in D.hom(u, d)
            if j in self.Sprime
            for c in self.C.objects
            for s in D.hom(u, self.T.obj(c))
            if s in self.Sprime
        ]

    def transitions(self, x: Tuple, y: Tuple, r: str) -> List[Tuple]:
        (u, c, j, s), (u2, c2, j2, s2) = x, y
        D = self.D
        result = []
        for v in D.hom(u, u2):
            if D.compose(j2, v) != D.compose(r, j):
                continue
            for g in self.C.hom(c, c2):
                if D.compose(self.T(g), s) == D.compose(s2, v):
                    result.append((v, g))
        return result

    def verticals(self, x: Tuple, y: Tuple) -> List[Tuple]:
        (u, c, j, s), (u2, c2, j2, s2) = x, y
        D = self.D
        result = []
        for t in D.hom(u, u2):
            if t not in self.Sprime or D.compose(j2, t) != j:
                continue
            for g in self.C.hom(c, c2):
                if g in self.S and D.compose(self.T(g), s) == D.compose(s2, t):
                    result.append((t, g))
        return result

    def compose(self, a2: Tuple, a1: Tuple) -> Tuple:
        return (self.D.compose(a2[0], a1[0]), self.C.compose(a2[1], a1[1]))

    def identity(self, x: Tuple) -> Tuple:
        return (self.D.identity[x[0]], self.C.identity[x[1]])


@dataclass
class SliceFamily:
    """A slice category at an object or diagram index, with decoding tables.

    For a one-element index a payload is the local tuple ((c, s) for I and
    J, (u, c, j, s) for I̲); for larger indices it is (locals in linear
    order, sorted transitions).
    """

    kind: str
    index: Diagram
    category: FinCategory
    payloads: Dict[str, Any]
    object_index: Dict[Any, str]
    morphism_index: Dict[Tuple[str, str, Tuple], str]
    components: Dict[str, Tuple]
    forget: Optional[FunctorData] = None
    under: str = "D"

    @property
    def is_empty(self) -> bool:
        return not self.category.objects

    def least_object(self) -> Optional[str]:
        return self.category.objects[0] if self.category.objects else None


def _as_diagram(index: Index) -> Diagram:
    return point_diagram(index) if isinstance(index, str) else index


def _cached(setup: "LocalisationSetup", key: Hashable, build: Callable[[], Any]) -> Any:
    cache = setup.slices
    if key not in cache:
        cache[key] = build()
    return cache[key]


def _classes_key(members: Optional[Collection[str]]) -> Optional[FrozenSet[str]]:
    return None if members is None else frozenset(members)


def _slice_key(
    kind: str,
    diagram: Diagram,
    cap: int,
    under: str = "D",
    S: Optional[Collection[str]] = None,
    Sprime: Optional[Collection[str]] = None,
) -> Tuple:
    if kind == "I":
        return ("I", diagram, cap, _classes_key(S), _classes_key(Sprime))
    if kind == "J":
        return ("J", diagram, under, cap)
    return (kind, diagram, cap)


def _sections(model: _SliceModel, diagram: Diagram, cap: int) -> Tuple[Dict[str, Any], Dict[str, Tuple]]:
    """Slice objects at ``diagram``: payloads and raw sections, by object id."""
    poset = diagram.poset
    sections = enumerate_sections(
        poset,
        lambda e: model.local_objects(diagram.at(e)),
        lambda a, b, x, y: model.transitions(x, y, diagram.arrow(a, b)),
        model.compose,
        cap,
    )
    single = len(poset) == 1

    def encode(values: Tuple, trans: Tuple) -> str:
        if single:
            return model.encode(values[0])
        body = ";".join(model.encode(v) for v in values)
        links = ",".join(f"{a}<{b}:{model.encode_arrow(t)}" for (a, b), t in trans)
        return f"<{body}|{links}>" if links else f"<{body}>"

    payloads = {}
    raw = {}
    for values, trans in sections:
        oid = encode(values, trans)
        payloads[oid] = values[0] if single else (values, trans)
        raw[oid] = (values, dict(trans))
    return payloads, raw


def _build_slice(model: _SliceModel, diagram: Diagram, kind: str, name: str, cap: int, under: str = "D") -> SliceFamily:
    poset = diagram.poset
    payloads, raw = _sections(model, diagram, cap)

    arrows = []
    for x in sorted(raw):
        for y in sorted(raw):
            for comps in enumerate_section_maps(poset, raw[x], raw[y], model.verticals, model.compose):
                arrows.append(((x, y, comps), x, y))
                if len(arrows) > cap:
                    raise BudgetExceeded("morphism_cap", cap, name)

    def compose(g: Tuple, f: Tuple) -> Tuple:
        return (f[0], g[1], tuple(model.compose(b, a) for b, a in zip(g[2], f[2])))

    def ident(x: str) -> Tuple:
        return (x, x, tuple(model.identity(v) for v in raw[x][0]))

    def label(key: Tuple) -> str:
        return "[" + ";".join(model.encode_arrow(c) for c in key[2]) + f"]:{key[0]}->{key[1]}"

    category, names = assemble_category(name, payloads, arrows, compose, ident, label, cap)
    logger.debug("slice %s: %d objects, %d morphisms", name, len(category.objects), len(category))
    return SliceFamily(
        kind,
        diagram,
        category,
        payloads,
        {p: oid for oid, p in payloads.items()},
        dict(names),
        {m: k[2] for k, m in names.items()},
        under=under,
    )


def _index_label(diagram: Diagram) -> str:
    if len(diagram.poset) == 1:
        return diagram.objects[0][1]
    return diagram.label()


def _model_for(setup: "LocalisationSetup", kind: str, under: str = "D", S=None, Sprime=None) -> _SliceModel:
    if kind == "I":
        left = setup.S.members if S is None else S
        right = setup.Sprime.members if Sprime is None else Sprime
        return _UnderModel(setup.C, setup.D, setup.T, left, right)
    if kind == "J":
        if under == "D":
            D = setup.D
            return _UnderModel(D, D, identity_functor(D), D.morphisms, D.morphisms)
        if under == "T":
            return _UnderModel(setup.C, setup.D, setup.T, setup.C.morphisms, setup.D.morphisms)
        raise ValueError(f"unknown J flavour: {under}")
    if kind == "I_underline":
        return _UnderlineModel(setup.C, setup.D, setup.T, setup.S.members, setup.Sprime.members)
    raise ValueError(f"unknown slice kind: {kind}")


def slice_I(
    setup: "LocalisationSetup",
    index: Index,
    cap: int = DEFAULT_MORPHISM_CAP,
    S: Optional[Collection[str]] = None,
    Sprime: Optional[Collection[str]] = None,
) -> SliceFamily:
    """I_{d•}: pairs (c•, s•: d• -> T(c•)) with s• ∈ S′(E), morphisms in S(E).

    ``S`` and ``Sprime`` replace the setup's classes (used for ⟨I⟩ slices).
    Families are cached on the setup.
    """
    diagram = _as_diagram(index)
    key = _slice_key("I", diagram, cap, S=S, Sprime=Sprime)

    def build() -> SliceFamily:
        model = _model_for(setup, "I", S=S, Sprime=Sprime)
        kind = "I" if S is None and Sprime is None else "I_saturated"
        family = _build_slice(model, diagram, kind, f"I[{_index_label(diagram)}]", cap)
        if len(diagram.poset) == 1:
            family.forget = FunctorData(
                f"{family.category.name}->{setup.C.name}",
                family.category,
                setup.C,
                {x: p[0] for x, p in family.payloads.items()},
                {m: comps[0][0] for m, comps in family.components.items()},
            )
        return family

    return _cached(setup, key, build)


def slice_J(
    setup: "LocalisationSetup",
    index: Index,
    under: str = "D",
    cap: int = DEFAULT_MORPHISM_CAP,
) -> SliceFamily:
    """J_{d•}: d•\\D (``under="D"``) or d•\\T (``under="T"``)."""
    diagram = _as_diagram(index)
    model = _model_for(setup, "J", under)
    return _cached(
        setup,
        _slice_key("J", diagram, cap, under),
        lambda: _build_slice(model, diagram, "J", f"J{under}[{_index_label(diagram)}]", cap, under),
    )


def slice_I_underline(setup: "LocalisationSetup", index: Index, cap: int = DEFAULT_MORPHISM_CAP) -> SliceFamily:
    """I̲_{d•}: diagrams (u, j: u -> d, s: u -> T(c)) with j, s ∈ S′."""
    diagram = _as_diagram(index)
    model = _model_for(setup, "I_underline")
    return _cached(
        setup,
        _slice_key("I_underline", diagram, cap),
        lambda: _build_slice(model, diagram, "I_underline", f"I_[{_index_label(diagram)}]", cap),
    )


def slice_components(
    setup: "LocalisationSetup",
    index: Index,
    kind: str = "I",
    cap: int = DEFAULT_MORPHISM_CAP,
) -> List[List[str]]:
    """π0 of a slice, from the section-map graph alone.

    Two slice objects are joined when some section map runs between them in
    either direction; no composition table is built. A family already in the
    cache is reused.
    """
    diagram = _as_diagram(index)
    built = setup.slices.get(_slice_key(kind, diagram, cap))
    if built is not None:
        return pi0(built.category)
    model = _model_for(setup, kind)
    return _cached(setup, ("pi0", kind, diagram, cap), lambda: _section_components(model, diagram, cap))


def _section_components(model: _SliceModel, diagram: Diagram, cap: int) -> List[List[str]]:
    _, raw = _sections(model, diagram, cap)

    def linked(x: str, y: str) -> bool:
        return bool(enumerate_section_maps(diagram.poset, raw[x], raw[y], model.verticals, model.compose, limit=1))

    parts = UnionFind(raw)
    ids = sorted(raw)
    for i, x in enumerate(ids):
        for y in ids[i + 1:]:
            if parts[x] == parts[y]:
                continue
            if linked(x, y) or linked(y, x):
                parts.union(x, y)
    return sorted(sorted(part) for part in parts.to_sets())


def phi_comparison(
    setup: "LocalisationSetup",
    d: str,
    under: str = "D",
    I: Optional[SliceFamily] = None,
    J: Optional[SliceFamily] = None,
    cap: int = DEFAULT_MORPHISM_CAP,
) -> FunctorData:
    """Φ_d: I_d -> J_d, (c, s) ↦ (T(c), s) (or (c, s) into d\\T)."""
    I = I or slice_I(setup, d, cap)
    J = J or slice_J(setup, d, under, cap)
    T = setup.T

    def image(payload: Tuple) -> Tuple:
        c, s = payload
        return (T.obj(c), s) if under == "D" else (c, s)

    omap = {x: J.object_index[image(p)] for x, p in I.payloads.items()}
    mmap = {}
    for (x, y, comps), m in I.morphism_index.items():
        (sigma,) = comps[0]
        arrow = T(sigma) if under == "D" else sigma
        mmap[m] = J.morphism_index[(omap[x], omap[y], ((arrow,),))]
    return FunctorData(f"Phi[{d}]", I.category, J.category, omap, mmap)


def face_payload(payload: Any, order: Sequence[str], keep: Sequence[str]) -> Any:
    """Restrict a chain-indexed slice payload to the elements ``keep``."""
    values, trans = payload
    lookup = dict(trans)
    pos = {e: i for i, e in enumerate(order)}
    kept = tuple(values[pos[e]] for e in keep)
    if len(keep) == 1:
        return kept[0]
    links = tuple(
        sorted(
            ((str(i), str(j)), lookup[(keep[i], keep[j])])
            for i in range(len(keep))
            for j in range(i + 1, len(keep))
        )
    )
    return kept, links


# -- cofinality ---------------------------------------------------------------


@dataclass
class CofinalityReport:
    """0-connectedness of L/j for every target object j."""

    functor: str
    verdicts: Dict[str, bool] = field(default_factory=dict)
    components: Dict[str, List[List[str]]] = field(default_factory=dict)
    component_bijection: Optional[bool] = None

    @property
    def cofinal(self) -> bool:
        return all(self.verdicts.values())

    def first_failure(self) -> Optional[str]:
        for j in sorted(self.verdicts):
            if not self.verdicts[j]:
                return j
        return None


def is_cofinal(L: FunctorData, cap: int = DEFAULT_MORPHISM_CAP) -> CofinalityReport:
    """Check that every L/j is 0-connected; cross-check π0 of source and target."""
    report = CofinalityReport(L.name)
    for j in L.target.objects:
        parts = pi0(under_functor(L, j, cap).carrier)
        report.components[j] = parts
        report.verdicts[j] = len(parts) == 1

    source_parts, target_parts = pi0(L.source), pi0(L.target)
    where = {x: i for i, part in enumerate(target_parts) for x in part}
    images = [where[L.obj(part[0])] for part in source_parts]
    report.component_bijection = len(set(images)) == len(images) == len(target_parts)
    return report


def check_comma_section(F: FunctorData, G: FunctorData, b: str, cap: int = DEFAULT_MORPHISM_CAP) -> bool:
    """G_*: F′/b -> F/G(b) composed with its section G^! is the identity.

    F′ is the projection F↓G -> B.
    """
    K = comma(F, G, cap)
    over_b = under_functor(K.proj_right, b, cap)
    over_gb = under_functor(F, G.obj(b), cap)
    C = F.target
    pt = point().objects[0]
    id_pt = point().identity[pt]

    push_obj = {}
    for x, (k, _, psi) in over_b.object_decode.items():
        a, _, f = K.object_decode[k]
        push_obj[x] = over_gb.object_index[(a, pt, C.compose(G(psi), f))]
    push_mor = {}
    for m, (kappa, _) in over_b.morphism_decode.items():
        phi, _ = K.morphism_decode[kappa]
        x, y = over_b.carrier.src(m), over_b.carrier.dst(m)
        push_mor[m] = over_gb.morphism_index[(push_obj[x], push_obj[y], phi, id_pt)]

    section_obj = {}
    id_b = G.source.identity[b]
    for x, (a, _, h) in over_gb.object_decode.items():
        k = K.object_index[(a, b, h)]
        section_obj[x] = over_b.object_index[(k, pt, id_b)]
    section_mor = {}
    for m, (phi, _) in over_gb.morphism_decode.items():
        x, y = over_gb.carrier.src(m), over_gb.carrier.dst(m)
        kx, ky = over_b.object_decode[section_obj[x]][0], over_b.object_decode[section_obj[y]][0]
        kappa = K.morphism_index[(kx, ky, phi, id_b)]
        section_mor[m] = over_b.morphism_index[(section_obj[x], section_obj[y], kappa, id_pt)]

    push = FunctorData("G_*", over_b.carrier, over_gb.carrier, push_obj, push_mor)
    section = FunctorData("G^!", over_gb.carrier, over_b.carrier, section_obj, section_mor)
    if not (validate_functor(push).passed and validate_functor(section).passed):
        return False
    round_trip = compose_functors(push, section)
    return all(round_trip.obj(x) == x for x in over_gb.carrier.objects) and all(
        round_trip(m) == m for m in over_gb.carrier.morphisms
    )


def eqcomma_bijection(setup: "LocalisationSetup", arrows: Sequence[str], cap: int = DEFAULT_MORPHISM_CAP) -> bool:
    """I over the chain d0 -> … -> dn against Φ_{d0} ↓ (f1* ∘ Φ_{d1} ∘ v).

    Uses J = d\\T. Returns True iff the canonical map is a bijection on
    objects and on morphisms.
    """
    D = setup.D
    whole = slice_I(setup, chain_diagram(D, arrows), cap)
    d0, d1 = D.src(arrows[0]), D.dst(arrows[0])
    head = slice_I(setup, d0, cap)
    first = slice_I(setup, d1, cap)
    tail = slice_I(setup, chain_diagram(D, arrows[1:]), cap) if len(arrows) > 1 else first
    J0, J1 = slice_J(setup, d0, "T", cap), slice_J(setup, d1, "T", cap)
    phi0 = phi_comparison(setup, d0, "T", head, J0)
    phi1 = phi_comparison(setup, d1, "T", first, J1)

    f1 = arrows[0]
    pull_obj = {x: J0.object_index[(c, D.compose(j, f1))] for x, (c, j) in J1.payloads.items()}
    pull_mor = {
        m: J0.morphism_index[(pull_obj[x], pull_obj[y], comps)]
        for (x, y, comps), m in J1.morphism_index.items()
    }
    pull = FunctorData("f1*", J1.category, J0.category, pull_obj, pull_mor)

    if tail is first:
        restrict = FunctorData(
            "v",
            first.category,
            first.category,
            {x: x for x in first.category.objects},
            {m: m for m in first.category.morphisms},
        )
    else:
        order = tail.index.poset.linear_order()
        r_obj = {x: first.object_index[face_payload(p, order, [order[0]])] for x, p in tail.payloads.items()}
        r_mor = {
            m: first.morphism_index[(r_obj[x], r_obj[y], (comps[0],))]
            for (x, y, comps), m in tail.morphism_index.items()
        }
        restrict = FunctorData("v", tail.category, first.category, r_obj, r_mor)
    K = comma(phi0, compose_functors(pull, compose_functors(phi1, restrict)), cap)

    order = whole.index.poset.linear_order()
    rest = order[1:]
    obj_map = {}
    for x, payload in whole.payloads.items():
        values, trans = payload
        a = head.object_index[values[0]]
        b = tail.object_index[face_payload(payload, order, rest)]
        link = dict(trans)[(order[0], order[1])]
        u_src = phi0.obj(a)
        u_dst = pull.obj(phi1.obj(restrict.obj(b)))
        u = J0.morphism_index.get((u_src, u_dst, (link,)))
        key = (a, b, u)
        if u is None or key not in K.object_index:
            return False
        obj_map[x] = K.object_index[key]
    if len(set(obj_map.values())) != len(obj_map) or len(obj_map) != len(K.carrier.objects):
        return False

    mor_map = {}
    for (x, y, comps), m in whole.morphism_index.items():
        wx, wy = whole.payloads[x], whole.payloads[y]
        phi = head.morphism_index[(head.object_index[wx[0][0]], head.object_index[wy[0][0]], (comps[0],))]
        bx = tail.object_index[face_payload(wx, order, rest)]
        by = tail.object_index[face_payload(wy, order, rest)]
        tail_comps = comps[1:] if tail is not first else (comps[1],)
        psi = tail.morphism_index.get((bx, by, tail_comps))
        key = (obj_map[x], obj_map[y], phi, psi)
        if psi is None or key not in K.morphism_index:
            return False
        mor_map[m] = K.morphism_index[key]
    return len(set(mor_map.values())) == len(mor_map) == len(K.carrier.morphisms)
