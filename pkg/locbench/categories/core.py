"""Finite categories, functors, marked classes, posets and diagram categories.

A category is stored as an explicit composition table. Object and morphism
ids are opaque strings ordered lexicographically wherever a choice has to
be made. Identities are always named ``id_<object>``.
"""

import itertools
import logging
from collections import defaultdict
from dataclasses import dataclass, field
from typing import (
    Any,
    Callable,
    Dict,
    FrozenSet,
    Hashable,
    Iterable,
    Iterator,
    List,
    Mapping,
    Optional,
    Sequence,
    Tuple,
)

from ..errors import BudgetExceeded

logger = logging.getLogger(__name__)

DEFAULT_MORPHISM_CAP = 10000


def identity_name(obj: str) -> str:
    """Reserved name of the identity on ``obj``."""
    return f"id_{obj}"


@dataclass(frozen=True)
class Morphism:
    """A morphism record."""

    name: str
    src: str
    dst: str


class FinCategory:
    """A finite category given by a total composition table.

    The constructor stores whatever it is given; malformed tables are
    detected by :func:`validate_category`, not here.
    """

    def __init__(
        self,
        name: str,
        objects: Iterable[str],
        morphisms: Iterable[Morphism],
        identity: Mapping[str, str],
        table: Mapping[Tuple[str, str], str],
    ):
        self.name = name
        self.objects: Tuple[str, ...] = tuple(sorted(set(objects)))
        self.morphisms: Dict[str, Morphism] = {
            m.name: m for m in sorted(morphisms, key=lambda m: m.name)
        }
        self.identity: Dict[str, str] = dict(identity)
        self.table: Dict[Tuple[str, str], str] = dict(table)
        self._identities = frozenset(self.identity.values())
        hom: Dict[Tuple[str, str], List[str]] = defaultdict(list)
        outgoing: Dict[str, List[str]] = defaultdict(list)
        incoming: Dict[str, List[str]] = defaultdict(list)
        for m in self.morphisms.values():
            hom[(m.src, m.dst)].append(m.name)
            outgoing[m.src].append(m.name)
            incoming[m.dst].append(m.name)
        self._hom = {k: tuple(v) for k, v in hom.items()}
        self._out = {k: tuple(v) for k, v in outgoing.items()}
        self._in = {k: tuple(v) for k, v in incoming.items()}
        self._cache: Dict[Hashable, Any] = {}

    def __repr__(self) -> str:
        return f"FinCategory({self.name!r}, {len(self.objects)} objects, {len(self.morphisms)} morphisms)"

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, FinCategory):
            return NotImplemented
        return (
            self.objects == other.objects
            and self.morphisms == other.morphisms
            and self.identity == other.identity
            and self.table == other.table
        )

    def __hash__(self) -> int:
        return hash((self.objects, len(self.morphisms), len(self.table)))

    def __len__(self) -> int:
        return len(self.morphisms)

    def src(self, f: str) -> str:
        return self.morphisms[f].src

    def dst(self, f: str) -> str:
        return self.morphisms[f].dst

    def hom(self, x: str, y: str) -> Tuple[str, ...]:
        """Morphisms x -> y in lexicographic order."""
        return self._hom.get((x, y), ())

    def out_of(self, x: str) -> Tuple[str, ...]:
        return self._out.get(x, ())

    def into(self, y: str) -> Tuple[str, ...]:
        return self._in.get(y, ())

    def compose(self, g: str, f: str) -> str:
        """Return g∘f."""
        return self.table[(g, f)]

    def compose_all(self, *ms: str) -> str:
        """Compose in applicative order: compose_all(h, g, f) = h∘g∘f."""
        result = ms[-1]
        for m in reversed(ms[:-1]):
            result = self.compose(m, result)
        return result

    def is_identity(self, f: str) -> bool:
        return f in self._identities

    def non_identities(self) -> List[str]:
        return [m for m in self.morphisms if m not in self._identities]

    def composable_pairs(self) -> Iterator[Tuple[str, str]]:
        """All pairs (g, f) with src(g) = dst(f), identities included."""
        for y in self.objects:
            for f in self.into(y):
                for g in self.out_of(y):
                    yield g, f

    def cached(self, key: Hashable, build: Callable[[], Any]) -> Any:
        if key not in self._cache:
            self._cache[key] = build()
        return self._cache[key]


@dataclass
class ValidationReport:
    """Outcome of a validation: pass iff there are no violations."""

    subject: str
    violations: List[Tuple[str, Tuple[str, ...]]] = field(default_factory=list)
    details: Dict[str, Any] = field(default_factory=dict)

    @property
    def status(self) -> str:
        return "fail" if self.violations else "pass"

    @property
    def passed(self) -> bool:
        return not self.violations

    def add(self, law: str, *ids: str) -> None:
        self.violations.append((law, tuple(ids)))

    def laws(self) -> List[str]:
        return [law for law, _ in self.violations]

    def to_dict(self) -> Dict[str, Any]:
        return {
            "subject": self.subject,
            "status": self.status,
            "violations": [{"law": law, "ids": list(ids)} for law, ids in self.violations],
            "details": self.details,
        }


def build_category(
    name: str,
    objects: Iterable[str],
    arrows: Iterable[Tuple[str, str, str]],
    table: Mapping[Tuple[str, str], str],
) -> FinCategory:
    """Build a category from declared arrows and non-identity composites.

    Identities and their composition entries are generated.

    Args:
        name: Category name
        objects: Object ids
        arrows: (name, src, dst) for every non-identity morphism
        table: (g, f) -> g∘f for composable non-identity pairs

    Returns:
        The (unvalidated) category

    Raises:
        ValueError: If an arrow uses a reserved identity name
    """
    objects = list(objects)
    identity = {x: identity_name(x) for x in objects}
    reserved = set(identity.values())
    morphisms = [Morphism(identity[x], x, x) for x in objects]
    for arrow, src, dst in arrows:
        if arrow in reserved or arrow.startswith("id_"):
            raise ValueError(f"identity names are reserved: {arrow}")
        morphisms.append(Morphism(arrow, src, dst))
    full = dict(table)
    for m in morphisms:
        if m.dst in identity:
            full.setdefault((identity[m.dst], m.name), m.name)
        if m.src in identity:
            full.setdefault((m.name, identity[m.src]), m.name)
    return FinCategory(name, objects, morphisms, identity, full)


def assemble_category(
    name: str,
    objects: Iterable[str],
    arrows: Iterable[Tuple[Hashable, str, str]],
    compose: Callable[[Hashable, Hashable], Hashable],
    identity: Callable[[str], Hashable],
    label: Callable[[Hashable], str],
    cap: int = DEFAULT_MORPHISM_CAP,
) -> Tuple[FinCategory, Dict[Hashable, str]]:
    """Build a category whose morphisms are structured keys.

    Args:
        name: Category name
        objects: Object ids
        arrows: (key, src, dst) for the morphisms; identity keys may be omitted
        compose: Composition on keys, compose(g, f) = g∘f
        identity: Key of the identity on an object
        label: Morphism id for a non-identity key
        cap: Morphism budget

    Returns:
        The category and the key -> morphism id map

    Raises:
        BudgetExceeded: More than ``cap`` morphisms
        ValueError: Two keys received the same label or a composite is missing
    """
    objects = list(objects)
    names: Dict[Hashable, str] = {}
    ends: Dict[Hashable, Tuple[str, str]] = {}
    for obj in objects:
        key = identity(obj)
        names[key] = identity_name(obj)
        ends[key] = (obj, obj)
    for key, src, dst in arrows:
        if key in names:
            continue
        names[key] = label(key)
        ends[key] = (src, dst)
        if len(names) > cap:
            raise BudgetExceeded("morphism_cap", cap, name)
    if len(set(names.values())) != len(names):
        raise ValueError(f"label collision while assembling {name}")

    into: Dict[str, List[Hashable]] = defaultdict(list)
    out: Dict[str, List[Hashable]] = defaultdict(list)
    for key, (src, dst) in ends.items():
        out[src].append(key)
        into[dst].append(key)
    table = {}
    for y in objects:
        for f in into[y]:
            for g in out[y]:
                h = compose(g, f)
                if h not in names:
                    raise ValueError(f"composite of {names[g]} and {names[f]} missing in {name}")
                table[(names[g], names[f])] = names[h]
    morphisms = [Morphism(names[k], s, d) for k, (s, d) in ends.items()]
    identities = {obj: identity_name(obj) for obj in objects}
    return FinCategory(name, objects, morphisms, identities, table), names


def validate_category(C: FinCategory) -> ValidationReport:
    """Check typing, identity laws and associativity exhaustively."""
    report = ValidationReport(C.name)
    objects = set(C.objects)
    for m in C.morphisms.values():
        if m.src not in objects or m.dst not in objects:
            report.add("typing", m.name)
    for x in C.objects:
        i = C.identity.get(x)
        if i is None or i not in C.morphisms or C.src(i) != x or C.dst(i) != x:
            report.add("identity typing", x)
    if report.violations:
        return report

    for (g, f), h in sorted(C.table.items()):
        if g not in C.morphisms or f not in C.morphisms or h not in C.morphisms:
            report.add("unknown morphism", g, f, h)
        elif C.src(g) != C.dst(f):
            report.add("compose on non-composable pair", g, f)
        elif C.src(h) != C.src(f) or C.dst(h) != C.dst(g):
            report.add("composite typing", g, f, h)
    for g, f in C.composable_pairs():
        if (g, f) not in C.table:
            report.add("compose undefined", g, f)

    for f, m in C.morphisms.items():
        if C.table.get((C.identity[m.dst], f)) != f or C.table.get((f, C.identity[m.src])) != f:
            report.add("identity law", f)

    for g, f in C.composable_pairs():
        gf = C.table.get((g, f))
        if gf is None:
            continue
        for h in C.out_of(C.dst(g)):
            hg = C.table.get((h, g))
            if hg is None:
                continue
            left = C.table.get((h, gf))
            right = C.table.get((hg, f))
            if left is not None and right is not None and left != right:
                report.add("associativity", h, g, f)
    return report


@dataclass(frozen=True)
class MorphClass:
    """A marked class of morphisms: identities plus a composition-closed set."""

    carrier: FinCategory
    members: FrozenSet[str]
    name: str = "S"

    def __contains__(self, m: object) -> bool:
        return m in self.members

    def __iter__(self) -> Iterator[str]:
        return iter(sorted(self.members))

    def __len__(self) -> int:
        return len(self.members)

    def non_identities(self) -> List[str]:
        return sorted(m for m in self.members if not self.carrier.is_identity(m))


def validate_class(S: MorphClass) -> ValidationReport:
    """Pass iff S contains every identity and is closed under composition."""
    C = S.carrier
    report = ValidationReport(S.name)
    for m in sorted(S.members):
        if m not in C.morphisms:
            report.add("unknown morphism", m)
    if report.violations:
        return report
    for x in C.objects:
        if C.identity[x] not in S.members:
            report.add("missing identity", C.identity[x])
    for f in sorted(S.members):
        for g in C.out_of(C.dst(f)):
            if g in S.members:
                gf = C.compose(g, f)
                if gf not in S.members:
                    report.add("not composition-closed", g, f, gf)
    return report


def identities_class(C: FinCategory, name: str = "S") -> MorphClass:
    return MorphClass(C, frozenset(C.identity.values()), name)


def all_class(C: FinCategory, name: str = "S") -> MorphClass:
    return MorphClass(C, frozenset(C.morphisms), name)


def closure_class(C: FinCategory, seeds: Iterable[str], name: str = "S") -> MorphClass:
    """Smallest class containing the seeds: identities plus composites."""
    members = set(C.identity.values()) | set(seeds)
    frontier = set(members)
    while frontier:
        fresh = set()
        for f in frontier:
            for g in C.out_of(C.dst(f)):
                if g in members:
                    fresh.add(C.compose(g, f))
            for h in C.into(C.src(f)):
                if h in members:
                    fresh.add(C.compose(f, h))
        frontier = fresh - members
        members |= frontier
    return MorphClass(C, frozenset(members), name)


def inverse_of(C: FinCategory, f: str) -> Optional[str]:
    """Two-sided inverse of f, if any."""
    x, y = C.src(f), C.dst(f)
    for u in C.hom(y, x):
        if C.compose(u, f) == C.identity[x] and C.compose(f, u) == C.identity[y]:
            return u
    return None


def is_isomorphism(C: FinCategory, f: str) -> bool:
    return inverse_of(C, f) is not None


def isomorphism_class(C: FinCategory, name: str = "iso") -> MorphClass:
    return MorphClass(C, frozenset(f for f in C.morphisms if is_isomorphism(C, f)), name)


def isomorphic_objects(C: FinCategory, a: str, b: str) -> Optional[str]:
    """An isomorphism a -> b, if one exists."""
    for u in C.hom(a, b):
        if is_isomorphism(C, u):
            return u
    return None


@dataclass(frozen=True)
class FunctorData:
    """A functor between finite categories given by its object and morphism maps."""

    name: str
    source: FinCategory
    target: FinCategory
    omap: Mapping[str, str]
    mmap: Mapping[str, str]

    def __call__(self, f: str) -> str:
        return self.mmap[f]

    def obj(self, x: str) -> str:
        return self.omap[x]

    __hash__ = object.__hash__


def validate_functor(
    T: FunctorData,
    S: Optional[MorphClass] = None,
    Sprime: Optional[MorphClass] = None,
) -> ValidationReport:
    """Check the functor laws; record faithfulness, fullness and class preservation.

    Args:
        T: Functor to check
        S: Optional class on the source
        Sprime: Optional class on the target

    Returns:
        Report whose details hold ``faithful``, ``full``, ``fully_faithful``,
        ``essentially_surjective`` and, with classes, ``preserves_classes``
    """
    A, B = T.source, T.target
    report = ValidationReport(T.name)
    for x in A.objects:
        if T.omap.get(x) not in B.objects:
            report.add("object map", x)
    for f, m in A.morphisms.items():
        u = T.mmap.get(f)
        if u not in B.morphisms or B.src(u) != T.omap.get(m.src) or B.dst(u) != T.omap.get(m.dst):
            report.add("morphism typing", f)
    if report.violations:
        return report
    for x in A.objects:
        if T(A.identity[x]) != B.identity[T.obj(x)]:
            report.add("identity preservation", x)
    for g, f in A.composable_pairs():
        if T(A.compose(g, f)) != B.compose(T(g), T(f)):
            report.add("composition", g, f)

    faithful = full = True
    for x in A.objects:
        for y in A.objects:
            images = {T(f) for f in A.hom(x, y)}
            if len(images) != len(A.hom(x, y)):
                faithful = False
            if len(images) != len(B.hom(T.obj(x), T.obj(y))):
                full = False
    report.details.update(
        faithful=faithful,
        full=full,
        fully_faithful=faithful and full,
        essentially_surjective=all(
            any(isomorphic_objects(B, T.obj(x), d) for x in A.objects) for d in B.objects
        ),
    )
    if S is not None and Sprime is not None:
        report.details["preserves_classes"] = all(T(s) in Sprime for s in S.members)
    return report


def identity_functor(C: FinCategory) -> FunctorData:
    return FunctorData(
        f"Id_{C.name}", C, C, {x: x for x in C.objects}, {f: f for f in C.morphisms}
    )


def inclusion_functor(sub: FinCategory, C: FinCategory, name: str = "") -> FunctorData:
    return FunctorData(
        name or f"{sub.name}->{C.name}",
        sub,
        C,
        {x: x for x in sub.objects},
        {f: f for f in sub.morphisms},
    )


def constant_functor(source: FinCategory, target: FinCategory, obj: str) -> FunctorData:
    ident = target.identity[obj]
    return FunctorData(
        f"const_{obj}",
        source,
        target,
        {x: obj for x in source.objects},
        {f: ident for f in source.morphisms},
    )


def compose_functors(G: FunctorData, F: FunctorData) -> FunctorData:
    """G∘F."""
    return FunctorData(
        f"{G.name}.{F.name}",
        F.source,
        G.target,
        {x: G.obj(F.obj(x)) for x in F.source.objects},
        {f: G(F(f)) for f in F.source.morphisms},
    )


def full_subcategory(C: FinCategory, objects: Iterable[str], name: str = "") -> FinCategory:
    keep = set(objects)
    morphisms = [m for m in C.morphisms.values() if m.src in keep and m.dst in keep]
    names = {m.name for m in morphisms}
    table = {k: v for k, v in C.table.items() if k[0] in names and k[1] in names}
    return FinCategory(
        name or C.name,
        keep,
        morphisms,
        {x: C.identity[x] for x in keep},
        table,
    )


def opposite(C: FinCategory) -> FinCategory:
    """Swap sources and targets and reverse composition."""
    name = C.name[: -len("^op")] if C.name.endswith("^op") else f"{C.name}^op"
    return FinCategory(
        name,
        C.objects,
        [Morphism(m.name, m.dst, m.src) for m in C.morphisms.values()],
        C.identity,
        {(f, g): h for (g, f), h in C.table.items()},
    )


def find_isomorphism(C: FinCategory, D: FinCategory) -> Optional[FunctorData]:
    """Brute-force isomorphism of small categories, or None."""
    if len(C.objects) != len(D.objects) or len(C.morphisms) != len(D.morphisms):
        return None

    def signature(K: FinCategory, x: str) -> Tuple[int, int, int]:
        return len(K.hom(x, x)), len(K.out_of(x)), len(K.into(x))

    targets = {x: [y for y in D.objects if signature(D, y) == signature(C, x)] for x in C.objects}
    order = list(C.objects)
    arrows = C.non_identities()

    def objects_from(i: int, omap: Dict[str, str]) -> Iterator[Dict[str, str]]:
        if i == len(order):
            yield dict(omap)
            return
        x = order[i]
        used = set(omap.values())
        for y in targets[x]:
            if y in used:
                continue
            if all(
                len(C.hom(x, z)) == len(D.hom(y, omap[z])) and len(C.hom(z, x)) == len(D.hom(omap[z], y))
                for z in omap
            ) and len(C.hom(x, x)) == len(D.hom(y, y)):
                omap[x] = y
                yield from objects_from(i + 1, omap)
                del omap[x]

    def morphisms_from(i: int, omap: Dict[str, str], mmap: Dict[str, str]) -> Optional[Dict[str, str]]:
        if i == len(arrows):
            return dict(mmap)
        f = arrows[i]
        used = set(mmap.values())
        for u in D.hom(omap[C.src(f)], omap[C.dst(f)]):
            if u in used or D.is_identity(u):
                continue
            mmap[f] = u
            if _partial_functorial(C, D, mmap):
                found = morphisms_from(i + 1, omap, mmap)
                if found is not None:
                    return found
            del mmap[f]
        return None

    for omap in objects_from(0, {}):
        mmap = {C.identity[x]: D.identity[omap[x]] for x in C.objects}
        found = morphisms_from(0, omap, mmap)
        if found is not None:
            return FunctorData(f"{C.name}~{D.name}", C, D, omap, found)
    return None


def _partial_functorial(C: FinCategory, D: FinCategory, mmap: Mapping[str, str]) -> bool:
    for (g, f), h in C.table.items():
        if g in mmap and f in mmap and h in mmap and D.compose(mmap[g], mmap[f]) != mmap[h]:
            return False
    return True


# -- universal properties ----------------------------------------------------


def find_terminal(C: FinCategory) -> Optional[str]:
    for t in C.objects:
        if all(len(C.hom(x, t)) == 1 for x in C.objects):
            return t
    return None


def find_initial(C: FinCategory) -> Optional[str]:
    for t in C.objects:
        if all(len(C.hom(t, x)) == 1 for x in C.objects):
            return t
    return None


def is_product(C: FinCategory, p: str, pi1: str, pi2: str) -> bool:
    """Whether (p, pi1, pi2) is a product of the targets of the projections."""
    a, b = C.dst(pi1), C.dst(pi2)
    for x in C.objects:
        cone = C.hom(x, p)
        images = {(C.compose(pi1, u), C.compose(pi2, u)) for u in cone}
        if len(images) != len(cone) or len(cone) != len(C.hom(x, a)) * len(C.hom(x, b)):
            return False
    return True


def is_coproduct(C: FinCategory, z: str, i1: str, i2: str) -> bool:
    """Whether (z, i1, i2) is a coproduct of the sources of the coprojections."""
    a, b = C.src(i1), C.src(i2)
    for w in C.objects:
        cocone = C.hom(z, w)
        images = {(C.compose(u, i1), C.compose(u, i2)) for u in cocone}
        if len(images) != len(cocone) or len(cocone) != len(C.hom(a, w)) * len(C.hom(b, w)):
            return False
    return True


def find_product(C: FinCategory, a: str, b: str) -> Optional[Tuple[str, str, str]]:
    for p in C.objects:
        for pi1 in C.hom(p, a):
            for pi2 in C.hom(p, b):
                if is_product(C, p, pi1, pi2):
                    return p, pi1, pi2
    return None


@dataclass
class ProductReport:
    """Terminal object and binary products found by brute force."""

    terminal: Optional[str]
    products: Dict[Tuple[str, str], Tuple[str, str, str]] = field(default_factory=dict)
    failing_pair: Optional[Tuple[str, str]] = None

    @property
    def holds(self) -> bool:
        return self.terminal is not None and self.failing_pair is None


def has_finite_products(C: FinCategory) -> ProductReport:
    """Search for a terminal object and every binary product."""
    report = ProductReport(find_terminal(C))
    for a, b in itertools.combinations_with_replacement(C.objects, 2):
        found = find_product(C, a, b)
        if found is None:
            report.failing_pair = (a, b)
            break
        report.products[(a, b)] = found
    return report


@dataclass(frozen=True)
class Pushout:
    """A pushout square over a span (s: d -> d', f: d -> d1).

    ``leg`` is the arrow d' -> P completing f, ``pushed`` the arrow
    d1 -> P completing s.
    """

    obj: str
    leg: str
    pushed: str


def find_pushouts(C: FinCategory, s: str, f: str) -> Tuple[Pushout, ...]:
    """Every pushout of the span (s, f), found by cocone enumeration."""

    def build() -> Tuple[Pushout, ...]:
        d_prime, d1 = C.dst(s), C.dst(f)
        cocones = defaultdict(set)
        for x in C.objects:
            for a in C.hom(d_prime, x):
                for b in C.hom(d1, x):
                    if C.compose(a, s) == C.compose(b, f):
                        cocones[x].add((a, b))
        found = []
        for p in C.objects:
            for a, b in sorted(cocones[p]):
                universal = True
                for x in C.objects:
                    maps = C.hom(p, x)
                    images = {(C.compose(u, a), C.compose(u, b)) for u in maps}
                    if len(images) != len(maps) or images != cocones[x]:
                        universal = False
                        break
                if universal:
                    found.append(Pushout(p, a, b))
        return tuple(found)

    return C.cached(("pushouts", s, f), build)


# -- posets ------------------------------------------------------------------


@dataclass(frozen=True)
class FinPoset:
    """A finite partially ordered set; ``leq`` includes the reflexive pairs."""

    name: str
    elements: Tuple[str, ...]
    leq: FrozenSet[Tuple[str, str]]

    def __len__(self) -> int:
        return len(self.elements)

    def le(self, a: str, b: str) -> bool:
        return (a, b) in self.leq

    def lt(self, a: str, b: str) -> bool:
        return a != b and (a, b) in self.leq

    def strict_pairs(self) -> List[Tuple[str, str]]:
        return sorted(p for p in self.leq if p[0] != p[1])

    def linear_order(self) -> List[str]:
        """A linear extension: elements sorted by the size of their down-set."""
        return sorted(self.elements, key=lambda e: (sum(1 for a in self.elements if self.le(a, e)), e))

    def below(self, e: str) -> List[str]:
        return [a for a in self.linear_order() if self.lt(a, e)]


def make_poset(name: str, elements: Iterable[str], relations: Iterable[Tuple[str, str]]) -> FinPoset:
    """Reflexive-transitive closure of the given relations."""
    elements = tuple(sorted(set(elements)))
    leq = {(e, e) for e in elements} | set(relations)
    changed = True
    while changed:
        changed = False
        for (a, b), (c, d) in itertools.product(list(leq), repeat=2):
            if b == c and (a, d) not in leq:
                leq.add((a, d))
                changed = True
    return FinPoset(name, elements, frozenset(leq))


def validate_poset(E: FinPoset) -> ValidationReport:
    report = ValidationReport(E.name)
    elements = set(E.elements)
    for a, b in sorted(E.leq):
        if a not in elements or b not in elements:
            report.add("unknown element", a, b)
    for e in E.elements:
        if (e, e) not in E.leq:
            report.add("reflexivity", e)
    for a, b in sorted(E.leq):
        if a != b and (b, a) in E.leq and a < b:
            report.add("antisymmetry", a, b)
        for c in E.elements:
            if (b, c) in E.leq and (a, c) not in E.leq:
                report.add("transitivity", a, b, c)
    return report


def chain(n: int) -> FinPoset:
    """The ordinal Δⁿ = {0 < 1 < … < n}."""
    elements = [str(i) for i in range(n + 1)]
    leq = {(str(i), str(j)) for i in range(n + 1) for j in range(i, n + 1)}
    return FinPoset(f"Delta{n}", tuple(elements), frozenset(leq))


def poset_product(E: FinPoset, F: FinPoset) -> FinPoset:
    def pair(a: str, b: str) -> str:
        return f"({a},{b})"

    elements = tuple(sorted(pair(a, b) for a in E.elements for b in F.elements))
    leq = frozenset(
        (pair(a, b), pair(c, d))
        for a, c in E.leq
        for b, d in F.leq
    )
    return FinPoset(f"{E.name}x{F.name}", elements, leq)


def poset_category(E: FinPoset) -> FinCategory:
    arrows = [(f"{a}<{b}", a, b) for a, b in E.strict_pairs()]
    table = {
        (f"{b}<{c}", f"{a}<{b}"): f"{a}<{c}"
        for a, b in E.strict_pairs()
        for c in E.elements
        if E.lt(b, c)
    }
    return build_category(E.name, E.elements, arrows, table)


def enumerate_posets(max_size: int) -> List[FinPoset]:
    """All posets with 1..max_size elements, one per isomorphism class."""
    found: List[FinPoset] = []
    for n in range(1, max_size + 1):
        elements = [str(i) for i in range(n)]
        pairs = [(a, b) for a in range(n) for b in range(n) if a != b]
        seen = set()
        for mask in range(1 << len(pairs)):
            strict = {pairs[i] for i in range(len(pairs)) if mask >> i & 1}
            if any((b, a) in strict for a, b in strict):
                continue
            if any((a, c) not in strict for a, b in strict for b2, c in strict if b == b2 and a != c):
                continue
            canonical = min(
                tuple(sorted((perm[a], perm[b]) for a, b in strict))
                for perm in itertools.permutations(range(n))
            )
            if canonical in seen:
                continue
            seen.add(canonical)
            leq = {(e, e) for e in elements} | {(str(a), str(b)) for a, b in canonical}
            found.append(FinPoset(f"P{n}_{len(seen)}", tuple(elements), frozenset(leq)))
    return found


# -- diagrams ----------------------------------------------------------------


@dataclass(frozen=True)
class Diagram:
    """A functor from a finite poset into a category."""

    poset: FinPoset
    objects: Tuple[Tuple[str, str], ...]
    arrows: Tuple[Tuple[Tuple[str, str], str], ...]

    def at(self, e: str) -> str:
        return dict(self.objects)[e]

    def arrow(self, a: str, b: str) -> str:
        if a == b:
            return identity_name(self.at(a))
        return dict(self.arrows)[(a, b)]

    def label(self) -> str:
        objs = ",".join(f"{e}:{x}" for e, x in self.objects)
        arrs = ",".join(f"{a}<{b}:{m}" for (a, b), m in self.arrows)
        return f"<{objs}|{arrs}>" if arrs else f"<{objs}>"

    def to_dict(self) -> Dict[str, Any]:
        return {
            "poset": self.poset.name,
            "objects": dict(self.objects),
            "arrows": {f"{a}<{b}": m for (a, b), m in self.arrows},
        }


def point_diagram(d: str) -> Diagram:
    return Diagram(chain(0), (("0", d),), ())


def chain_diagram(C: FinCategory, arrows: Sequence[str]) -> Diagram:
    """The diagram d0 -> d1 -> … of composable arrows (first arrow first)."""
    if not arrows:
        raise ValueError("chain_diagram needs at least one arrow")
    n = len(arrows)
    objs = [C.src(arrows[0])] + [C.dst(a) for a in arrows]
    mapping = {}
    for i in range(n + 1):
        for j in range(i + 1, n + 1):
            mapping[(str(i), str(j))] = C.compose_all(*reversed(arrows[i:j]))
    return Diagram(
        chain(n),
        tuple((str(i), objs[i]) for i in range(n + 1)),
        tuple(sorted(mapping.items())),
    )


def enumerate_sections(
    poset: FinPoset,
    local: Callable[[str], Sequence[Any]],
    transitions: Callable[[str, str, Any, Any], Sequence[Any]],
    compose: Callable[[Any, Any], Any],
    cap: int = DEFAULT_MORPHISM_CAP,
) -> List[Tuple[Tuple[Any, ...], Tuple[Tuple[Tuple[str, str], Any], ...]]]:
    """Enumerate functorial assignments over a poset.

    Each element receives a local value and each strict pair a transition
    between the local values; transitions must compose along chains.

    Args:
        poset: Indexing poset
        local: Candidates at an element
        transitions: Candidates for a pair (a, b) given the values at a and b
        compose: Composition of transitions, compose(t_bc, t_ab)
        cap: Maximum number of sections

    Returns:
        (values in linear order, sorted pair -> transition items) per section

    Raises:
        BudgetExceeded: More than ``cap`` sections
    """
    order = poset.linear_order()
    values: Dict[str, Any] = {}
    trans: Dict[Tuple[str, str], Any] = {}
    results = []

    def place(i: int) -> None:
        if i == len(order):
            results.append((tuple(values[e] for e in order), tuple(sorted(trans.items()))))
            if len(results) > cap:
                raise BudgetExceeded("morphism_cap", cap, "diagram enumeration")
            return
        e = order[i]
        preds = list(reversed(poset.below(e)))
        for x in local(e):
            values[e] = x
            connect(i, e, preds, 0)
        values.pop(e, None)

    def connect(i: int, e: str, preds: List[str], k: int) -> None:
        if k == len(preds):
            place(i + 1)
            return
        p = preds[k]
        mids = [q for q in preds[:k] if poset.lt(p, q)]
        if mids:
            forced = compose(trans[(mids[0], e)], trans[(p, mids[0])])
            if any(compose(trans[(q, e)], trans[(p, q)]) != forced for q in mids[1:]):
                return
            candidates: Sequence[Any] = [forced]
        else:
            candidates = transitions(p, e, values[p], values[e])
        for t in candidates:
            trans[(p, e)] = t
            connect(i, e, preds, k + 1)
        trans.pop((p, e), None)

    place(0)
    return results


def enumerate_section_maps(
    poset: FinPoset,
    source: Tuple[Tuple[Any, ...], Mapping[Tuple[str, str], Any]],
    target: Tuple[Tuple[Any, ...], Mapping[Tuple[str, str], Any]],
    verticals: Callable[[Any, Any], Sequence[Any]],
    compose: Callable[[Any, Any], Any],
    limit: Optional[int] = None,
) -> List[Tuple[Any, ...]]:
    """Natural families of verticals between two sections (in linear order).

    With ``limit`` the search stops after that many families.
    """
    order = poset.linear_order()
    xs, xt = source
    ys, yt = target
    chosen: List[Any] = []
    results = []

    def step(i: int) -> None:
        if limit is not None and len(results) >= limit:
            return
        if i == len(order):
            results.append(tuple(chosen))
            return
        e = order[i]
        for v in verticals(xs[i], ys[i]):
            ok = True
            for j in range(i):
                p = order[j]
                if poset.lt(p, e) and compose(v, xt[(p, e)]) != compose(yt[(p, e)], chosen[j]):
                    ok = False
                    break
            if ok:
                chosen.append(v)
                step(i + 1)
                chosen.pop()

    step(0)
    return results


def enumerate_diagrams(C: FinCategory, E: FinPoset, cap: int = DEFAULT_MORPHISM_CAP) -> List[Diagram]:
    """All functors E -> C."""
    sections = enumerate_sections(
        E,
        lambda e: C.objects,
        lambda a, b, x, y: C.hom(x, y),
        C.compose,
        cap,
    )
    order = E.linear_order()
    return [
        Diagram(E, tuple(sorted(zip(order, values))), arrows)
        for values, arrows in sections
    ]


@dataclass
class DiagramCategory:
    """The functor category C^E with its decoding tables."""

    category: FinCategory
    base: FinCategory
    poset: FinPoset
    diagrams: Dict[str, Diagram]
    components: Dict[str, Tuple[str, ...]]
    index: Dict[Tuple[str, str, Tuple[str, ...]], str]

    def lift_class(self, S: MorphClass) -> MorphClass:
        """S(E): transformations whose components all lie in S."""
        return MorphClass(
            self.category,
            frozenset(m for m, comps in self.components.items() if all(c in S for c in comps)),
            f"{S.name}({self.poset.name})",
        )

    def diagram_id(self, diagram: Diagram) -> str:
        return diagram.label()


def diagram_category(C: FinCategory, E: FinPoset, cap: int = DEFAULT_MORPHISM_CAP) -> DiagramCategory:
    """Build C^E: functors E -> C and natural transformations.

    Components are listed along ``E.linear_order()``.

    Raises:
        BudgetExceeded: Too many diagrams or transformations
    """
    order = E.linear_order()
    diagrams = {d.label(): d for d in enumerate_diagrams(C, E, cap)}
    raw = {
        name: (tuple(d.at(e) for e in order), dict(d.arrows))
        for name, d in diagrams.items()
    }
    arrows = []
    for x, sx in sorted(raw.items()):
        for y, sy in sorted(raw.items()):
            for comps in enumerate_section_maps(E, sx, sy, C.hom, C.compose):
                arrows.append(((x, y, comps), x, y))
                if len(arrows) > cap:
                    raise BudgetExceeded("morphism_cap", cap, f"{C.name}^{E.name}")

    def compose(g: Tuple, f: Tuple) -> Tuple:
        return (f[0], g[1], tuple(C.compose(b, a) for b, a in zip(g[2], f[2])))

    def ident(x: str) -> Tuple:
        return (x, x, tuple(C.identity[o] for o in raw[x][0]))

    def label(key: Tuple) -> str:
        return f"{key[0]}=>{key[1]}:[{','.join(key[2])}]"

    category, names = assemble_category(
        f"{C.name}^{E.name}", diagrams, arrows, compose, ident, label, cap
    )
    components = {names[k]: k[2] for k in names}
    index = {k: names[k] for k in names}
    logger.debug("built %s with %d objects and %d morphisms", category.name, len(category.objects), len(category))
    return DiagramCategory(category, C, E, diagrams, components, index)


def functor_category(
    C: FinCategory, E: FinPoset, cap: int = DEFAULT_MORPHISM_CAP
) -> Tuple[FinCategory, Callable[[MorphClass], MorphClass]]:
    """C^E together with the class lift S -> S(E)."""
    dc = diagram_category(C, E, cap)
    return dc.category, dc.lift_class


def lift_functor(T: FunctorData, source: DiagramCategory, target: DiagramCategory) -> FunctorData:
    """T^E between two diagram categories over the same poset."""
    omap = {}
    for name, d in source.diagrams.items():
        image = Diagram(
            d.poset,
            tuple((e, T.obj(x)) for e, x in d.objects),
            tuple((pair, T(m)) for pair, m in d.arrows),
        )
        omap[name] = image.label()
    mmap = {}
    for (x, y, comps), m in source.index.items():
        mmap[m] = target.index[(omap[x], omap[y], tuple(T(c) for c in comps))]
    return FunctorData(f"{T.name}^{source.poset.name}", source.category, target.category, omap, mmap)
