"""Line-oriented text format for categories, classes, functors and setups.

    # comments run to the end of the line
    category Arrow {
      objects: 0, 1;
      mor f: 0 -> 1;
    }
    class S in Arrow { f; }
    functor T: One -> Arrow { obj 1 -> 1; }
    setup L { C = One; D = Arrow; T = T; S = S; Sprime = S; }
    poset E { elements: a, b; a < b; }
    weak W for L { select obj d = c s; }
    kselect K for L { at d = c j; }

``compose g f = h;`` declares g∘f. ``equate`` takes two words in the same
applicative order; a category with equations or with undeclared
composites is closed by completion. Names outside the plain pattern are
written as double-quoted strings.
"""

import json
import logging
import re
from dataclasses import dataclass, field, fields
from pathlib import Path
from typing import Any, Dict, FrozenSet, List, Optional, Sequence, Tuple, Union

from lark import Lark, Transformer, v_args
from lark.exceptions import UnexpectedInput, VisitError

from ..categories.core import (
    FinCategory,
    FinPoset,
    FunctorData,
    MorphClass,
    build_category,
    identity_name,
    make_poset,
    validate_category,
)
from ..categories.setup import LocalisationSetup
from ..errors import BudgetExceeded, CompositionError, DslError, DslSyntaxError, UnresolvedReference
from ..theory.hypotheses import KSelector, WeakReplacement, arrow_payload, pair_payload
from ..theory.rewriting import saturate_table
from .config import Budgets

logger = logging.getLogger(__name__)

GRAMMAR = r"""
start: _decl*

_decl: category | klass | functor | setup | poset | weak | kselect

category: "category" name "{" _cat_stmt* "}"
_cat_stmt: objects | mor | compose | equate
objects: "objects" ":" name ("," name)* ";"
mor: "mor" name ":" name "->" name ";"
compose: "compose" name name "=" name ";"
equate: "equate" word "=" word ";"
word: name+

klass: "class" name "in" name "{" member* "}"
member: name ";"

functor: "functor" name ":" name "->" name "{" _fmap* "}"
_fmap: fobj | fmor
fobj: "obj" name "->" name ";"
fmor: "mor" name "->" name ";"

setup: "setup" name "{" binding* "}"
binding: name "=" name ";"

poset: "poset" name "{" _poset_stmt* "}"
_poset_stmt: elements | relation
elements: "elements" ":" name ("," name)* ";"
relation: name "<" name ";"

weak: "weak" name "for" name "{" select* "}"
select: "select" select_kind word "=" word ";"
!select_kind: "obj" | "arrow" | "pair"

kselect: "kselect" name "for" name "{" at* "}"
at: "at" name "=" name name ";"

name: NAME | STRING

NAME: /[A-Za-z0-9_][A-Za-z0-9_.'^*@]*/
STRING: /"(\\.|[^"\\])*"/
COMMENT: /#[^\n]*/

%import common.WS
%ignore WS
%ignore COMMENT
"""

_PARSER = Lark(GRAMMAR, start="start", parser="lalr", propagate_positions=True)
_PLAIN = re.compile(r"[A-Za-z0-9_][A-Za-z0-9_.'^*@]*")
_KEYWORDS = frozenset(
    {"category", "objects", "mor", "compose", "equate", "class", "in", "functor", "obj", "setup",
     "poset", "elements", "weak", "for", "select", "arrow", "pair", "kselect", "at"}
)
SETUP_KEYS = ("C", "D", "T", "S", "Sprime")
SELECT_ARITY = {"obj": (1, 2), "arrow": (1, 5), "pair": (2, 8)}

Names = Tuple[str, ...]


# -- document -----------------------------------------------------------------------


@dataclass(frozen=True)
class CategoryDecl:
    name: str
    objects: Names = ()
    arrows: Tuple[Tuple[str, str, str], ...] = ()
    composites: Tuple[Tuple[str, str, str], ...] = ()
    equations: Tuple[Tuple[Names, Names], ...] = ()
    line: Optional[int] = field(default=None, compare=False)
    composite_lines: Tuple[int, ...] = field(default=(), compare=False)


@dataclass(frozen=True)
class ClassDecl:
    name: str
    category: str
    members: Names = ()
    line: Optional[int] = field(default=None, compare=False)


@dataclass(frozen=True)
class FunctorDecl:
    name: str
    source: str
    target: str
    objects: Tuple[Tuple[str, str], ...] = ()
    morphisms: Tuple[Tuple[str, str], ...] = ()
    line: Optional[int] = field(default=None, compare=False)


@dataclass(frozen=True)
class SetupDecl:
    name: str
    bindings: Tuple[Tuple[str, str], ...] = ()
    line: Optional[int] = field(default=None, compare=False)


@dataclass(frozen=True)
class PosetDecl:
    name: str
    elements: Names = ()
    relations: Tuple[Tuple[str, str], ...] = ()
    line: Optional[int] = field(default=None, compare=False)


@dataclass(frozen=True)
class WeakDecl:
    """``selections`` holds (kind, index names, payload names)."""

    name: str
    setup: str
    selections: Tuple[Tuple[str, Names, Names], ...] = ()
    line: Optional[int] = field(default=None, compare=False)
    selection_lines: Tuple[int, ...] = field(default=(), compare=False)


@dataclass(frozen=True)
class KSelectDecl:
    """``selections`` holds (d, c, j)."""

    name: str
    setup: str
    selections: Tuple[Tuple[str, str, str], ...] = ()
    line: Optional[int] = field(default=None, compare=False)


Decl = Union[CategoryDecl, ClassDecl, FunctorDecl, SetupDecl, PosetDecl, WeakDecl, KSelectDecl]

KINDS = {
    CategoryDecl: "category",
    ClassDecl: "class",
    FunctorDecl: "functor",
    SetupDecl: "setup",
    PosetDecl: "poset",
    WeakDecl: "weak",
    KSelectDecl: "kselect",
}


@dataclass(frozen=True)
class DslDocument:
    declarations: Tuple[Decl, ...] = ()

    def of_kind(self, kind: str) -> List[Decl]:
        return [d for d in self.declarations if KINDS[type(d)] == kind]

    def names(self, kind: str) -> List[str]:
        return [d.name for d in self.of_kind(kind)]


# -- parsing ------------------------------------------------------------------------


@v_args(meta=True)
class _ToDocument(Transformer):
    def name(self, meta, children):
        token = children[0]
        if token.type == "STRING":
            return json.loads(str(token))
        return str(token)

    def word(self, meta, children):
        return tuple(children)

    def objects(self, meta, children):
        return ("objects", tuple(children), meta.line)

    def mor(self, meta, children):
        return ("mor", tuple(children), meta.line)

    def compose(self, meta, children):
        return ("compose", tuple(children), meta.line)

    def equate(self, meta, children):
        return ("equate", tuple(children), meta.line)

    def category(self, meta, children):
        name, *stmts = children
        objects, arrows, composites, lines, equations = [], [], [], [], []
        for kind, value, line in stmts:
            if kind == "objects":
                objects.extend(value)
            elif kind == "mor":
                arrows.append(value)
            elif kind == "compose":
                composites.append(value)
                lines.append(line)
            else:
                equations.append(value)
        return CategoryDecl(
            name, tuple(objects), tuple(arrows), tuple(composites), tuple(equations), meta.line, tuple(lines)
        )

    def member(self, meta, children):
        return children[0]

    def klass(self, meta, children):
        name, category, *members = children
        return ClassDecl(name, category, tuple(members), meta.line)

    def fobj(self, meta, children):
        return ("obj", tuple(children))

    def fmor(self, meta, children):
        return ("mor", tuple(children))

    def functor(self, meta, children):
        name, source, target, *maps = children
        objects = tuple(pair for kind, pair in maps if kind == "obj")
        morphisms = tuple(pair for kind, pair in maps if kind == "mor")
        return FunctorDecl(name, source, target, objects, morphisms, meta.line)

    def binding(self, meta, children):
        return tuple(children)

    def setup(self, meta, children):
        name, *bindings = children
        return SetupDecl(name, tuple(bindings), meta.line)

    def elements(self, meta, children):
        return ("elements", tuple(children))

    def relation(self, meta, children):
        return ("relation", tuple(children))

    def poset(self, meta, children):
        name, *stmts = children
        elements = tuple(e for kind, value in stmts if kind == "elements" for e in value)
        relations = tuple(value for kind, value in stmts if kind == "relation")
        return PosetDecl(name, elements, relations, meta.line)

    def select_kind(self, meta, children):
        return str(children[0])

    def select(self, meta, children):
        kind, index, payload = children
        expected = SELECT_ARITY[kind]
        if (len(index), len(payload)) != expected:
            raise DslSyntaxError(
                f"select {kind} takes {expected[0]} index and {expected[1]} payload names", meta.line, meta.column
            )
        return (kind, index, payload), meta.line

    def weak(self, meta, children):
        name, setup, *selects = children
        return WeakDecl(
            name, setup, tuple(s for s, _ in selects), meta.line, tuple(line for _, line in selects)
        )

    def at(self, meta, children):
        return tuple(children)

    def kselect(self, meta, children):
        name, setup, *selections = children
        return KSelectDecl(name, setup, tuple(selections), meta.line)

    def start(self, meta, children):
        return DslDocument(tuple(children))


def parse(text: str) -> DslDocument:
    """Parse a document.

    Raises:
        DslSyntaxError: With the line and column of the offending token
        DslError: When two declarations of one kind share a name
    """
    try:
        tree = _PARSER.parse(text)
    except UnexpectedInput as e:
        line = e.line if getattr(e, "line", -1) > 0 else None
        column = e.column if getattr(e, "column", -1) > 0 else None
        raise DslSyntaxError(str(e).strip().splitlines()[0], line, column) from e
    try:
        doc = _ToDocument().transform(tree)
    except VisitError as e:
        if isinstance(e.orig_exc, DslError):
            raise e.orig_exc from e
        raise
    seen: Dict[Tuple[str, str], Decl] = {}
    for decl in doc.declarations:
        key = (KINDS[type(decl)], decl.name)
        if key in seen:
            raise DslError(f"duplicate {key[0]} {decl.name}", decl.line)
        seen[key] = decl
    return doc


def load_document(path: Union[str, Path]) -> DslDocument:
    return parse(Path(path).read_text(encoding="utf-8"))


# -- printing -----------------------------------------------------------------------


def _n(name: str) -> str:
    if _PLAIN.fullmatch(name) and name not in _KEYWORDS:
        return name
    return json.dumps(name, ensure_ascii=False)


def _w(names: Sequence[str]) -> str:
    return " ".join(_n(x) for x in names)


def _print_decl(decl: Decl) -> List[str]:
    if isinstance(decl, CategoryDecl):
        lines = [f"category {_n(decl.name)} {{"]
        if decl.objects:
            lines.append(f"  objects: {', '.join(_n(x) for x in decl.objects)};")
        lines += [f"  mor {_n(a)}: {_n(s)} -> {_n(t)};" for a, s, t in decl.arrows]
        lines += [f"  compose {_n(g)} {_n(f)} = {_n(h)};" for g, f, h in decl.composites]
        lines += [f"  equate {_w(u)} = {_w(v)};" for u, v in decl.equations]
    elif isinstance(decl, ClassDecl):
        lines = [f"class {_n(decl.name)} in {_n(decl.category)} {{"]
        lines += [f"  {_n(m)};" for m in decl.members]
    elif isinstance(decl, FunctorDecl):
        lines = [f"functor {_n(decl.name)}: {_n(decl.source)} -> {_n(decl.target)} {{"]
        lines += [f"  obj {_n(x)} -> {_n(y)};" for x, y in decl.objects]
        lines += [f"  mor {_n(f)} -> {_n(u)};" for f, u in decl.morphisms]
    elif isinstance(decl, SetupDecl):
        lines = [f"setup {_n(decl.name)} {{"]
        lines += [f"  {_n(k)} = {_n(v)};" for k, v in decl.bindings]
    elif isinstance(decl, PosetDecl):
        lines = [f"poset {_n(decl.name)} {{"]
        if decl.elements:
            lines.append(f"  elements: {', '.join(_n(x) for x in decl.elements)};")
        lines += [f"  {_n(a)} < {_n(b)};" for a, b in decl.relations]
    elif isinstance(decl, WeakDecl):
        lines = [f"weak {_n(decl.name)} for {_n(decl.setup)} {{"]
        lines += [f"  select {kind} {_w(index)} = {_w(payload)};" for kind, index, payload in decl.selections]
    else:
        lines = [f"kselect {_n(decl.name)} for {_n(decl.setup)} {{"]
        lines += [f"  at {_n(d)} = {_n(c)} {_n(j)};" for d, c, j in decl.selections]
    lines.append("}")
    return lines


def print_document(doc: DslDocument) -> str:
    """Canonical text; parse(print_document(doc)) == doc."""
    blocks = ["\n".join(_print_decl(decl)) for decl in doc.declarations]
    return "\n\n".join(blocks) + ("\n" if blocks else "")


def document_to_json(doc: DslDocument) -> Dict[str, Any]:
    """Plain data for tooling; positions are left out."""
    out = []
    for decl in doc.declarations:
        entry: Dict[str, Any] = {"kind": KINDS[type(decl)]}
        for f in fields(decl):
            if f.compare:
                entry[f.name] = json.loads(json.dumps(getattr(decl, f.name)))
        out.append(entry)
    return {"declarations": out}


# -- resolution ---------------------------------------------------------------------


@dataclass
class Workspace:
    """Resolved values of a document, by name."""

    categories: Dict[str, FinCategory] = field(default_factory=dict)
    aliases: Dict[str, Dict[str, str]] = field(default_factory=dict)
    classes: Dict[str, MorphClass] = field(default_factory=dict)
    functors: Dict[str, FunctorData] = field(default_factory=dict)
    setups: Dict[str, LocalisationSetup] = field(default_factory=dict)
    posets: Dict[str, FinPoset] = field(default_factory=dict)
    weak: Dict[str, Tuple[str, WeakReplacement]] = field(default_factory=dict)
    kselect: Dict[str, Tuple[str, KSelector]] = field(default_factory=dict)

    def setup(self, name: Optional[str] = None) -> LocalisationSetup:
        """The named setup, or the only one.

        Raises:
            UnresolvedReference: No such setup, or several and no name
        """
        if name is None:
            if len(self.setups) != 1:
                raise UnresolvedReference(f"document declares {len(self.setups)} setups, pass a name")
            return next(iter(self.setups.values()))
        if name not in self.setups:
            raise UnresolvedReference(f"unknown setup {name}")
        return self.setups[name]

    def category(self, name: str) -> FinCategory:
        if name not in self.categories:
            raise UnresolvedReference(f"unknown category {name}")
        return self.categories[name]

    def weak_for(self, name: str) -> WeakReplacement:
        if name not in self.weak:
            raise UnresolvedReference(f"unknown weak replacement {name}")
        return self.weak[name][1]

    def kselect_for(self, name: str) -> KSelector:
        if name not in self.kselect:
            raise UnresolvedReference(f"unknown K-selector {name}")
        return self.kselect[name][1]


def _lookup(table: Dict[str, Any], kind: str, name: str, line: Optional[int]) -> Any:
    if name not in table:
        raise UnresolvedReference(f"unknown {kind} {name}", line)
    return table[name]


def _resolve_category(decl: CategoryDecl, budgets: Budgets) -> Tuple[FinCategory, Dict[str, str]]:
    objects = list(dict.fromkeys(decl.objects))
    known = set(objects)
    typing: Dict[str, Tuple[str, str]] = {identity_name(x): (x, x) for x in objects}
    for a, s, t in decl.arrows:
        for x in (s, t):
            if x not in known:
                raise UnresolvedReference(f"unknown object {x} in {decl.name}", decl.line)
        if a in typing or a.startswith("id_"):
            raise CompositionError(f"morphism {a} redeclared or uses a reserved name in {decl.name}", decl.line)
        typing[a] = (s, t)
    lines = decl.composite_lines or (decl.line,) * len(decl.composites)
    for (g, f, h), line in zip(decl.composites, lines):
        for m in (g, f, h):
            if m not in typing:
                raise UnresolvedReference(f"unknown morphism {m} in {decl.name}", line)
        if typing[g][0] != typing[f][1]:
            raise CompositionError(f"{g} and {f} are not composable", line)
        if typing[h] != (typing[f][0], typing[g][1]):
            raise CompositionError(f"{h} does not have the type of {g}∘{f}", line)
    for u, v in decl.equations:
        for m in u + v:
            if m not in typing:
                raise UnresolvedReference(f"unknown morphism {m} in {decl.name}", decl.line)

    table = {(g, f): h for g, f, h in decl.composites}
    pairs = [
        (g, f)
        for g, (gs, _) in typing.items()
        for f, (_, ft) in typing.items()
        if gs == ft and not g.startswith("id_") and not f.startswith("id_")
    ]
    if not decl.equations and all(p in table for p in pairs):
        category = build_category(decl.name, objects, decl.arrows, table)
        names = {a: a for a, _, _ in decl.arrows}
    else:
        # applicative words to diagrammatic order
        equations = [((f, g), (h,)) for g, f, h in decl.composites]
        equations += [(tuple(reversed(u)), tuple(reversed(v))) for u, v in decl.equations]
        try:
            category, names = saturate_table(
                decl.name,
                objects,
                decl.arrows,
                equations,
                budgets.morphism_cap,
                budgets.kb_max_rules,
                budgets.kb_max_rounds,
            )
        except BudgetExceeded as e:
            raise CompositionError(f"composition table of {decl.name} does not close: {e}", decl.line) from e
    report = validate_category(category)
    if not report.passed:
        law, ids = report.violations[0]
        raise CompositionError(f"{decl.name}: {law} {' '.join(ids)}", decl.line)
    names.update({identity_name(x): identity_name(x) for x in objects})
    logger.debug("resolved category %s: %d morphisms", decl.name, len(category))
    return category, names


def resolve(doc: DslDocument, budgets: Optional[Budgets] = None) -> Workspace:
    """Build every declared value; declarations may only refer backwards.

    Raises:
        UnresolvedReference: A name is not declared before its use
        CompositionError: A composition table is ill-typed or does not close
        DslError: Any other inconsistency, with the declaration line
    """
    budgets = budgets or Budgets()
    ws = Workspace()

    def morphism(category: str, name: str, line: Optional[int]) -> str:
        alias = ws.aliases[category]
        if name not in alias:
            raise UnresolvedReference(f"unknown morphism {name} in {category}", line)
        return alias[name]

    for decl in doc.declarations:
        if isinstance(decl, CategoryDecl):
            ws.categories[decl.name], ws.aliases[decl.name] = _resolve_category(decl, budgets)
        elif isinstance(decl, ClassDecl):
            C = _lookup(ws.categories, "category", decl.category, decl.line)
            members = {morphism(decl.category, m, decl.line) for m in decl.members}
            ws.classes[decl.name] = MorphClass(C, frozenset(members) | frozenset(C.identity.values()), decl.name)
        elif isinstance(decl, FunctorDecl):
            ws.functors[decl.name] = _resolve_functor(decl, ws, morphism)
        elif isinstance(decl, SetupDecl):
            ws.setups[decl.name] = _resolve_setup(decl, ws)
        elif isinstance(decl, PosetDecl):
            elements = list(dict.fromkeys(decl.elements + tuple(x for pair in decl.relations for x in pair)))
            ws.posets[decl.name] = make_poset(decl.name, elements, decl.relations)
        elif isinstance(decl, WeakDecl):
            setup = _lookup(ws.setups, "setup", decl.setup, decl.line)
            ws.weak[decl.name] = (decl.setup, _resolve_weak(decl, setup))
        else:
            _lookup(ws.setups, "setup", decl.setup, decl.line)
            selections: Dict[str, FrozenSet[Tuple[str, str]]] = {}
            for d, c, j in decl.selections:
                selections[d] = selections.get(d, frozenset()) | {(c, j)}
            ws.kselect[decl.name] = (decl.setup, KSelector(decl.name, selections))
    logger.info(
        "resolved %d declarations: %d categories, %d setups",
        len(doc.declarations),
        len(ws.categories),
        len(ws.setups),
    )
    return ws


def _resolve_functor(decl: FunctorDecl, ws: Workspace, morphism) -> FunctorData:
    A = _lookup(ws.categories, "category", decl.source, decl.line)
    B = _lookup(ws.categories, "category", decl.target, decl.line)
    omap = {}
    for x, y in decl.objects:
        if x not in A.objects or y not in B.objects:
            raise UnresolvedReference(f"unknown object in {decl.name}: {x} -> {y}", decl.line)
        omap[x] = y
    missing = [x for x in A.objects if x not in omap]
    if missing:
        raise UnresolvedReference(f"functor {decl.name} leaves object {missing[0]} unmapped", decl.line)
    mmap = {A.identity[x]: B.identity[omap[x]] for x in A.objects}
    for f, u in decl.morphisms:
        mmap[morphism(decl.source, f, decl.line)] = morphism(decl.target, u, decl.line)
    missing = [f for f in A.morphisms if f not in mmap]
    if missing:
        raise UnresolvedReference(f"functor {decl.name} leaves morphism {missing[0]} unmapped", decl.line)
    return FunctorData(decl.name, A, B, omap, mmap)


def _resolve_setup(decl: SetupDecl, ws: Workspace) -> LocalisationSetup:
    bound = dict(decl.bindings)
    unknown = sorted(set(bound) - set(SETUP_KEYS))
    if unknown:
        raise DslError(f"setup {decl.name}: unknown key {unknown[0]}", decl.line)
    for key in SETUP_KEYS:
        if key not in bound:
            raise UnresolvedReference(f"setup {decl.name} does not bind {key}", decl.line)
    C = _lookup(ws.categories, "category", bound["C"], decl.line)
    D = _lookup(ws.categories, "category", bound["D"], decl.line)
    T = _lookup(ws.functors, "functor", bound["T"], decl.line)
    S = _lookup(ws.classes, "class", bound["S"], decl.line)
    Sprime = _lookup(ws.classes, "class", bound["Sprime"], decl.line)
    if T.source is not C or T.target is not D:
        raise DslError(f"setup {decl.name}: {T.name} is not a functor {bound['C']} -> {bound['D']}", decl.line)
    if S.carrier is not C or Sprime.carrier is not D:
        raise DslError(f"setup {decl.name}: classes live on the wrong categories", decl.line)
    return LocalisationSetup(decl.name, C, D, T, S, Sprime)


def _resolve_weak(decl: WeakDecl, setup: LocalisationSetup) -> WeakReplacement:
    C = setup.C
    weak = WeakReplacement(decl.name)
    lines = decl.selection_lines or (decl.line,) * len(decl.selections)
    for (kind, index, payload), line in zip(decl.selections, lines):
        if kind == "obj":
            weak.objects[index[0]] = weak.objects.get(index[0], frozenset()) | {tuple(payload)}
        elif kind == "arrow":
            c0, s0, c1, s1, g = payload
            p = arrow_payload((c0, s0), (c1, s1), g)
            weak.arrows[index[0]] = weak.arrows.get(index[0], frozenset()) | {p}
        else:
            c0, s0, c1, s1, c2, s2, g1, g2 = payload
            if (g2, g1) not in C.table:
                raise CompositionError(f"{g2} and {g1} are not composable in {C.name}", line)
            p = pair_payload(C, (c0, s0), (c1, s1), (c2, s2), g1, g2)
            weak.pairs[tuple(index)] = weak.pairs.get(tuple(index), frozenset()) | {p}
    return weak


# -- export -------------------------------------------------------------------------


def category_decl(C: FinCategory, name: Optional[str] = None) -> CategoryDecl:
    """A declaration with the full composition table of C."""
    composites = tuple(
        (g, f, C.compose(g, f))
        for f in C.non_identities()
        for g in C.out_of(C.dst(f))
        if not C.is_identity(g)
    )
    arrows = tuple((f, C.src(f), C.dst(f)) for f in C.non_identities())
    return CategoryDecl(name or C.name, C.objects, arrows, composites)


def setup_document(setup: LocalisationSetup) -> DslDocument:
    """A standalone document declaring ``setup`` and everything it uses."""
    C, D, T = setup.C, setup.D, setup.T
    shared = C is D or (C == D and C.name == D.name)
    c_name = C.name
    d_name = D.name if shared or D.name != C.name else f"{D.name}'"
    s_name = setup.S.name
    sp_name = setup.Sprime.name if setup.Sprime.name != s_name else f"{s_name}'"
    decls: List[Decl] = [category_decl(C, c_name)]
    if not shared:
        decls.append(category_decl(D, d_name))
    decls.append(ClassDecl(s_name, c_name, tuple(setup.S.non_identities())))
    decls.append(ClassDecl(sp_name, d_name, tuple(setup.Sprime.non_identities())))
    decls.append(
        FunctorDecl(
            T.name,
            c_name,
            d_name,
            tuple((x, T.obj(x)) for x in C.objects),
            tuple((f, T(f)) for f in C.non_identities()),
        )
    )
    decls.append(
        SetupDecl(
            setup.name,
            (("C", c_name), ("D", d_name), ("T", T.name), ("S", s_name), ("Sprime", sp_name)),
        )
    )
    return DslDocument(tuple(decls))
