"""Connectedness grades of finite categories.

-1-connected means non-empty, 0-connected adds a single zig-zag component,
1-connected adds a trivial fundamental group. The fundamental group of the
nerve only depends on its 2-skeleton, so presentations are read off the
non-identity morphisms and the composable pairs.
"""

import logging
from dataclasses import dataclass, field
from typing import Any, Dict, Iterable, List, Optional

import networkx as nx

from ..utils.config import Budgets
from .core import FinCategory, find_initial, find_terminal, opposite
from .groups import TRIVIAL, GroupPresentation, Pi1Verdict, decide_triviality

logger = logging.getLogger(__name__)

SUFFICIENT = "SufficientConditionMet"
UNKNOWN = "Unknown"


def _underlying_graph(C: FinCategory) -> nx.Graph:
    graph = nx.Graph()
    graph.add_nodes_from(C.objects)
    for f in C.non_identities():
        graph.add_edge(C.src(f), C.dst(f))
    return graph


def pi0(C: FinCategory) -> List[List[str]]:
    """Zig-zag components, each sorted, listed by least object."""
    return sorted(sorted(part) for part in nx.connected_components(_underlying_graph(C)))


def _arrows_in(C: FinCategory, component: Iterable[str]) -> List[str]:
    keep = set(component)
    return [f for f in C.non_identities() if C.src(f) in keep]


def _composition_relators(C: FinCategory, arrows: List[str]) -> List[tuple]:
    members = set(arrows)
    relators = []
    for f in arrows:
        for g in C.out_of(C.dst(f)):
            if g not in members:
                continue
            gf = C.compose(g, f)
            word = [(f, 1), (g, 1)]
            if not C.is_identity(gf):
                word.append((gf, -1))
            relators.append(tuple(word))
    return relators


def pi1_presentation(C: FinCategory, component: Iterable[str]) -> GroupPresentation:
    """Edge-path presentation of a component.

    Generators are the non-identity morphisms. A Kruskal spanning forest
    (edges taken in name order) contributes one relator per tree edge, and
    every composable pair (f, g) contributes f·g·(gf)^-1, the last letter
    dropped when gf is an identity.

    Raises:
        ValueError: If the component is empty
    """
    component = sorted(component)
    if not component:
        raise ValueError("pi1_presentation needs a non-empty component")
    arrows = _arrows_in(C, component)
    graph = nx.MultiGraph()
    graph.add_nodes_from(component)
    for f in arrows:
        graph.add_edge(C.src(f), C.dst(f), key=f)
    tree = sorted(key for _, _, key in nx.minimum_spanning_edges(graph, algorithm="kruskal", keys=True, data=False))
    relators = [((f, 1),) for f in tree] + _composition_relators(C, arrows)
    return GroupPresentation(tuple(arrows), tuple(relators))


def nerve_presentation(C: FinCategory, component: Iterable[str]) -> GroupPresentation:
    """Edge-path group of the explicit 2-complex, built independently.

    Vertices are objects, edges the non-degenerate 1-simplices, faces the
    non-degenerate 2-simplices. A depth-first spanning tree is contracted
    before the presentation is written down.
    """
    component = sorted(component)
    arrows = _arrows_in(C, component)
    simple = nx.Graph()
    simple.add_nodes_from(component)
    for f in arrows:
        u, v = C.src(f), C.dst(f)
        if u != v and not simple.has_edge(u, v):
            simple.add_edge(u, v, name=f)
    tree = {simple.edges[u, v]["name"] for u, v in nx.dfs_edges(simple, source=component[0])}

    def edge(f: str, exp: int) -> List[tuple]:
        return [] if f in tree else [(f, exp)]

    faces = []
    for f in arrows:
        for g in C.out_of(C.dst(f)):
            if C.is_identity(g):
                continue
            gf = C.compose(g, f)
            boundary = edge(f, 1) + edge(g, 1) + ([] if C.is_identity(gf) else edge(gf, -1))
            if boundary:
                faces.append(tuple(boundary))
    return GroupPresentation(tuple(f for f in arrows if f not in tree), tuple(faces))


@dataclass
class FilteringReport:
    """Ordered / cofiltering / filtering, with the first failing witness of each."""

    ordered: bool
    cofiltering: bool
    filtering: bool
    witnesses: Dict[str, Any] = field(default_factory=dict)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "ordered": self.ordered,
            "cofiltering": self.cofiltering,
            "filtering": self.filtering,
            "witnesses": self.witnesses,
        }


def _cofiltering_failure(C: FinCategory) -> Optional[Dict[str, Any]]:
    """First violated cofiltering clause (cones pointing in), or None."""
    if not C.objects:
        return {"clause": "non-empty"}
    for i, x in enumerate(C.objects):
        for y in C.objects[i:]:
            if not any(C.hom(z, x) and C.hom(z, y) for z in C.objects):
                return {"clause": "common source", "objects": [x, y]}
    for x in C.objects:
        for y in C.objects:
            parallel = C.hom(x, y)
            for i, f in enumerate(parallel):
                for g in parallel[i + 1:]:
                    if not any(C.compose(f, h) == C.compose(g, h) for h in C.into(x)):
                        return {"clause": "equaliser", "morphisms": [f, g]}
    return None


def filtering_check(C: FinCategory) -> FilteringReport:
    """Ordered by hom-set sizes; (co)filtering by exhaustive search."""
    ordered_failure = None
    for x in C.objects:
        for y in C.objects:
            if len(C.hom(x, y)) > 1:
                ordered_failure = {"objects": [x, y], "morphisms": list(C.hom(x, y))}
                break
        if ordered_failure:
            break
    down = _cofiltering_failure(C)
    up = _cofiltering_failure(opposite(C))
    witnesses = {}
    for key, failure in (("ordered", ordered_failure), ("cofiltering", down), ("filtering", up)):
        if failure is not None:
            witnesses[key] = failure
    return FilteringReport(ordered_failure is None, down is None, up is None, witnesses)


@dataclass
class ConnectivityReport:
    """Connectedness grades of one category."""

    category: str
    nonempty: bool
    components: List[List[str]]
    pi1: List[Pi1Verdict]
    filtering: FilteringReport
    infinity_verdict: str = UNKNOWN
    infinity_condition: Optional[str] = None

    @property
    def connected0(self) -> bool:
        return self.nonempty and len(self.components) == 1

    @property
    def connected1(self) -> bool:
        return self.connected0 and self.pi1[0].status == TRIVIAL

    def to_dict(self) -> Dict[str, Any]:
        return {
            "category": self.category,
            "nonempty": self.nonempty,
            "components": self.components,
            "pi1": [v.to_dict() for v in self.pi1],
            "filtering": self.filtering.to_dict(),
            "infinity": {"verdict": self.infinity_verdict, "condition": self.infinity_condition},
        }


def infinity_condition(C: FinCategory, filtering: Optional[FilteringReport] = None) -> Optional[str]:
    """Name of the first sufficient condition for ∞-connectedness that holds."""
    if not C.objects:
        return None
    filtering = filtering or filtering_check(C)
    if filtering.cofiltering:
        return "cofiltering"
    if filtering.filtering:
        return "filtering"
    if find_terminal(C) is not None:
        return "terminal object"
    if find_initial(C) is not None:
        return "initial object"
    return None


def connectivity(C: FinCategory, budgets: Optional[Budgets] = None) -> ConnectivityReport:
    """Assemble π0, per-component π1 verdicts, filtering and the ∞ verdict."""
    components = pi0(C)
    verdicts = [decide_triviality(pi1_presentation(C, part), budgets) for part in components]
    filtering = filtering_check(C)
    condition = infinity_condition(C, filtering)
    report = ConnectivityReport(
        C.name,
        bool(C.objects),
        components,
        verdicts,
        filtering,
        SUFFICIENT if condition else UNKNOWN,
        condition,
    )
    logger.debug(
        "connectivity of %s: %d components, pi1 %s, infinity %s",
        C.name,
        len(components),
        [v.status for v in verdicts],
        condition,
    )
    return report
