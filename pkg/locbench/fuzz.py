"""Seeded generation of finite categories and localisation setups, and a shrinker.

Generation only draws integers from a ``numpy.random.default_rng`` seeded
by the config, so a (config, seed) pair always yields the same stream.
"""

import logging
from dataclasses import dataclass, replace
from typing import Callable, Dict, Iterator, List, Optional, Sequence, Tuple

import numpy as np

from .categories.core import (
    DEFAULT_MORPHISM_CAP,
    FinCategory,
    FunctorData,
    MorphClass,
    assemble_category,
    build_category,
    closure_class,
    constant_functor,
    full_subcategory,
    identity_functor,
    identity_name,
    inclusion_functor,
    make_poset,
    poset_category,
    validate_functor,
)
from .categories.setup import LocalisationSetup
from .errors import BudgetExceeded, WorkbenchError
from .theory.rewriting import saturate_table

logger = logging.getLogger(__name__)

STRATEGIES = ("poset", "dag-quotient", "monoid-glue", "monoid-product")
MAX_RETRIES = 16


@dataclass(frozen=True)
class GenConfig:
    """Bounds and densities for one generated stream."""

    seed: int = 0
    max_objects: int = 4
    max_morphisms: int = 8
    relation_density: float = 0.4
    class_density: float = 0.3
    strategy: str = "poset"

    def __post_init__(self):
        if self.max_objects < 1 or self.max_morphisms < 1:
            raise ValueError("max_objects and max_morphisms must be positive")
        if not (0.0 <= self.relation_density <= 1.0 and 0.0 <= self.class_density <= 1.0):
            raise ValueError("densities must lie in [0, 1]")
        if self.strategy not in STRATEGIES:
            raise ValueError(f"unknown strategy {self.strategy}, expected one of {STRATEGIES}")


def _chance(rng: np.random.Generator, density: float) -> bool:
    return int(rng.integers(1000)) < int(round(density * 1000))


def _draw(rng: np.random.Generator, n: int) -> int:
    return int(rng.integers(n))


def _poset(rng: np.random.Generator, cfg: GenConfig, name: str) -> Optional[FinCategory]:
    n = 1 + _draw(rng, cfg.max_objects)
    elements = [f"x{i}" for i in range(n)]
    relations = [
        (elements[i], elements[j])
        for i in range(n)
        for j in range(i + 1, n)
        if _chance(rng, cfg.relation_density)
    ]
    order = make_poset(name, elements, relations)
    if len(order.strict_pairs()) > cfg.max_morphisms:
        return None
    return poset_category(order)


def _paths(objects: Sequence[str], arrows: Sequence[Tuple[str, str, str]]) -> List[Tuple[str, ...]]:
    """Every non-empty path of a DAG, in diagrammatic order."""
    out: Dict[str, List[Tuple[str, str]]] = {x: [] for x in objects}
    for a, src, dst in arrows:
        out[src].append((a, dst))
    found = []

    def walk(at: str, path: Tuple[str, ...]) -> None:
        for a, dst in out[at]:
            found.append(path + (a,))
            walk(dst, path + (a,))

    for x in objects:
        walk(x, ())
    return found


def _path_groups(
    objects: Sequence[str], arrows: Sequence[Tuple[str, str, str]]
) -> Dict[Tuple[str, str], List[Tuple[str, ...]]]:
    """Non-empty paths of a DAG grouped by their ends."""
    ends = {a: (src, dst) for a, src, dst in arrows}
    groups: Dict[Tuple[str, str], List[Tuple[str, ...]]] = {}
    for path in _paths(objects, arrows):
        groups.setdefault((ends[path[0]][0], ends[path[-1]][1]), []).append(path)
    return groups


def _dag_quotient(rng: np.random.Generator, cfg: GenConfig, name: str) -> Optional[FinCategory]:
    n = 1 + _draw(rng, cfg.max_objects)
    objects = [f"x{i}" for i in range(n)]
    arrows: List[Tuple[str, str, str]] = []
    for i in range(n):
        for j in range(i + 1, n):
            if _chance(rng, cfg.relation_density):
                arrows.append((f"a{len(arrows)}", objects[i], objects[j]))
                if _chance(rng, cfg.relation_density / 2):
                    arrows.append((f"a{len(arrows)}", objects[i], objects[j]))
    if len(arrows) > cfg.max_morphisms:
        return None
    groups = _path_groups(objects, arrows)
    equations = [
        (p, q)
        for _, paths in sorted(groups.items())
        for i, p in enumerate(paths)
        for q in paths[i + 1:]
        if _chance(rng, cfg.relation_density)
    ]
    try:
        category, _ = saturate_table(name, objects, arrows, equations, DEFAULT_MORPHISM_CAP)
    except BudgetExceeded:
        return None
    return category


def _transformation_monoid(rng: np.random.Generator, name: str) -> FinCategory:
    """One-object category of the self-maps generated by random maps of a small set."""
    size = 2 + _draw(rng, 2)
    generators = [tuple(_draw(rng, size) for _ in range(size)) for _ in range(1 + _draw(rng, 2))]
    unit = tuple(range(size))
    elements = [unit]
    frontier = [unit]
    while frontier:
        fresh = []
        for e in frontier:
            for g in generators:
                h = tuple(g[e[i]] for i in range(size))
                if h not in elements:
                    elements.append(h)
                    fresh.append(h)
        frontier = fresh
    names = {e: ("id_pt" if e == unit else f"t{i}") for i, e in enumerate(elements)}
    table = {
        (names[g], names[f]): names[tuple(g[f[i]] for i in range(size))]
        for g in elements[1:]
        for f in elements[1:]
    }
    return build_category(name, ["pt"], [(names[e], "pt", "pt") for e in elements[1:]], table)


def _monoid_product(rng: np.random.Generator, cfg: GenConfig, name: str) -> Optional[FinCategory]:
    """A random poset with a random transformation monoid acting at every object."""
    P = _poset(rng, cfg, f"{name}_P")
    if P is None:
        return None
    M = _transformation_monoid(rng, f"{name}_M")
    if len(P) * len(M) - len(P.objects) > cfg.max_morphisms:
        return None
    unit = M.identity["pt"]

    def label(key: Tuple[str, str]) -> str:
        u, t = key
        if t == unit:
            return u
        if P.is_identity(u):
            return f"{t}@{P.src(u)}"
        return f"{u}*{t}"

    arrows = [((u, t), P.src(u), P.dst(u)) for u in P.morphisms for t in M.morphisms]
    category, _ = assemble_category(
        name,
        P.objects,
        arrows,
        lambda g, f: (P.compose(g[0], f[0]), M.compose(g[1], f[1])),
        lambda x: (P.identity[x], unit),
        label,
    )
    return category


def _monoid_glue(rng: np.random.Generator, cfg: GenConfig, name: str) -> Optional[FinCategory]:
    """Disjoint posets glued along a tree by random identifications.

    Piece ``i > 0`` is glued to an earlier piece by arrows from a random
    partial object map, with every square over a pair of poset arrows made
    to commute. A single-point gluing is inverted with some probability,
    identifying the two objects up to isomorphism. The table is closed with
    :func:`saturate_table`.
    """
    n = 1 + _draw(rng, cfg.max_objects)
    pieces_count = 1 + _draw(rng, min(n, 3))
    objects = [f"x{i}" for i in range(n)]
    piece_of = [i if i < pieces_count else _draw(rng, pieces_count) for i in range(n)]
    pieces = [[x for x, p in zip(objects, piece_of) if p == k] for k in range(pieces_count)]

    arrows: List[Tuple[str, str, str]] = []
    for piece in pieces:
        for i, x in enumerate(piece):
            for y in piece[i + 1:]:
                if _chance(rng, cfg.relation_density):
                    arrows.append((f"a{len(arrows)}", x, y))
    groups = _path_groups(objects, arrows)
    equations: List[Tuple[Tuple[str, ...], Tuple[str, ...]]] = [
        (paths[0], p) for _, paths in sorted(groups.items()) for p in paths[1:]
    ]

    glue: List[Tuple[str, str, str]] = []
    for k in range(1, pieces_count):
        A, B = pieces[_draw(rng, k)], pieces[k]
        if _chance(rng, 0.5):
            A, B = B, A
        domain = [x for x in A if _chance(rng, 0.5)] or [A[_draw(rng, len(A))]]
        image = {x: B[_draw(rng, len(B))] for x in domain}
        bundle = {x: f"g{len(glue) + i}" for i, x in enumerate(domain)}
        glue += [(bundle[x], x, image[x]) for x in domain]
        for x in domain:
            for x2 in domain:
                y, y2 = image[x], image[x2]
                if (x, x2) not in groups:
                    continue
                target = [()] if y == y2 else groups.get((y, y2), [])
                if target:
                    equations.append((groups[(x, x2)][0] + (bundle[x2],), (bundle[x],) + target[0]))
        if len(domain) == 1 and _chance(rng, cfg.relation_density):
            (x,) = domain
            back = f"h{len(glue)}"
            glue.append((back, image[x], x))
            equations.append(((bundle[x], back), (identity_name(x),)))
            equations.append(((back, bundle[x]), (identity_name(image[x]),)))

    if len(arrows) + len(glue) > cfg.max_morphisms:
        return None
    try:
        category, _ = saturate_table(name, objects, arrows + glue, equations, DEFAULT_MORPHISM_CAP)
    except BudgetExceeded:
        return None
    return category


_BUILDERS: Dict[str, Callable[[np.random.Generator, GenConfig, str], Optional[FinCategory]]] = {
    "poset": _poset,
    "dag-quotient": _dag_quotient,
    "monoid-glue": _monoid_glue,
    "monoid-product": _monoid_product,
}


def gen_category(cfg: GenConfig, rng: Optional[np.random.Generator] = None, name: Optional[str] = None) -> FinCategory:
    """Draw a finite category with the configured strategy.

    Dead draws are retried; after ``MAX_RETRIES`` the one-object discrete
    category is returned.
    """
    rng = rng if rng is not None else np.random.default_rng(cfg.seed)
    name = name or f"G{cfg.seed}"
    for _ in range(MAX_RETRIES):
        category = _BUILDERS[cfg.strategy](rng, cfg, name)
        if category is not None and len(category.non_identities()) <= cfg.max_morphisms:
            return category
    logger.debug("strategy %s gave up after %d draws", cfg.strategy, MAX_RETRIES)
    return build_category(name, ["x0"], [], {})


def _random_functor(rng: np.random.Generator, C: FinCategory, D: FinCategory) -> Optional[FunctorData]:
    """A random object map with random images per morphism, kept if it is a functor."""
    omap = {x: D.objects[_draw(rng, len(D.objects))] for x in C.objects}
    mmap = {}
    for f in sorted(C.morphisms):
        if C.is_identity(f):
            mmap[f] = D.identity[omap[C.src(f)]]
            continue
        images = D.hom(omap[C.src(f)], omap[C.dst(f)])
        if not images:
            return None
        mmap[f] = images[_draw(rng, len(images))]
    T = FunctorData("T", C, D, omap, mmap)
    return T if validate_functor(T).passed else None


def gen_setup(cfg: GenConfig) -> LocalisationSetup:
    """Draw D, then T, then the classes.

    T is a full inclusion, the identity, a constant functor or a random
    functor from a generated C; a random functor that fails the functor laws
    after ``MAX_RETRIES`` draws is replaced by a constant one. S′ is the
    closure of a random seed set. S is either all of T⁻¹(S′) or the closure
    of a random part of it, so T(S) ⊆ S′ by construction.
    """
    rng = np.random.default_rng(cfg.seed)
    D = gen_category(cfg, rng, f"D{cfg.seed}")
    mode = _draw(rng, 4)
    if mode == 0:
        keep = [x for x in D.objects if _chance(rng, 0.5)] or [D.objects[_draw(rng, len(D.objects))]]
        C = full_subcategory(D, keep, f"C{cfg.seed}")
        T = inclusion_functor(C, D, "T")
    elif mode == 1:
        C = D
        T = replace(identity_functor(D), name="T")
    else:
        C = gen_category(cfg, rng, f"C{cfg.seed}")
        drawn = None
        if mode == 3:
            for _ in range(MAX_RETRIES):
                drawn = _random_functor(rng, C, D)
                if drawn is not None:
                    break
            else:
                logger.debug("no random functor %s -> %s after %d draws", C.name, D.name, MAX_RETRIES)
        if drawn is None:
            drawn = replace(constant_functor(C, D, D.objects[_draw(rng, len(D.objects))]), name="T")
        T = drawn
    Sprime = closure_class(D, [f for f in D.non_identities() if _chance(rng, cfg.class_density)], "Sprime")
    preimage = [f for f in C.non_identities() if T(f) in Sprime]
    if mode < 2 and _chance(rng, 0.5):
        S = closure_class(C, preimage, "S")
    else:
        S = closure_class(C, [f for f in preimage if _chance(rng, cfg.class_density)], "S")
    name = f"fuzz_{cfg.strategy.replace('-', '_')}_{cfg.seed}"
    return LocalisationSetup(name, C, D, T, S, Sprime)


def stream(cfg: GenConfig, count: int) -> Iterator[LocalisationSetup]:
    """Setups for seeds cfg.seed, cfg.seed + 1, …"""
    for i in range(count):
        yield gen_setup(replace(cfg, seed=cfg.seed + i))


# -- shrinking ----------------------------------------------------------------


def setup_size(setup: LocalisationSetup) -> int:
    return (
        len(setup.C.objects)
        + len(setup.D.objects)
        + len(setup.C)
        + len(setup.D)
        + len(setup.S)
        + len(setup.Sprime)
    )


def _restrict(
    setup: LocalisationSetup,
    d_keep: Sequence[str],
    c_keep: Sequence[str],
    sprime: frozenset,
    s: frozenset,
) -> LocalisationSetup:
    D = full_subcategory(setup.D, d_keep, setup.D.name)
    shared = setup.C is setup.D and set(c_keep) == set(d_keep)
    C = D if shared else full_subcategory(setup.C, c_keep, setup.C.name)
    T = FunctorData(
        setup.T.name,
        C,
        D,
        {x: setup.T.obj(x) for x in C.objects},
        {f: setup.T(f) for f in C.morphisms},
    )
    return LocalisationSetup(
        setup.name,
        C,
        D,
        T,
        MorphClass(C, frozenset(m for m in s if m in C.morphisms), setup.S.name),
        MorphClass(D, frozenset(m for m in sprime if m in D.morphisms), setup.Sprime.name),
    )


def _factorises(K: FinCategory, members: frozenset, s: str) -> bool:
    rest = [m for m in members if m != s and not K.is_identity(m)]
    return any(K.src(g) == K.dst(f) and K.compose(g, f) == s for f in rest for g in rest)


def _moves(setup: LocalisationSetup) -> Iterator[LocalisationSetup]:
    """Candidate one-step reductions, smallest first."""
    C, D, T = setup.C, setup.D, setup.T
    S, Sp = setup.S.members, setup.Sprime.members
    for d in D.objects:
        d_keep = [x for x in D.objects if x != d]
        c_keep = [c for c in C.objects if T.obj(c) != d]
        yield _restrict(setup, d_keep, c_keep, Sp, S)
    if C is not D:
        for c in C.objects:
            yield _restrict(setup, D.objects, [x for x in C.objects if x != c], Sp, S)
    image = {T(s) for s in S}
    for s in sorted(Sp):
        if not D.is_identity(s) and s not in image and not _factorises(D, Sp, s):
            yield _restrict(setup, D.objects, C.objects, Sp - {s}, S)
    for s in sorted(S):
        if not C.is_identity(s) and not _factorises(C, S, s):
            yield _restrict(setup, D.objects, C.objects, Sp, S - {s})


def _still_fails(predicate: Callable[[LocalisationSetup], bool], setup: LocalisationSetup) -> bool:
    try:
        return bool(predicate(setup))
    except WorkbenchError as e:
        logger.debug("shrink candidate rejected: %s", e)
        return False


def shrink(
    setup: LocalisationSetup,
    predicate: Callable[[LocalisationSetup], bool],
    max_steps: int = 1000,
) -> LocalisationSetup:
    """Greedily drop objects and class members while ``predicate`` stays true.

    The result is locally minimal: no single move keeps the predicate.
    """
    if not _still_fails(predicate, setup):
        return setup
    current = setup
    steps = 0
    improved = True
    while improved and steps < max_steps:
        improved = False
        for candidate in _moves(current):
            steps += 1
            if _still_fails(predicate, candidate):
                current = candidate
                improved = True
                break
            if steps >= max_steps:
                break
    logger.info("shrunk %s from size %d to %d in %d steps", setup.name, setup_size(setup), setup_size(current), steps)
    return current
