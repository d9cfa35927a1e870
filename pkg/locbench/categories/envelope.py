"""Finite coproduct envelope C^∐, truncated at family size k.

Objects are ordered families (C_1, ..., C_m) with m ≤ k, named
``"(a,b)"``; the empty family ``"()"`` is initial. A morphism
(C_i) -> (D_j) is an index map f together with components C_i -> D_f(i).
"""

import itertools
import logging
from dataclasses import dataclass, field
from typing import Any, Dict, Iterator, List, Optional, Tuple

from ..errors import BudgetExceeded, PreconditionViolation
from ..utils.config import Budgets
from .core import (
    DEFAULT_MORPHISM_CAP,
    FinCategory,
    FunctorData,
    MorphClass,
    assemble_category,
    is_coproduct,
    validate_functor,
)
from .setup import LocalisationSetup

logger = logging.getLogger(__name__)

Family = Tuple[str, ...]
# (source family, target family, index map, components)
Key = Tuple[Family, Family, Tuple[int, ...], Tuple[str, ...]]

EMPTY = "()"


def family_name(family: Family) -> str:
    return "(" + ",".join(family) + ")"


@dataclass
class EnvelopeCategory:
    """C^∐ at truncation k with its inclusion I: C -> C^∐."""

    base: FinCategory
    k: int
    category: FinCategory
    families: Dict[str, Family]
    keys: Dict[str, Key]
    names: Dict[Key, str]
    inclusion: FunctorData = field(init=False)

    def __post_init__(self):
        C = self.base
        self.inclusion = FunctorData(
            f"I_{C.name}",
            C,
            self.category,
            {x: family_name((x,)) for x in C.objects},
            {f: self.names[((C.src(f),), (C.dst(f),), (0,), (f,))] for f in C.morphisms},
        )

    def morphism(self, src: Family, dst: Family, index_map: Tuple[int, ...], components: Tuple[str, ...]) -> str:
        return self.names[(tuple(src), tuple(dst), tuple(index_map), tuple(components))]

    def to_dict(self) -> Dict[str, Any]:
        return {
            "base": self.base.name,
            "k": self.k,
            "objects": len(self.category.objects),
            "morphisms": len(self.category),
        }


def _label(key: Key) -> str:
    src, dst, index_map, components = key
    parts = ",".join(f"{j}:{g}" for j, g in zip(index_map, components))
    return f"[{parts}]:{family_name(src)}->{family_name(dst)}"


def _keys(C: FinCategory, families: List[Family], cap: int) -> Iterator[Key]:
    count = 0
    for X in families:
        for Y in families:
            for index_map in itertools.product(range(len(Y)), repeat=len(X)):
                homs = [C.hom(x, Y[j]) for x, j in zip(X, index_map)]
                for components in itertools.product(*homs):
                    count += 1
                    if count > cap:
                        raise BudgetExceeded("morphism_cap", cap, f"envelope of {C.name}")
                    yield X, Y, index_map, components


def coproduct_envelope(C: FinCategory, k: int, cap: int = DEFAULT_MORPHISM_CAP) -> EnvelopeCategory:
    """Build C^∐ with families of size at most ``k``.

    Raises:
        BudgetExceeded: More than ``cap`` morphisms
        ValueError: For negative ``k``
    """
    if k < 0:
        raise ValueError(f"truncation must be non-negative, got {k}")

    def build() -> EnvelopeCategory:
        families: List[Family] = [fam for m in range(k + 1) for fam in itertools.product(C.objects, repeat=m)]
        by_name = {family_name(fam): fam for fam in families}
        arrows = [(key, family_name(key[0]), family_name(key[1])) for key in _keys(C, families, cap)]

        def compose(g: Key, f: Key) -> Key:
            X, _, fi, fc = f
            _, Z, gi, gc = g
            return (
                X,
                Z,
                tuple(gi[j] for j in fi),
                tuple(C.compose(gc[j], c) for j, c in zip(fi, fc)),
            )

        def identity(obj: str) -> Key:
            fam = by_name[obj]
            return fam, fam, tuple(range(len(fam))), tuple(C.identity[x] for x in fam)

        category, names = assemble_category(
            f"{C.name}^coprod{k}", by_name, arrows, compose, identity, _label, cap
        )
        keys = {name: key for key, name in names.items()}
        logger.debug("envelope of %s at %d: %d objects, %d morphisms", C.name, k, len(category.objects), len(category))
        return EnvelopeCategory(C, k, category, by_name, keys, names)

    return C.cached(("envelope", k, cap), build)


def coproduct(env: EnvelopeCategory, X: str, Y: str) -> Optional[Tuple[str, str, str]]:
    """Concatenation X ⊔ Y with its coprojections, or None past the truncation."""
    A, B = env.families[X], env.families[Y]
    if len(A) + len(B) > env.k:
        return None
    Z = A + B
    C = env.base
    i1 = env.morphism(A, Z, tuple(range(len(A))), tuple(C.identity[x] for x in A))
    i2 = env.morphism(B, Z, tuple(range(len(A), len(Z))), tuple(C.identity[x] for x in B))
    return family_name(Z), i1, i2


def envelope_class(env: EnvelopeCategory, S: MorphClass) -> MorphClass:
    """S^∐: bijective index map and every component in S."""
    members = frozenset(
        name
        for name, (X, Y, index_map, components) in env.keys.items()
        if len(X) == len(Y)
        and len(set(index_map)) == len(index_map)
        and all(c in S for c in components)
    )
    return MorphClass(env.category, members, f"{S.name}^coprod")


def envelope_functor(T: FunctorData, source: EnvelopeCategory, target: EnvelopeCategory) -> FunctorData:
    """T^∐: apply T to every family member and every component."""
    omap = {name: family_name(tuple(T.obj(x) for x in fam)) for name, fam in source.families.items()}
    mmap = {}
    for name, (X, Y, index_map, components) in source.keys.items():
        mmap[name] = target.morphism(
            tuple(T.obj(x) for x in X),
            tuple(T.obj(y) for y in Y),
            index_map,
            tuple(T(c) for c in components),
        )
    return FunctorData(f"{T.name}^coprod", source.category, target.category, omap, mmap)


def lifted_setup(setup: LocalisationSetup, k: int, cap: int = DEFAULT_MORPHISM_CAP) -> LocalisationSetup:
    """(C^∐, D^∐, T^∐, S^∐, S′^∐) at truncation k."""
    source = coproduct_envelope(setup.C, k, cap)
    target = coproduct_envelope(setup.D, k, cap)
    return LocalisationSetup(
        f"{setup.name}^coprod{k}",
        source.category,
        target.category,
        envelope_functor(setup.T, source, target),
        envelope_class(source, setup.S),
        envelope_class(target, setup.Sprime),
    )


# -- lift check -------------------------------------------------------------------


@dataclass
class EnvelopeLiftReport:
    """Outcome of the envelope lift at truncation k."""

    setup: str
    k: int
    status: str
    checks: Dict[str, bool] = field(default_factory=dict)
    detail: str = ""
    witness: Dict[str, Any] = field(default_factory=dict)

    @property
    def certified(self) -> bool:
        return self.status == "Certified"

    def to_dict(self) -> Dict[str, Any]:
        label = f"Certified-at-{self.k}" if self.certified else self.status
        result: Dict[str, Any] = {"setup": self.setup, "k": self.k, "status": label, "checks": self.checks}
        if self.detail:
            result["detail"] = self.detail
        if self.witness:
            result["witness"] = self.witness
        return result


def _localised_coproducts(env: EnvelopeCategory, M: FinCategory, P: FunctorData) -> Optional[Dict[str, Any]]:
    """First pair whose concatenation fails to be a coproduct in the localisation."""
    if any(len(M.hom(EMPTY, x)) != 1 for x in M.objects):
        return {"initial": EMPTY}
    for X in env.category.objects:
        for Y in env.category.objects:
            found = coproduct(env, X, Y)
            if found is None:
                continue
            Z, i1, i2 = found
            if not is_coproduct(M, Z, P(i1), P(i2)):
                return {"pair": [X, Y]}
    return None


def check_envelope_lift(setup: LocalisationSetup, k: int, budgets: Optional[Budgets] = None) -> EnvelopeLiftReport:
    """Lift a certified equivalence to the coproduct envelopes at truncation k.

    Checks that the inclusions are fully faithful, that coproducts in the
    localised envelope are concatenations with the empty family initial,
    and that T^∐ localises to an equivalence.

    Raises:
        PreconditionViolation: The base setup has no certified equivalence
    """
    from ..theory.localisation import EQUIVALENCE, UNDECIDED, build_equivalence, equivalence_oracle, localise

    budgets = budgets or Budgets()
    base = build_equivalence(setup, budgets)
    if not base.certified:
        raise PreconditionViolation("envelope.base", base.reason or base.status, {"setup": setup.name})
    report = EnvelopeLiftReport(setup.name, k, "Unverified")
    try:
        lifted = lifted_setup(setup, k, budgets.morphism_cap)
    except BudgetExceeded as e:
        logger.warning("envelope of %s at %d: %s", setup.name, k, e)
        report.status = UNDECIDED
        report.detail = str(e)
        return report
    envC = coproduct_envelope(setup.C, k, budgets.morphism_cap)
    envD = coproduct_envelope(setup.D, k, budgets.morphism_cap)
    checks = report.checks
    checks["inclusion.C"] = validate_functor(envC.inclusion).details.get("fully_faithful", False)
    checks["inclusion.D"] = validate_functor(envD.inclusion).details.get("fully_faithful", False)

    for side, env, S in (("C", envC, lifted.S), ("D", envD, lifted.Sprime)):
        model = localise(env.category, S, budgets)
        if not model.decided:
            report.status = UNDECIDED
            report.detail = f"localised envelope of {side} undecided: {model.reason}"
            return report
        failure = _localised_coproducts(env, model.category, model.P)
        checks[f"coproducts.{side}"] = failure is None
        if failure is not None and not report.witness:
            report.witness = {"side": side, **failure}

    verdict = equivalence_oracle(lifted, budgets)
    if verdict.status == UNDECIDED:
        report.status = UNDECIDED
        report.detail = "oracle undecided"
        return report
    checks["oracle"] = verdict.status == EQUIVALENCE
    if not checks["oracle"] and not report.witness:
        report.witness = verdict.witness
    if all(checks.values()):
        report.status = "Certified"
    else:
        report.detail = "check " + next(name for name, ok in checks.items() if not ok) + " failed"
    logger.info("envelope lift of %s at %d: %s", setup.name, k, report.status)
    return report
