"""Typed word presentations of S⁻¹C and their Knuth-Bendix completion.

Words are in diagrammatic order: the first symbol is the first arrow
travelled. Identities are empty words, formal inverses are the symbols
``"{s}^-1"``. Rules are oriented by shortlex over the generator ranks,
originals before inverses.
"""

import logging
from dataclasses import dataclass
from typing import Any, Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

from ..categories.core import DEFAULT_MORPHISM_CAP, FinCategory, MorphClass, build_category, identity_name
from ..errors import BudgetExceeded

logger = logging.getLogger(__name__)

SymWord = Tuple[str, ...]
Letter = Tuple[str, int]


def inverse_symbol(s: str) -> str:
    return f"{s}^-1"


@dataclass(frozen=True)
class LocPresentation:
    """Generators, typing and relators of the localisation S⁻¹C."""

    name: str
    objects: Tuple[str, ...]
    generators: Tuple[str, ...]
    typing: Mapping[str, Tuple[str, str]]
    relators: Tuple[Tuple[SymWord, SymWord], ...]
    letters: Mapping[str, Letter]
    identities: frozenset = frozenset()

    __hash__ = object.__hash__

    def symbols(self, word: Iterable[Letter]) -> SymWord:
        """Signed letters to symbols; identity letters vanish.

        Raises:
            ValueError: For an inverse of a generator without a formal inverse
        """
        out = []
        for gen, exp in word:
            if gen in self.identities:
                continue
            sym = gen if exp == 1 else inverse_symbol(gen)
            if sym not in self.typing:
                raise ValueError(f"no generator {sym} in {self.name}")
            out.append(sym)
        return tuple(out)

    def to_letters(self, word: SymWord) -> List[Letter]:
        return [self.letters[sym] for sym in word]

    def target(self, src: str, word: SymWord) -> Optional[str]:
        """End object of a word starting at ``src``, or None if ill-typed."""
        at = src
        for sym in word:
            s, d = self.typing[sym]
            if s != at:
                return None
            at = d
        return at

    def to_dict(self) -> Dict[str, Any]:
        return {
            "generators": list(self.generators),
            "relators": [[" ".join(u) or "1", " ".join(v) or "1"] for u, v in self.relators],
        }


def loc_presentation(C: FinCategory, S: MorphClass) -> LocPresentation:
    """Composition relators f·g = gf plus s·s⁻¹ = 1 and s⁻¹·s = 1 for s ∈ S."""
    originals = C.non_identities()
    inverses = [inverse_symbol(s) for s in S.non_identities()]
    typing: Dict[str, Tuple[str, str]] = {f: (C.src(f), C.dst(f)) for f in originals}
    letters: Dict[str, Letter] = {f: (f, 1) for f in originals}
    for s in S.non_identities():
        typing[inverse_symbol(s)] = (C.dst(s), C.src(s))
        letters[inverse_symbol(s)] = (s, -1)
    relators: List[Tuple[SymWord, SymWord]] = []
    for f in originals:
        for g in C.out_of(C.dst(f)):
            if C.is_identity(g):
                continue
            gf = C.compose(g, f)
            relators.append(((f, g), () if C.is_identity(gf) else (gf,)))
    for s in S.non_identities():
        relators.append(((s, inverse_symbol(s)), ()))
        relators.append(((inverse_symbol(s), s), ()))
    return LocPresentation(
        f"{S.name}^-1{C.name}",
        C.objects,
        tuple(originals + inverses),
        typing,
        tuple(relators),
        letters,
        frozenset(C.identity.values()),
    )


def _rewrite(word: Sequence[str], rules: Mapping[SymWord, SymWord]) -> SymWord:
    w = list(word)
    lengths = sorted({len(lhs) for lhs in rules})
    i = 0
    while i < len(w):
        for k in lengths:
            if k > i + 1:
                break
            piece = tuple(w[i + 1 - k:i + 1])
            if piece in rules:
                w[i + 1 - k:i + 1] = rules[piece]
                i = max(i - k - 1, -1)
                break
        i += 1
    return tuple(w)


class RewriteSystem:
    """Oriented rules over typed words; normal forms are unique when complete."""

    def __init__(self, presentation: LocPresentation, rules: Dict[SymWord, SymWord], complete: bool, rounds: int):
        self.presentation = presentation
        self.rules = dict(rules)
        self.complete = complete
        self.rounds = rounds
        self._lhs_lengths = sorted({len(lhs) for lhs in self.rules})
        self._out: Dict[str, List[str]] = {}
        for sym in presentation.generators:
            self._out.setdefault(presentation.typing[sym][0], []).append(sym)

    def reduce(self, word: Sequence[str]) -> SymWord:
        return _rewrite(word, self.rules)

    def equal(self, u: Sequence[str], v: Sequence[str]) -> Optional[bool]:
        """Word equality; None when an incomplete system cannot tell."""
        if self.reduce(u) == self.reduce(v):
            return True
        return False if self.complete else None

    def _irreducible(self, word: SymWord) -> bool:
        return not any(word[-k:] in self.rules for k in self._lhs_lengths if k <= len(word))

    def irreducible_words(self, src: str, max_length: int, max_count: Optional[int] = None) -> Tuple[List[SymWord], bool]:
        """Irreducible words out of ``src`` by length; the flag says the enumeration closed."""
        words: List[SymWord] = [()]
        frontier: List[SymWord] = [()]
        while frontier:
            grown = []
            for w in frontier:
                end = self.presentation.target(src, w)
                for sym in self._out.get(end, ()):
                    candidate = w + (sym,)
                    if self._irreducible(candidate):
                        grown.append(candidate)
            if grown and len(grown[0]) > max_length:
                return words, False
            if max_count is not None and len(words) + len(grown) > max_count:
                return words, False
            words.extend(grown)
            frontier = grown
        return words, True

    def to_dict(self) -> Dict[str, Any]:
        return {
            "complete": self.complete,
            "rounds": self.rounds,
            "rules": [[" ".join(lhs), " ".join(rhs) or "1"] for lhs, rhs in sorted(self.rules.items())],
        }


def _critical_pairs(rules: Mapping[SymWord, SymWord]) -> List[Tuple[SymWord, SymWord]]:
    pairs = []
    items = list(rules.items())
    for l1, r1 in items:
        for l2, r2 in items:
            for k in range(1, min(len(l1), len(l2))):
                if l1[-k:] == l2[:k]:
                    pairs.append((r1 + l2[k:], l1[:-k] + r2))
    return pairs


def kb_complete(P: LocPresentation, max_rules: int = 500, max_rounds: int = 50) -> RewriteSystem:
    """Shortlex Knuth-Bendix completion with interreduction.

    Over budget, the partial system is returned with ``complete`` unset.
    """
    rank = {sym: i for i, sym in enumerate(P.generators)}

    def key(w: SymWord) -> Tuple[int, Tuple[int, ...]]:
        return len(w), tuple(rank[x] for x in w)

    rules: Dict[SymWord, SymWord] = {}
    pending: List[Tuple[SymWord, SymWord]] = list(P.relators)
    rounds = 0
    while True:
        while pending:
            u, v = pending.pop(0)
            u, v = _rewrite(u, rules), _rewrite(v, rules)
            if u == v:
                continue
            lhs, rhs = (u, v) if key(u) > key(v) else (v, u)
            rules[lhs] = rhs
            for other in list(rules):
                if other == lhs or other not in rules:
                    continue
                rest = {k: w for k, w in rules.items() if k != other}
                if _rewrite(other, rest) != other:
                    pending.append((other, rules.pop(other)))
                else:
                    rules[other] = _rewrite(rules[other], rules)
            if len(rules) > max_rules:
                logger.warning("completion of %s stopped at %d rules", P.name, len(rules))
                return RewriteSystem(P, rules, False, rounds)
        if rounds >= max_rounds:
            logger.warning("completion of %s stopped after %d rounds", P.name, rounds)
            return RewriteSystem(P, rules, False, rounds)
        rounds += 1
        fresh = [(a, b) for a, b in _critical_pairs(rules) if _rewrite(a, rules) != _rewrite(b, rules)]
        if not fresh:
            logger.debug("completed %s: %d rules in %d rounds", P.name, len(rules), rounds)
            return RewriteSystem(P, rules, True, rounds)
        pending.extend(fresh)


def saturate_table(
    name: str,
    objects: Sequence[str],
    arrows: Sequence[Tuple[str, str, str]],
    equations: Iterable[Tuple[SymWord, SymWord]],
    cap: int = DEFAULT_MORPHISM_CAP,
    max_rules: int = 500,
    max_rounds: int = 50,
) -> Tuple[FinCategory, Dict[str, str]]:
    """Close a partial composition table into a finite category.

    ``equations`` are pairs of generator words in diagrammatic order;
    identity names may appear and are dropped. Morphisms are the normal
    forms of the completed system: generators keep their names, longer
    normal forms are named by their letters in composition order joined
    with ``"."``.

    Returns:
        The category and a map from each generator to the morphism it names

    Raises:
        BudgetExceeded: If completion does not finish or the normal forms do
            not close within ``cap`` morphisms
    """
    typing = {a: (src, dst) for a, src, dst in arrows}
    identities = frozenset(identity_name(x) for x in objects)
    relators = tuple(
        (tuple(s for s in u if s not in identities), tuple(s for s in v if s not in identities))
        for u, v in equations
    )
    P = LocPresentation(
        name,
        tuple(objects),
        tuple(sorted(typing)),
        typing,
        relators,
        {a: (a, 1) for a in typing},
        identities,
    )
    system = kb_complete(P, max_rules, max_rounds)
    if not system.complete:
        raise BudgetExceeded("kb_max_rules", max_rules, f"composition table of {name} does not close")

    def label(word: SymWord, src: str) -> str:
        if not word:
            return identity_name(src)
        return ".".join(reversed(word))

    forms: Dict[SymWord, Tuple[str, str]] = {}
    for x in objects:
        words, closed = system.irreducible_words(x, cap, cap)
        if not closed or len(forms) + len(words) > cap:
            raise BudgetExceeded("morphism_cap", cap, f"composition table of {name}")
        for w in words:
            if w:
                forms[w] = (x, P.target(x, w))
    table = {}
    for u, (x, y) in forms.items():
        for v, (y2, _) in forms.items():
            if y2 == y:
                table[(label(v, y), label(u, x))] = label(system.reduce(u + v), x)
    category = build_category(name, objects, [(label(w, x), x, y) for w, (x, y) in sorted(forms.items())], table)
    names = {a: label(system.reduce((a,)), typing[a][0]) for a in typing}
    logger.debug("saturated %s: %d generators, %d morphisms", name, len(typing), len(category))
    return category, names
