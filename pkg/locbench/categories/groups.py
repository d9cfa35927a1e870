"""Finitely presented groups and a bounded triviality decision pipeline.

The pipeline is a semi-decision procedure: Tietze elimination, then the
abelianisation through the integer Smith normal form, then Todd-Coxeter
enumeration of the trivial subgroup, then a search for homomorphisms onto
transitive permutation groups of small degree. Every Trivial or
Nontrivial verdict carries a certificate that :func:`verify_certificate`
replays.
"""

import itertools
import logging
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Sequence, Tuple

from sympy import ZZ, Matrix
from sympy.matrices.normalforms import invariant_factors

from ..errors import BudgetExceeded
from ..utils.config import Budgets

logger = logging.getLogger(__name__)

Letter = Tuple[str, int]
Word = Tuple[Letter, ...]

TRIVIAL = "Trivial"
NONTRIVIAL = "Nontrivial"
UNKNOWN = "Unknown"


def free_reduce(word: Sequence[Letter]) -> Word:
    """Cancel adjacent x x^-1 pairs."""
    out: List[Letter] = []
    for gen, exp in word:
        if out and out[-1] == (gen, -exp):
            out.pop()
        else:
            out.append((gen, exp))
    return tuple(out)


def cyclic_reduce(word: Sequence[Letter]) -> Word:
    """Free reduction followed by cancellation across the ends."""
    w = list(free_reduce(word))
    while len(w) > 1 and w[0] == (w[-1][0], -w[-1][1]):
        w = w[1:-1]
    return tuple(w)


def invert(word: Sequence[Letter]) -> Word:
    return tuple((gen, -exp) for gen, exp in reversed(word))


def word_to_str(word: Sequence[Letter]) -> str:
    if not word:
        return "1"
    return " ".join(gen if exp == 1 else f"{gen}^-1" for gen, exp in word)


@dataclass(frozen=True)
class GroupPresentation:
    """Generators and relators; a relator is a word of (generator, ±1) letters."""

    generators: Tuple[str, ...]
    relators: Tuple[Word, ...] = ()

    def unknown_generators(self) -> List[str]:
        known = set(self.generators)
        return sorted({gen for r in self.relators for gen, _ in r if gen not in known})

    def to_dict(self) -> Dict[str, Any]:
        return {
            "generators": list(self.generators),
            "relators": [word_to_str(r) for r in self.relators],
        }


@dataclass
class Pi1Verdict:
    """Outcome of the triviality pipeline."""

    status: str
    certificate: Dict[str, Any] = field(default_factory=dict)
    reason: str = ""

    def to_dict(self) -> Dict[str, Any]:
        result: Dict[str, Any] = {"status": self.status}
        if self.certificate:
            result["certificate"] = self.certificate
        if self.reason:
            result["reason"] = self.reason
        return result


# -- Tietze elimination --------------------------------------------------------


def _substitute(word: Word, gen: str, image: Word) -> Word:
    out: List[Letter] = []
    for g, e in word:
        if g == gen:
            out.extend(image if e == 1 else invert(image))
        else:
            out.append((g, e))
    return cyclic_reduce(out)


def tietze_simplify(P: GroupPresentation) -> Tuple[GroupPresentation, List[Dict[str, Any]]]:
    """Eliminate generators that occur exactly once in some relator.

    Returns:
        The simplified presentation and the elimination record: for each
        eliminated generator, the word it was replaced by
    """
    gens = list(P.generators)
    rels = [cyclic_reduce(r) for r in P.relators]
    rels = [r for r in rels if r]
    record: List[Dict[str, Any]] = []
    while True:
        found = None
        for k, r in enumerate(rels):
            counts: Dict[str, int] = {}
            for g, _ in r:
                counts[g] = counts.get(g, 0) + 1
            for pos, (g, e) in enumerate(r):
                if counts[g] == 1:
                    found = (k, pos, g, e)
                    break
            if found:
                break
        if found is None:
            break
        k, pos, gen, exp = found
        r = rels.pop(k)
        rest = r[pos + 1:] + r[:pos]
        # gen^exp · rest = 1
        image = free_reduce(invert(rest) if exp == 1 else rest)
        record.append({"generator": gen, "image": word_to_str(image)})
        gens.remove(gen)
        rels = [s for s in (_substitute(w, gen, image) for w in rels) if s]
        rels = list(dict.fromkeys(rels))
    return GroupPresentation(tuple(gens), tuple(rels)), record


# -- abelianisation -------------------------------------------------------------


def relation_matrix(P: GroupPresentation) -> List[List[int]]:
    """Exponent sums: one row per relator, one column per generator."""
    col = {g: i for i, g in enumerate(P.generators)}
    rows = []
    for r in P.relators:
        row = [0] * len(P.generators)
        for gen, exp in r:
            row[col[gen]] += exp
        rows.append(row)
    return rows


def abelian_invariants(P: GroupPresentation) -> Tuple[int, List[int]]:
    """Free rank and torsion coefficients (> 1) of the abelianisation."""
    n = len(P.generators)
    rows = relation_matrix(P)
    if n == 0:
        return 0, []
    if not rows or all(v == 0 for row in rows for v in row):
        return n, []
    factors = [abs(int(f)) for f in invariant_factors(Matrix(rows), domain=ZZ)]
    nonzero = [f for f in factors if f != 0]
    return n - len(nonzero), sorted(f for f in nonzero if f > 1)


# -- Todd-Coxeter ---------------------------------------------------------------


class CosetTable:
    """HLT coset enumeration of the trivial subgroup with coincidence handling."""

    def __init__(self, P: GroupPresentation, max_cosets: int):
        self.columns = len(P.generators) * 2
        self.index = {g: i for i, g in enumerate(P.generators)}
        self.relators = [self.encode(r) for r in P.relators]
        self.max_cosets = max_cosets
        self.table: List[List[Optional[int]]] = [[None] * self.columns]
        self.parent = [0]

    def encode(self, word: Word) -> List[int]:
        return [2 * self.index[g] + (0 if e == 1 else 1) for g, e in word]

    @staticmethod
    def inverse(x: int) -> int:
        return x ^ 1

    def define(self, c: int, x: int) -> None:
        if len(self.table) >= self.max_cosets:
            raise BudgetExceeded("max_cosets", self.max_cosets, "coset enumeration")
        n = len(self.table)
        self.table.append([None] * self.columns)
        self.parent.append(n)
        self.table[c][x] = n
        self.table[n][self.inverse(x)] = c

    def rep(self, k: int) -> int:
        root = k
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[k] != root:
            self.parent[k], k = root, self.parent[k]
        return root

    def merge(self, a: int, b: int, queue: List[int]) -> None:
        a, b = self.rep(a), self.rep(b)
        if a != b:
            low, high = min(a, b), max(a, b)
            self.parent[high] = low
            queue.append(high)

    def coincidence(self, a: int, b: int) -> None:
        queue: List[int] = []
        self.merge(a, b, queue)
        i = 0
        while i < len(queue):
            dead = queue[i]
            i += 1
            for x in range(self.columns):
                delta = self.table[dead][x]
                if delta is None:
                    continue
                xi = self.inverse(x)
                self.table[delta][xi] = None
                mu, nu = self.rep(dead), self.rep(delta)
                if self.table[mu][x] is not None:
                    self.merge(nu, self.table[mu][x], queue)
                elif self.table[nu][xi] is not None:
                    self.merge(mu, self.table[nu][xi], queue)
                else:
                    self.table[mu][x] = nu
                    self.table[nu][xi] = mu

    def scan_and_fill(self, c: int, word: List[int]) -> None:
        f = b = c
        i, j = 0, len(word) - 1
        table = self.table
        while True:
            while i <= j and table[f][word[i]] is not None:
                f = table[f][word[i]]
                i += 1
            if i > j:
                if f != b:
                    self.coincidence(f, b)
                return
            while j >= i and table[b][self.inverse(word[j])] is not None:
                b = table[b][self.inverse(word[j])]
                j -= 1
            if j < i:
                self.coincidence(f, b)
                return
            if i == j:
                table[f][word[i]] = b
                table[b][self.inverse(word[i])] = f
                return
            self.define(f, word[i])

    def enumerate(self) -> List[List[int]]:
        """Run HLT to completion and return the compacted table."""
        alpha = 0
        while alpha < len(self.table):
            if self.parent[alpha] == alpha:
                for w in self.relators:
                    self.scan_and_fill(alpha, w)
                    if self.parent[alpha] != alpha:
                        break
                if self.parent[alpha] == alpha:
                    for x in range(self.columns):
                        if self.table[alpha][x] is None:
                            self.define(alpha, x)
            alpha += 1
        live = [c for c in range(len(self.table)) if self.parent[c] == c]
        number = {c: i for i, c in enumerate(live)}
        return [[number[self.rep(v)] for v in self.table[c]] for c in live]


def enumerate_cosets(P: GroupPresentation, max_cosets: int) -> List[List[int]]:
    """Coset table of the trivial subgroup; its length is the group order.

    Raises:
        BudgetExceeded: More than ``max_cosets`` cosets were defined
    """
    return CosetTable(P, max_cosets).enumerate()


def verify_coset_table(P: GroupPresentation, table: Sequence[Sequence[int]]) -> bool:
    """Check that a table is a transitive permutation action satisfying every relator."""
    n = len(table)
    columns = 2 * len(P.generators)
    if n == 0 or any(len(row) != columns for row in table):
        return False
    for c, row in enumerate(table):
        for x, v in enumerate(row):
            if not 0 <= v < n or table[v][x ^ 1] != c:
                return False
    index = {g: i for i, g in enumerate(P.generators)}
    for r in P.relators:
        letters = [2 * index[g] + (0 if e == 1 else 1) for g, e in r]
        for c in range(n):
            d = c
            for x in letters:
                d = table[d][x]
            if d != c:
                return False
    seen, frontier = {0}, [0]
    while frontier:
        c = frontier.pop()
        for v in table[c]:
            if v not in seen:
                seen.add(v)
                frontier.append(v)
    return len(seen) == n


# -- finite quotients -------------------------------------------------------------


Perm = Tuple[int, ...]


def _compose(p: Perm, q: Perm) -> Perm:
    return tuple(p[i] for i in q)


def _inverse_perm(p: Perm) -> Perm:
    inv = [0] * len(p)
    for i, v in enumerate(p):
        inv[v] = i
    return tuple(inv)


def _evaluate(word: Word, images: Dict[str, Perm], degree: int) -> Perm:
    result: Perm = tuple(range(degree))
    for gen, exp in word:
        p = images[gen] if exp == 1 else _inverse_perm(images[gen])
        result = _compose(result, p)
    return result


def _cycle_type_representatives(degree: int) -> List[Perm]:
    reps = {}
    for p in itertools.permutations(range(degree)):
        seen, lengths = set(), []
        for i in range(degree):
            if i not in seen:
                k, j = 0, i
                while j not in seen:
                    seen.add(j)
                    j = p[j]
                    k += 1
                lengths.append(k)
        reps.setdefault(tuple(sorted(lengths)), p)
    return [reps[k] for k in sorted(reps)]


def _transitive(images: Dict[str, Perm], degree: int) -> bool:
    seen, frontier = {0}, [0]
    while frontier:
        i = frontier.pop()
        for p in images.values():
            for j in (p[i], _inverse_perm(p)[i]):
                if j not in seen:
                    seen.add(j)
                    frontier.append(j)
    return len(seen) == degree


def find_permutation_quotient(P: GroupPresentation, max_degree: int, max_checks: int) -> Optional[Dict[str, Any]]:
    """Search homomorphisms onto transitive subgroups of S_n, 2 <= n <= max_degree.

    Raises:
        BudgetExceeded: More than ``max_checks`` partial assignments tested
    """
    gens = list(P.generators)
    if not gens:
        return None
    # relators become checkable once their last generator (in order) is assigned
    position = {g: i for i, g in enumerate(gens)}
    ready: Dict[int, List[Word]] = {}
    for r in P.relators:
        ready.setdefault(max(position[g] for g, _ in r), []).append(r)
    checks = 0
    for degree in range(2, max_degree + 1):
        everything = list(itertools.permutations(range(degree)))
        firsts = _cycle_type_representatives(degree)
        identity = tuple(range(degree))
        images: Dict[str, Perm] = {}

        def extend(i: int) -> Optional[Dict[str, Perm]]:
            nonlocal checks
            if i == len(gens):
                return dict(images) if _transitive(images, degree) else None
            for p in firsts if i == 0 else everything:
                checks += 1
                if checks > max_checks:
                    raise BudgetExceeded("quotient_checks", max_checks, "permutation quotient search")
                images[gens[i]] = p
                if all(_evaluate(r, images, degree) == identity for r in ready.get(i, [])):
                    found = extend(i + 1)
                    if found is not None:
                        return found
            images.pop(gens[i], None)
            return None

        found = extend(0)
        if found is not None:
            return {"degree": degree, "images": {g: list(p) for g, p in found.items()}}
    return None


def verify_permutation_quotient(P: GroupPresentation, certificate: Dict[str, Any]) -> bool:
    degree = certificate["degree"]
    images = {g: tuple(p) for g, p in certificate["images"].items()}
    if set(images) != set(P.generators) or degree < 2:
        return False
    if any(sorted(p) != list(range(degree)) for p in images.values()):
        return False
    identity = tuple(range(degree))
    return all(_evaluate(r, images, degree) == identity for r in P.relators) and _transitive(images, degree)


# -- pipeline ---------------------------------------------------------------------


def decide_triviality(P: GroupPresentation, budgets: Optional[Budgets] = None) -> Pi1Verdict:
    """Decide whether the presented group is trivial, within budgets.

    Budget exhaustion never produces a wrong verdict: it falls through to
    the next stage and finally to Unknown.
    """
    budgets = budgets or Budgets()
    simplified, eliminations = tietze_simplify(P)
    if not simplified.generators:
        return Pi1Verdict(TRIVIAL, {"method": "tietze", "eliminations": eliminations})

    rank, torsion = abelian_invariants(simplified)
    if rank or torsion:
        return Pi1Verdict(
            NONTRIVIAL,
            {
                "method": "abelianisation",
                "presentation": simplified.to_dict(),
                "free_rank": rank,
                "torsion": torsion,
            },
        )

    reasons = []
    try:
        table = enumerate_cosets(simplified, budgets.max_cosets)
    except BudgetExceeded as e:
        logger.warning("coset enumeration gave up: %s", e)
        reasons.append(str(e))
    else:
        certificate = {"method": "coset-enumeration", "presentation": simplified.to_dict(), "index": len(table)}
        if len(table) == 1:
            return Pi1Verdict(TRIVIAL, certificate)
        certificate["table"] = table
        return Pi1Verdict(NONTRIVIAL, certificate)

    try:
        quotient = find_permutation_quotient(simplified, budgets.quotient_degree, budgets.quotient_checks)
    except BudgetExceeded as e:
        logger.warning("quotient search gave up: %s", e)
        reasons.append(str(e))
    else:
        if quotient is not None:
            return Pi1Verdict(NONTRIVIAL, {"method": "quotient", "presentation": simplified.to_dict(), **quotient})
        reasons.append(f"no transitive quotient of degree <= {budgets.quotient_degree}")
    return Pi1Verdict(UNKNOWN, reason="; ".join(reasons))


def verify_certificate(P: GroupPresentation, verdict: Pi1Verdict, budgets: Optional[Budgets] = None) -> bool:
    """Replay the certificate of a Trivial or Nontrivial verdict against P."""
    budgets = budgets or Budgets()
    cert = verdict.certificate
    method = cert.get("method")
    if verdict.status == UNKNOWN:
        return not cert
    simplified, eliminations = tietze_simplify(P)
    if method == "tietze":
        return verdict.status == TRIVIAL and not simplified.generators and eliminations == cert["eliminations"]
    if method == "abelianisation":
        rank, torsion = abelian_invariants(simplified)
        return verdict.status == NONTRIVIAL and (rank, torsion) == (cert["free_rank"], cert["torsion"]) and bool(
            rank or torsion
        )
    if method == "coset-enumeration":
        if verdict.status == NONTRIVIAL:
            return verify_coset_table(simplified, cert["table"]) and len(cert["table"]) > 1
        try:
            return len(enumerate_cosets(simplified, budgets.max_cosets)) == 1
        except BudgetExceeded:
            return False
    if method == "quotient":
        return verdict.status == NONTRIVIAL and verify_permutation_quotient(simplified, cert)
    return False
