"""Indexed triple store with inverse enhancement and conjunctive pattern matching.

Edges are (subject, predicate, object) triplets carrying provenance śloka ids
and a direct/inferred origin. Three index permutations (SPO, POS, OSP) back a
backtracking matcher for conjunctive patterns whose slots may be variables,
written with a leading "?" (e.g. ["अर्जुन", "पुत्र", "?ans"]).
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, NamedTuple

from .corpus import Corpus
from .errors import ParseError, ValidationError
from .extraction import Triplet
from .lexicon import RelationLexicon


class TriplePattern(NamedTuple):
    """One conjunct; a slot starting with '?' is a variable."""

    subject: str
    predicate: str
    object: str

    @staticmethod
    def is_variable(slot: str) -> bool:
        return slot.startswith("?")

    def variables(self) -> tuple[str, ...]:
        return tuple(s[1:] for s in self if TriplePattern.is_variable(s))


@dataclass(frozen=True)
class EntityGender:
    entity: str
    gender: str  # m | f | n | unknown
    evidence: tuple[tuple[str, int], ...] = ()


class KnowledgeGraph:
    """Immutable-by-convention triple store; mutate only through add()."""

    def __init__(self, triplets: Iterable[Triplet] = ()) -> None:
        self._edges: dict[tuple[str, str, str], Triplet] = {}
        self._spo: dict[str, dict[str, set[str]]] = {}
        self._pos: dict[str, dict[str, set[str]]] = {}
        self._osp: dict[str, dict[str, set[str]]] = {}
        for t in triplets:
            self.add(t)

    def add(self, triplet: Triplet) -> None:
        key = triplet.key()
        existing = self._edges.get(key)
        if existing is not None:
            origin = "direct" if "direct" in (existing.origin, triplet.origin) else "inferred"
            triplet = Triplet(
                *key, existing.provenance | triplet.provenance, origin
            )
        self._edges[key] = triplet
        s, p, o = key
        self._spo.setdefault(s, {}).setdefault(p, set()).add(o)
        self._pos.setdefault(p, {}).setdefault(o, set()).add(s)
        self._osp.setdefault(o, {}).setdefault(s, set()).add(p)

    @property
    def edges(self) -> tuple[Triplet, ...]:
        return tuple(self._edges[k] for k in sorted(self._edges))

    @property
    def entities(self) -> frozenset[str]:
        return frozenset(k[0] for k in self._edges) | frozenset(k[2] for k in self._edges)

    @property
    def predicates(self) -> frozenset[str]:
        return frozenset(k[1] for k in self._edges)

    def __len__(self) -> int:
        return len(self._edges)

    def __contains__(self, key: tuple[str, str, str]) -> bool:
        return tuple(key) in self._edges

    def get(self, subject: str, predicate: str, object: str) -> Triplet | None:
        return self._edges.get((subject, predicate, object))

    def objects(self, subject: str, predicate: str) -> frozenset[str]:
        return frozenset(self._spo.get(subject, {}).get(predicate, ()))

    def predicates_between(self, subject: str, object: str) -> frozenset[str]:
        return frozenset(self._osp.get(object, {}).get(subject, ()))

    def _candidates(self, pattern: TriplePattern, binding: dict[str, str]):
        """Yield (s, p, o) edges consistent with the pattern under the binding."""

        def resolve(slot: str) -> str | None:
            if TriplePattern.is_variable(slot):
                return binding.get(slot[1:])
            return slot

        s, p, o = resolve(pattern.subject), resolve(pattern.predicate), resolve(pattern.object)
        if s is not None and p is not None and o is not None:
            if (s, p, o) in self._edges:
                yield (s, p, o)
            return
        if s is not None:
            for p2, objs in self._spo.get(s, {}).items():
                if p is not None and p2 != p:
                    continue
                for o2 in objs:
                    if o is None or o2 == o:
                        yield (s, p2, o2)
            return
        if p is not None:
            for o2, subjs in self._pos.get(p, {}).items():
                if o is not None and o2 != o:
                    continue
                for s2 in subjs:
                    yield (s2, p, o2)
            return
        if o is not None:
            for s2, preds in self._osp.get(o, {}).items():
                for p2 in preds:
                    yield (s2, p2, o)
            return
        yield from self._edges

    def match_pattern(self, patterns: list[TriplePattern]) -> list[dict[str, str]]:
        """All variable bindings satisfying every pattern (natural join).

        Output is deduplicated and sorted by the bound values of the sorted
        variable names, so repeated calls are byte-stable. An empty pattern
        list is the vacuous conjunction: one empty binding.
        """
        patterns = [TriplePattern(*p) for p in patterns]

        def selectivity(p: TriplePattern) -> int:
            return sum(0 if TriplePattern.is_variable(s) else 1 for s in p)

        order = sorted(range(len(patterns)), key=lambda i: (-selectivity(patterns[i]), i))
        results: list[dict[str, str]] = []

        def backtrack(step: int, binding: dict[str, str]) -> None:
            if step == len(order):
                results.append(dict(binding))
                return
            pattern = patterns[order[step]]
            for s, p, o in self._candidates(pattern, binding):
                trial = dict(binding)
                ok = True
                for slot, value in zip(pattern, (s, p, o)):
                    if not TriplePattern.is_variable(slot):
                        continue
                    name = slot[1:]
                    bound = trial.get(name)
                    if bound is None:
                        trial[name] = value
                    elif bound != value:
                        ok = False
                        break
                if ok:
                    backtrack(step + 1, trial)

        backtrack(0, {})
        unique = {frozenset(b.items()): b for b in results}
        return sorted(unique.values(), key=lambda b: tuple(b[k] for k in sorted(b)))


def build_kg(triplets: Iterable[Triplet]) -> KnowledgeGraph:
    return KnowledgeGraph(triplets)


def match_pattern(kg: KnowledgeGraph, patterns: list[TriplePattern]) -> list[dict[str, str]]:
    return kg.match_pattern(patterns)


def infer_entity_genders(corpus: Corpus, kg: KnowledgeGraph) -> dict[str, EntityGender]:
    """Majority-vote gender per KG entity over its noun occurrences in the corpus.

    A gender wins only with a strict majority of the gendered occurrences;
    ties and absent entities come out unknown.
    """
    counts: dict[str, dict[str, int]] = {}
    entities = kg.entities
    for _, tok in corpus.iter_tokens():
        if tok.pos != "noun" or tok.morph.gender is None or tok.root not in entities:
            continue
        per = counts.setdefault(tok.root, {})
        per[tok.morph.gender] = per.get(tok.morph.gender, 0) + 1
    out: dict[str, EntityGender] = {}
    for entity in sorted(entities):
        per = counts.get(entity, {})
        total = sum(per.values())
        gender = "unknown"
        for g, n in per.items():
            if n * 2 > total:
                gender = g
                break
        out[entity] = EntityGender(entity, gender, tuple(sorted(per.items())))
    return out


def enhance_with_inverses(
    kg: KnowledgeGraph,
    lex: RelationLexicon,
    genders: dict[str, EntityGender],
) -> KnowledgeGraph:
    """Add inferred reverse edges for every direct edge whose relation has inverse rules.

    For a direct edge (a, R, b), each reverse relation R' of R toward a's
    gender yields an inferred (b, R', a) unless that exact edge already exists
    as direct, or some direct (b, R'', a) is mutually exclusive with R'.
    Direct edges are copied unchanged; only direct edges justify additions,
    which makes the operation idempotent.
    """
    out = KnowledgeGraph(kg.edges)
    for edge in kg.edges:
        if edge.origin != "direct":
            continue
        if lex.entry_or_none(edge.predicate) is None:
            continue
        info = genders.get(edge.subject)
        gender = info.gender if info is not None else "unknown"
        for inverse in lex.inverses_of(edge.predicate, gender):
            reverse_key = (edge.object, inverse, edge.subject)
            existing = kg.get(*reverse_key)
            if existing is not None and existing.origin == "direct":
                continue
            blocked = False
            for other in kg.predicates_between(edge.object, edge.subject):
                direct = kg.get(edge.object, other, edge.subject)
                if (
                    direct is not None
                    and direct.origin == "direct"
                    and lex.are_mutually_exclusive(other, inverse)
                ):
                    blocked = True
                    break
            if not blocked:
                out.add(Triplet(*reverse_key, edge.provenance, "inferred"))
    return out


def serialize_kg(kg: KnowledgeGraph) -> str:
    """Render a KG as tab-separated lines sorted by (subject, predicate, object)."""
    lines = []
    for edge in kg.edges:
        prov = ",".join(sorted(edge.provenance))
        lines.append(f"{edge.subject}\t{edge.predicate}\t{edge.object}\t{edge.origin}\t{prov}")
    return "".join(line + "\n" for line in lines)


def save_kg(kg: KnowledgeGraph, path: str | Path) -> None:
    Path(path).write_text(serialize_kg(kg), encoding="utf-8")


def deserialize_kg(text: str, *, source: str = "kg") -> KnowledgeGraph:
    kg = KnowledgeGraph()
    for lineno, line in enumerate(text.splitlines(), start=1):
        if not line.strip():
            continue
        parts = line.split("\t")
        if len(parts) != 5:
            raise ParseError(f"{source}:{lineno}: expected 5 tab-separated fields, got {len(parts)}")
        s, p, o, origin, prov = parts
        if origin not in ("direct", "inferred"):
            raise ParseError(f"{source}:{lineno}: bad origin {origin!r}")
        provenance = frozenset(x for x in prov.split(",") if x)
        try:
            kg.add(Triplet(s, p, o, provenance, origin))
        except ValidationError as exc:
            raise ParseError(f"{source}:{lineno}: {exc}") from exc
    return kg


def load_kg(path: str | Path) -> KnowledgeGraph:
    path = Path(path)
    return deserialize_kg(path.read_text(encoding="utf-8"), source=str(path))
