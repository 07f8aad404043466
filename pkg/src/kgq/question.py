"""Question parsing, alternate-pattern expansion, and answering.

Questions arrive as annotated token lists (same format as corpus tokens,
pre-processed the same way: pronouns reclassified, compounds normalized).
Parsing compiles them into a chain of query triplets whose slots are
constants or variables; chain variables are named x1, x2, ... in order of
introduction and the answer variable is always named ``ans``, so two
structurally identical questions compare equal.

A parsed question is then widened into alternate conjunctive patterns by
replacing relation predicates with their decomposition chains (fresh
intermediate variables y1, y2, ...); all alternates are posed to the KG and
the answer bindings are merged with per-value multiplicity.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product

from .corpus import GENITIVE, AnnotatedToken, normalize_token_compounds
from .errors import UnparsableQuestion
from .kg import KnowledgeGraph, TriplePattern
from .lexicon import RelationLexicon

MAX_QUESTION_TOKENS = 32

ANSWER_VAR = "ans"

_MARRIAGE_TRIGGER = "विवाह"
_MARRIAGE_TAIL = "सह"
_HUSBAND = "पति"
_WIFE = "पत्नी"
_INSTRUMENTAL = 3


@dataclass(frozen=True)
class QueryTerm:
    kind: str  # constant | variable | answer
    value: str

    def __post_init__(self) -> None:
        if self.kind not in ("constant", "variable", "answer"):
            raise ValueError(f"bad QueryTerm kind {self.kind!r}")

    def slot(self) -> str:
        """Render for a TriplePattern: variables get a '?' prefix."""
        if self.kind == "constant":
            return self.value
        return "?" + self.value


def constant(value: str) -> QueryTerm:
    return QueryTerm("constant", value)


def variable(name: str) -> QueryTerm:
    return QueryTerm("variable", name)


ANSWER = QueryTerm("answer", ANSWER_VAR)

QueryTriplet = tuple[QueryTerm, QueryTerm, QueryTerm]


@dataclass(frozen=True)
class ParsedQuestion:
    triplets: tuple[QueryTriplet, ...]
    answer_var: str = ANSWER_VAR

    def to_patterns(self) -> list[TriplePattern]:
        return [TriplePattern(s.slot(), p.slot(), o.slot()) for s, p, o in self.triplets]


@dataclass(frozen=True)
class AlternatePatterns:
    patterns: tuple[tuple[TriplePattern, ...], ...]

    def __len__(self) -> int:
        return len(self.patterns)


@dataclass(frozen=True)
class AnswerSet:
    """Merged answers across all alternate patterns.

    ``answers`` pairs each distinct value with the number of bindings that
    produced it; empty means the KG had no answer.
    """

    answers: tuple[tuple[str, int], ...]
    patterns_tried: int

    @property
    def is_no_answer(self) -> bool:
        return not self.answers

    def values(self) -> tuple[str, ...]:
        return tuple(v for v, _ in self.answers)

    def as_dict(self) -> dict:
        return {
            "answers": [{"value": v, "multiplicity": m} for v, m in self.answers],
            "patterns_tried": self.patterns_tried,
        }


def prepare_question_tokens(
    tokens: list[AnnotatedToken], lex: RelationLexicon
) -> list[AnnotatedToken]:
    """Apply the same pre-processing questions get as corpus text."""
    from dataclasses import replace

    out = [
        replace(t, pos="pronoun") if t.root in lex.pronouns else t
        for t in tokens
    ]
    return normalize_token_compounds(out)


def _match_marriage_idiom(
    tokens: list[AnnotatedToken], lex: RelationLexicon
) -> AnnotatedToken | None:
    """Return the instrumental interrogative token if the marriage idiom matches.

    The trigger is the ordered subsequence: a विवाह token, then an
    instrumental-case interrogative, then सह. Other tokens may intervene.
    """
    stage = 0
    hit = None
    for tok in tokens:
        if stage == 0 and tok.root == _MARRIAGE_TRIGGER:
            stage = 1
        elif (
            stage == 1
            and tok.root in lex.interrogatives
            and tok.morph.case == _INSTRUMENTAL
        ):
            hit = tok
            stage = 2
        elif stage == 2 and tok.root == _MARRIAGE_TAIL:
            return hit
    return None


@dataclass
class _Scan:
    subject_nouns: list[str] = field(default_factory=list)     # genitive, non-relation
    loose_nouns: list[str] = field(default_factory=list)       # other cases, non-relation
    chain_relations: list[str] = field(default_factory=list)   # genitive relation words
    final_relation: str | None = None
    interrogatives: list[AnnotatedToken] = field(default_factory=list)


def _scan_tokens(tokens: list[AnnotatedToken], lex: RelationLexicon) -> _Scan:
    scan = _Scan()
    for tok in tokens:
        # किम् sits in both the pronoun and the interrogative sets; the
        # interrogative reading must win.
        if tok.root in lex.interrogatives:
            scan.interrogatives.append(tok)
            continue
        if tok.pos == "pronoun" or tok.root in lex.pronouns:
            continue
        canonical = lex.canonicalize(tok.root)
        if canonical is not None and tok.pos == "noun":
            if tok.morph.case == GENITIVE:
                scan.chain_relations.append(canonical)
            elif scan.final_relation is None:
                scan.final_relation = canonical
            continue
        if tok.pos == "noun":
            if tok.morph.case == GENITIVE:
                scan.subject_nouns.append(tok.root)
            else:
                scan.loose_nouns.append(tok.root)
    return scan


def parse_question(tokens: list[AnnotatedToken], lex: RelationLexicon) -> ParsedQuestion:
    """Compile an annotated question into chained query triplets.

    Raises UnparsableQuestion when the tokens do not fit the supported
    factoid shapes.
    """
    if len(tokens) > MAX_QUESTION_TOKENS:
        raise UnparsableQuestion(
            f"question has {len(tokens)} tokens; at most {MAX_QUESTION_TOKENS} supported"
        )
    scan = _scan_tokens(tokens, lex)

    marriage = _match_marriage_idiom(tokens, lex)
    if marriage is not None:
        if not scan.subject_nouns:
            raise UnparsableQuestion("marriage question without a genitive subject")
        predicate = _HUSBAND if marriage.morph.gender == "m" else _WIFE
        return ParsedQuestion(
            ((constant(scan.subject_nouns[0]), constant(predicate), ANSWER),)
        )

    if not scan.interrogatives:
        raise UnparsableQuestion("no interrogative word found")
    if len(scan.interrogatives) > 1:
        raise UnparsableQuestion("more than one interrogative word found")
    interrogative = scan.interrogatives[0]
    ans_is_subject = interrogative.morph.case == GENITIVE

    has_relation = bool(scan.chain_relations) or scan.final_relation is not None
    if not has_relation:
        # Relation-seeking phrasing: X is Y's what. Needs exactly one
        # genitive constant, one loose constant, and the interrogative.
        if (
            len(scan.subject_nouns) == 1
            and len(scan.loose_nouns) == 1
            and not ans_is_subject
        ):
            return ParsedQuestion(
                ((constant(scan.subject_nouns[0]), ANSWER, constant(scan.loose_nouns[0])),)
            )
        raise UnparsableQuestion("question contains no relation word")

    if ans_is_subject:
        subject: QueryTerm = ANSWER
    elif scan.subject_nouns:
        subject = constant(scan.subject_nouns[0])
    else:
        raise UnparsableQuestion("question has no subject")

    if ans_is_subject:
        if not scan.loose_nouns:
            raise UnparsableQuestion("genitive interrogative without an object noun")
        final_object: QueryTerm = constant(scan.loose_nouns[0])
    else:
        final_object = ANSWER

    triplets: list[QueryTriplet] = []
    var_count = 0
    current_subject = subject
    for relation in scan.chain_relations:
        var_count += 1
        link = variable(f"x{var_count}")
        triplets.append((current_subject, constant(relation), link))
        current_subject = link
    if scan.final_relation is not None:
        triplets.append((current_subject, constant(scan.final_relation), final_object))
    else:
        # chain ended on a genitive relation word: its open slot is the answer
        last_subject, last_predicate, _ = triplets[-1]
        triplets[-1] = (last_subject, last_predicate, final_object)
    return ParsedQuestion(tuple(triplets))


def enhance_query(q: ParsedQuestion, lex: RelationLexicon) -> AlternatePatterns:
    """Expand a parsed question into its alternate conjunctive patterns.

    Each triplet's enhanced set is the original plus one expansion per
    decomposition chain of its predicate, with fresh intermediate variables
    y1, y2, ... numbered across the whole question in declaration order. The
    alternates are the Cartesian product of the enhanced sets, originals
    first, so the first alternate is always the unexpanded question.
    """
    enhanced_sets: list[list[tuple[TriplePattern, ...]]] = []
    fresh = 0
    for s, p, o in q.triplets:
        original = TriplePattern(s.slot(), p.slot(), o.slot())
        options: list[tuple[TriplePattern, ...]] = [(original,)]
        if p.kind == "constant":
            entry = lex.entry_or_none(p.value)
            chains = entry.decompositions if entry is not None else ()
            for chain in chains:
                expansion = []
                current = s.slot()
                for step in chain[:-1]:
                    fresh += 1
                    link = f"?y{fresh}"
                    expansion.append(TriplePattern(current, step, link))
                    current = link
                expansion.append(TriplePattern(current, chain[-1], o.slot()))
                options.append(tuple(expansion))
        enhanced_sets.append(options)
    alternates = tuple(
        tuple(pattern for part in combo for pattern in part)
        for combo in product(*enhanced_sets)
    )
    return AlternatePatterns(alternates)


def answer_question(
    kg: KnowledgeGraph, q: ParsedQuestion, lex: RelationLexicon
) -> AnswerSet:
    """Pose every alternate pattern to the KG and merge the answer bindings.

    Each binding of the answer variable counts once toward its value's
    multiplicity, across all alternates. No binding anywhere means the KG
    cannot answer the question.
    """
    alternates = enhance_query(q, lex)
    counts: dict[str, int] = {}
    for patterns in alternates.patterns:
        for binding in kg.match_pattern(list(patterns)):
            value = binding.get(q.answer_var)
            if value is not None:
                counts[value] = counts.get(value, 0) + 1
    answers = tuple(sorted(counts.items()))
    return AnswerSet(answers=answers, patterns_tried=len(alternates))
