"""Triplet extraction from annotated ślokas.

A relation word found in a śloka becomes a predicate. Its subjects are
genitive nouns near it; its objects are nouns whose case and gender agree
with the predicate token. Relation words themselves are never candidates
for either role, and pronouns are expected to have been reclassified away
from pos=noun before extraction runs. "Near" means
within a window of w ślokas on either side, clamped to the predicate's
document. Four agreement filters of increasing strictness control which
subject/object candidates count:

    1  subject anywhere, object anywhere, number agreement not required
    2  subject anywhere, object anywhere, object number must match
    3  subject before the predicate, object after it, number must match
    4  subject after the predicate, object before it, number must match

Every extracted triplet records the id of the śloka the predicate token
occurred in.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .corpus import GENITIVE, AnnotatedToken, Corpus
from .errors import ValidationError
from .lexicon import RelationLexicon


@dataclass(frozen=True)
class FilterSpec:
    """Positional and agreement constraints for one extraction filter."""

    id: int
    subject_position: str  # "either" | "before" | "after"
    object_position: str
    object_number_must_match: bool


FILTERS: dict[int, FilterSpec] = {
    1: FilterSpec(1, "either", "either", False),
    2: FilterSpec(2, "either", "either", True),
    3: FilterSpec(3, "before", "after", True),
    4: FilterSpec(4, "after", "before", True),
}


@dataclass(frozen=True)
class Triplet:
    subject: str
    predicate: str
    object: str
    provenance: frozenset[str] = field(default_factory=frozenset)
    origin: str = "direct"

    def __post_init__(self) -> None:
        if self.subject == self.object:
            raise ValidationError(
                f"degenerate triplet: subject and object are both {self.subject!r}"
            )
        if self.origin not in ("direct", "inferred"):
            raise ValidationError(f"origin must be 'direct' or 'inferred', got {self.origin!r}")

    def key(self) -> tuple[str, str, str]:
        return (self.subject, self.predicate, self.object)


def resolve_filter(filter_spec: int | FilterSpec) -> FilterSpec:
    if isinstance(filter_spec, FilterSpec):
        return filter_spec
    if filter_spec not in FILTERS:
        raise ValidationError(f"unknown extraction filter {filter_spec!r}; expected 1..4")
    return FILTERS[filter_spec]


def find_predicates(tokens: list[AnnotatedToken], lex: RelationLexicon) -> list[tuple[int, str]]:
    """Indices and canonical roots of relation-word nouns in a token list."""
    out = []
    for i, tok in enumerate(tokens):
        if tok.pos != "noun":
            continue
        canonical = lex.canonicalize(tok.root)
        if canonical is not None:
            out.append((i, canonical))
    return out


def context_window(corpus: Corpus, index: int, window: int = 1) -> list[tuple[str, AnnotatedToken]]:
    """Tokens of ślokas index-window .. index+window, clamped to the śloka's doc.

    Returned in textual order as (sloka_id, token) pairs so positions within
    the window are comparable.
    """
    if window < 0:
        raise ValidationError(f"window must be >= 0, got {window}")
    doc, pos = corpus.doc_position(index)
    doc_indices = corpus.doc_indices(doc)
    lo = max(0, pos - window)
    hi = min(len(doc_indices) - 1, pos + window)
    out = []
    for i in doc_indices[lo : hi + 1]:
        sloka = corpus.slokas[i]
        for tok in sloka.tokens:
            out.append((sloka.sloka_id, tok))
    return out


def _is_subject_candidate(tok: AnnotatedToken, lex: RelationLexicon) -> bool:
    return (
        tok.pos == "noun"
        and tok.morph.case == GENITIVE
        and not lex.is_relation_word(tok.root)
    )


def _is_object_candidate(
    tok: AnnotatedToken, pred: AnnotatedToken, spec: FilterSpec, lex: RelationLexicon
) -> bool:
    if tok.pos != "noun":
        return False
    if lex.is_relation_word(tok.root):
        return False
    if tok.morph.case is None or tok.morph.case != pred.morph.case:
        return False
    if tok.morph.gender is None or pred.morph.gender is None:
        return False
    if tok.morph.gender != pred.morph.gender:
        return False
    if spec.object_number_must_match:
        if tok.morph.number is None or pred.morph.number is None:
            return False
        if tok.morph.number != pred.morph.number:
            return False
    return True


def _position_ok(candidate_pos: int, predicate_pos: int, constraint: str) -> bool:
    if constraint == "either":
        return candidate_pos != predicate_pos
    if constraint == "before":
        return candidate_pos < predicate_pos
    if constraint == "after":
        return candidate_pos > predicate_pos
    raise ValidationError(f"bad position constraint {constraint!r}")


def extract_triplets(
    corpus: Corpus,
    lex: RelationLexicon,
    filter_spec: int | FilterSpec = 2,
    window: int = 1,
) -> list[Triplet]:
    """Extract all (subject, relation, object) triplets from a corpus.

    Duplicate (s, p, o) keys are merged; their provenance sets are unioned.
    The result is sorted by (subject, predicate, object).
    """
    spec = resolve_filter(filter_spec)
    merged: dict[tuple[str, str, str], set[str]] = {}
    for index, sloka in enumerate(corpus.slokas):
        preds = find_predicates(sloka.tokens, lex)
        if not preds:
            continue
        ctx = context_window(corpus, index, window)
        # locate this śloka's tokens inside the window so token positions align
        offset = next(i for i, (sid, _) in enumerate(ctx) if sid == sloka.sloka_id)
        for local_idx, canonical in preds:
            pred_tok = sloka.tokens[local_idx]
            pred_pos = offset + local_idx
            subjects = {
                tok.root
                for i, (_, tok) in enumerate(ctx)
                if _position_ok(i, pred_pos, spec.subject_position)
                and _is_subject_candidate(tok, lex)
            }
            objects = {
                tok.root
                for i, (_, tok) in enumerate(ctx)
                if _position_ok(i, pred_pos, spec.object_position)
                and _is_object_candidate(tok, pred_tok, spec, lex)
            }
            for subj in subjects:
                for obj in objects:
                    if subj == obj:
                        continue
                    merged.setdefault((subj, canonical, obj), set()).add(sloka.sloka_id)
    return [
        Triplet(s, p, o, frozenset(prov))
        for (s, p, o), prov in sorted(merged.items())
    ]
