"""Corpus model and loading for morphologically annotated śloka collections.

A corpus is stored as JSONL, one śloka per line:

    {"sloka_id": "mbh-adi-67-25", "chapter": "adi-67", "doc": "mbh-adi-67",
     "text": "...", "tokens": [{"surface": "...", "root": "...", "pos": "noun",
     "case": 6, "number": "sg", "gender": "m", "compound": null}, ...]}

Roots are opaque UTF-8 strings; no transliteration or sandhi handling happens
here. ``case`` is 1..8 (1 nominative, 2 accusative, 3 instrumental, 4 dative,
5 ablative, 6 genitive, 7 locative, 8 vocative). ``number`` is sg/du/pl and
``gender`` is m/f/n; any of them may be null when the analyser did not emit
the field. ``compound`` groups tokens that were split out of one compound.
"""

from __future__ import annotations

import json
import warnings
from collections import Counter
from dataclasses import dataclass, field, replace
from pathlib import Path

from .errors import ParseError, ValidationError

POS_TAGS = (
    "noun",
    "verb",
    "pronoun",
    "adverb",
    "conjunction",
    "preposition",
    "particle",
    "interjection",
    "other",
)

# These parts of speech never carry a nominal case.
CASELESS_POS = frozenset({"verb", "conjunction", "preposition", "particle"})

NUMBERS = ("sg", "du", "pl")
GENDERS = ("m", "f", "n")

GENITIVE = 6

_SLOKA_FIELDS = ("sloka_id", "chapter", "doc", "text", "tokens")
_TOKEN_FIELDS = ("surface", "root", "pos", "case", "number", "gender", "compound")
_TOKEN_REQUIRED = ("surface", "root", "pos")


@dataclass(frozen=True)
class MorphTag:
    """Nominal morphology of one token; every field may be absent."""

    case: int | None = None
    number: str | None = None
    gender: str | None = None

    def __post_init__(self) -> None:
        if self.case is not None and (not isinstance(self.case, int) or not 1 <= self.case <= 8):
            raise ValidationError(f"field 'case' must be an integer in 1..8 or null, got {self.case!r}")
        if self.number is not None and self.number not in NUMBERS:
            raise ValidationError(f"field 'number' must be one of {NUMBERS} or null, got {self.number!r}")
        if self.gender is not None and self.gender not in GENDERS:
            raise ValidationError(f"field 'gender' must be one of {GENDERS} or null, got {self.gender!r}")


@dataclass(frozen=True)
class AnnotatedToken:
    """One analysed surface word."""

    surface: str
    root: str
    pos: str
    morph: MorphTag = MorphTag()
    compound_group: int | None = None

    def __post_init__(self) -> None:
        if not self.root:
            raise ValidationError("field 'root' must be a non-empty string")
        if self.pos not in POS_TAGS:
            raise ValidationError(f"field 'pos' must be one of {POS_TAGS}, got {self.pos!r}")
        if self.pos in CASELESS_POS and self.morph.case is not None:
            raise ValidationError(f"field 'case' must be null for pos={self.pos!r}")


@dataclass
class Sloka:
    """One śloka with its analysed tokens, in textual order."""

    sloka_id: str
    chapter: str
    doc: str
    text: str
    tokens: list[AnnotatedToken]


@dataclass
class Corpus:
    """An ordered collection of ślokas grouped by document."""

    slokas: list[Sloka]
    _doc_indices: dict[str, list[int]] = field(init=False, repr=False)
    _pos_in_doc: list[int] = field(init=False, repr=False)

    def __post_init__(self) -> None:
        seen: set[str] = set()
        self._doc_indices = {}
        self._pos_in_doc = []
        for i, sloka in enumerate(self.slokas):
            if sloka.sloka_id in seen:
                raise ValidationError(f"duplicate sloka_id {sloka.sloka_id!r}")
            seen.add(sloka.sloka_id)
            bucket = self._doc_indices.setdefault(sloka.doc, [])
            self._pos_in_doc.append(len(bucket))
            bucket.append(i)

    def __len__(self) -> int:
        return len(self.slokas)

    def doc_position(self, index: int) -> tuple[str, int]:
        """Return (doc, position of the śloka inside that doc)."""
        sloka = self.slokas[index]
        return sloka.doc, self._pos_in_doc[index]

    def doc_indices(self, doc: str) -> list[int]:
        return list(self._doc_indices.get(doc, ()))

    def iter_tokens(self):
        for sloka in self.slokas:
            for token in sloka.tokens:
                yield sloka, token


@dataclass(frozen=True)
class CorpusStats:
    docs: int
    slokas: int
    words_total: int
    words_unique: int
    nouns_total: int
    nouns_unique: int

    def as_dict(self) -> dict:
        return {
            "docs": self.docs,
            "slokas": self.slokas,
            "words_total": self.words_total,
            "words_unique": self.words_unique,
            "nouns_total": self.nouns_total,
            "nouns_unique": self.nouns_unique,
        }


def token_from_json(obj: object, *, strict: bool = True, where: str = "token") -> AnnotatedToken:
    """Build an AnnotatedToken from one JSON object.

    In strict mode unknown keys are rejected; in lenient mode they are ignored.
    """
    if not isinstance(obj, dict):
        raise ValidationError(f"{where}: expected an object, got {type(obj).__name__}")
    if strict:
        unknown = sorted(set(obj) - set(_TOKEN_FIELDS))
        if unknown:
            raise ValidationError(f"{where}: unknown field(s) {', '.join(map(repr, unknown))}")
    for name in _TOKEN_REQUIRED:
        if not isinstance(obj.get(name), str):
            raise ValidationError(f"{where}: field {name!r} must be a string")
    compound = obj.get("compound")
    if compound is not None and not isinstance(compound, int):
        raise ValidationError(f"{where}: field 'compound' must be an integer or null")
    morph = MorphTag(case=obj.get("case"), number=obj.get("number"), gender=obj.get("gender"))
    return AnnotatedToken(
        surface=obj["surface"],
        root=obj["root"],
        pos=obj["pos"],
        morph=morph,
        compound_group=compound,
    )


def _sloka_from_json(obj: object, *, strict: bool, where: str) -> Sloka:
    if not isinstance(obj, dict):
        raise ValidationError(f"{where}: expected an object, got {type(obj).__name__}")
    if strict:
        unknown = sorted(set(obj) - set(_SLOKA_FIELDS))
        if unknown:
            raise ValidationError(f"{where}: unknown field(s) {', '.join(map(repr, unknown))}")
    for name in ("sloka_id", "chapter", "doc", "text"):
        if not isinstance(obj.get(name), str):
            raise ValidationError(f"{where}: field {name!r} must be a string")
    tokens = obj.get("tokens")
    if not isinstance(tokens, list):
        raise ValidationError(f"{where}: field 'tokens' must be a list")
    parsed = [
        token_from_json(tok, strict=strict, where=f"{where}: token {i}")
        for i, tok in enumerate(tokens)
    ]
    return Sloka(
        sloka_id=obj["sloka_id"],
        chapter=obj["chapter"],
        doc=obj["doc"],
        text=obj["text"],
        tokens=parsed,
    )


def load_corpus(path: str | Path, *, strict: bool = True) -> Corpus:
    """Load a JSONL corpus file. Blank lines are skipped."""
    path = Path(path)
    slokas: list[Sloka] = []
    for lineno, line in enumerate(path.read_text(encoding="utf-8").splitlines(), start=1):
        if not line.strip():
            continue
        try:
            record = json.loads(line)
        except json.JSONDecodeError as exc:
            raise ParseError(f"{path}:{lineno}: malformed JSON: {exc.msg}") from exc
        try:
            slokas.append(_sloka_from_json(record, strict=strict, where="record"))
        except ValidationError as exc:
            raise ValidationError(f"{path}:{lineno}: {exc}") from exc
    try:
        return Corpus(slokas)
    except ValidationError as exc:
        raise ValidationError(f"{path}: {exc}") from exc


def _token_to_json(token: AnnotatedToken) -> dict:
    return {
        "surface": token.surface,
        "root": token.root,
        "pos": token.pos,
        "case": token.morph.case,
        "number": token.morph.number,
        "gender": token.morph.gender,
        "compound": token.compound_group,
    }


def corpus_to_text(corpus: Corpus) -> str:
    """Render a corpus in canonical JSONL form (fixed key order, UTF-8 text)."""
    lines = []
    for sloka in corpus.slokas:
        record = {
            "sloka_id": sloka.sloka_id,
            "chapter": sloka.chapter,
            "doc": sloka.doc,
            "text": sloka.text,
            "tokens": [_token_to_json(t) for t in sloka.tokens],
        }
        lines.append(json.dumps(record, ensure_ascii=False))
    return "".join(line + "\n" for line in lines)


def save_corpus(corpus: Corpus, path: str | Path) -> None:
    Path(path).write_text(corpus_to_text(corpus), encoding="utf-8")


def normalize_compound_members(tokens: list[AnnotatedToken]) -> list[AnnotatedToken]:
    """Normalize the members of one split compound.

    Every non-last member adopts the last member's case and every member's
    number becomes sg; genders and token order are untouched. A single-member
    group is returned unchanged. If the last member itself carries no case the
    group is returned unchanged with a warning.
    """
    if not tokens:
        raise ValidationError("empty compound group")
    groups = {t.compound_group for t in tokens}
    if len(groups) != 1 or None in groups:
        raise ValidationError("tokens passed as one compound group must share a compound id")
    if len(tokens) == 1:
        return list(tokens)
    last = tokens[-1]
    if last.morph.case is None:
        warnings.warn(
            f"compound group {last.compound_group}: last member {last.root!r} has no case; group left unchanged",
            stacklevel=2,
        )
        return list(tokens)
    out = []
    for i, tok in enumerate(tokens):
        case = last.morph.case if i < len(tokens) - 1 else tok.morph.case
        out.append(replace(tok, morph=MorphTag(case=case, number="sg", gender=tok.morph.gender)))
    return out


def normalize_token_compounds(tokens: list[AnnotatedToken]) -> list[AnnotatedToken]:
    """Apply compound normalization to every compound group in a token list."""
    by_group: dict[int, list[int]] = {}
    for i, tok in enumerate(tokens):
        if tok.compound_group is not None:
            by_group.setdefault(tok.compound_group, []).append(i)
    if not by_group:
        return list(tokens)
    out = list(tokens)
    for indices in by_group.values():
        normalized = normalize_compound_members([tokens[i] for i in indices])
        for i, tok in zip(indices, normalized):
            out[i] = tok
    return out


def normalize_compounds(corpus: Corpus) -> Corpus:
    """Return a new corpus with every compound group normalized."""
    return Corpus(
        [
            Sloka(s.sloka_id, s.chapter, s.doc, s.text, normalize_token_compounds(s.tokens))
            for s in corpus.slokas
        ]
    )


def reclassify_pronouns(corpus: Corpus, pronouns: frozenset[str] | set[str]) -> Corpus:
    """Return a new corpus where every token whose root is a known pronoun has pos=pronoun.

    Surface, root and morphology are never changed.
    """
    if not pronouns:
        raise ValidationError("pronoun set must be non-empty")
    slokas = []
    for s in corpus.slokas:
        tokens = [replace(t, pos="pronoun") if t.root in pronouns else t for t in s.tokens]
        slokas.append(Sloka(s.sloka_id, s.chapter, s.doc, s.text, tokens))
    return Corpus(slokas)


def noun_frequencies(corpus: Corpus) -> list[tuple[str, int]]:
    """Noun root frequencies, most frequent first, ties broken lexicographically."""
    counts = Counter(tok.root for _, tok in corpus.iter_tokens() if tok.pos == "noun")
    return sorted(counts.items(), key=lambda item: (-item[1], item[0]))


def top_property_words(corpus: Corpus, k: int = 50) -> set[str]:
    """The k most frequent noun roots; used as the property-word set downstream."""
    if k < 1:
        raise ValidationError(f"k must be >= 1, got {k}")
    return {root for root, _ in noun_frequencies(corpus)[:k]}


def corpus_stats(corpus: Corpus) -> CorpusStats:
    roots = [tok.root for _, tok in corpus.iter_tokens()]
    noun_roots = [tok.root for _, tok in corpus.iter_tokens() if tok.pos == "noun"]
    return CorpusStats(
        docs=len({s.doc for s in corpus.slokas}),
        slokas=len(corpus.slokas),
        words_total=len(roots),
        words_unique=len(set(roots)),
        nouns_total=len(noun_roots),
        nouns_unique=len(set(noun_roots)),
    )
