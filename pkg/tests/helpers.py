"""Shared builders for test data."""

from __future__ import annotations

from kgq.corpus import AnnotatedToken, Corpus, MorphTag, Sloka


def tok(
    root: str,
    pos: str = "noun",
    case: int | None = None,
    number: str | None = None,
    gender: str | None = None,
    surface: str | None = None,
    compound: int | None = None,
) -> AnnotatedToken:
    return AnnotatedToken(
        surface=surface if surface is not None else root,
        root=root,
        pos=pos,
        morph=MorphTag(case=case, number=number, gender=gender),
        compound_group=compound,
    )


def sloka(sloka_id: str, tokens: list[AnnotatedToken], chapter: str = "1", doc: str = "d") -> Sloka:
    return Sloka(sloka_id=sloka_id, chapter=chapter, doc=doc, text="", tokens=tokens)


def corpus_of(*slokas: Sloka) -> Corpus:
    return Corpus(list(slokas))


def single_sloka_corpus(tokens: list[AnnotatedToken], sloka_id: str = "s1") -> Corpus:
    return corpus_of(sloka(sloka_id, tokens))


ENTITY_ROOTS = ("नल", "भीम", "कुन्ती", "माद्री", "शल्य", "गति", "वसु", "रवि", "भद्र", "सोम")
RELATION_ROOTS = ("पुत्र", "पुत्री", "भार्या", "पितृ", "मातृ", "भ्रातृ", "भगिनी", "दुहितृ")
POS_POOL = ("noun", "noun", "noun", "verb", "pronoun", "adverb", "conjunction", "other")


def random_token(rng, roots=ENTITY_ROOTS, relation_chance=0.25) -> AnnotatedToken:
    pos = rng.choice(POS_POOL)
    if pos == "noun" and rng.random() < relation_chance:
        root = rng.choice(RELATION_ROOTS)
    else:
        root = rng.choice(roots)
    if pos in ("verb", "conjunction"):
        morph = MorphTag()
    else:
        morph = MorphTag(
            case=rng.choice((None, 1, 1, 2, 3, 6, 6, 8)),
            number=rng.choice((None, "sg", "sg", "du", "pl")),
            gender=rng.choice((None, "m", "m", "f", "n")),
        )
    return AnnotatedToken(root, root, pos, morph)


def random_corpus(rng, n_slokas=4, tokens_per_sloka=(3, 10), docs=("d1", "d2")) -> Corpus:
    slokas = []
    for i in range(n_slokas):
        n = rng.randint(*tokens_per_sloka)
        tokens = [random_token(rng) for _ in range(n)]
        slokas.append(
            Sloka(
                sloka_id=f"s{i}",
                chapter="1",
                doc=rng.choice(docs),
                text="",
                tokens=tokens,
            )
        )
    return Corpus(slokas)
