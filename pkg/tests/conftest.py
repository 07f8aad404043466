import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from kgq import load_corpus, load_lexicon, normalize_compounds, reclassify_pronouns

DATA = Path(__file__).parent / "data"


@pytest.fixture(scope="session")
def lex():
    return load_lexicon()


@pytest.fixture(scope="session")
def adi_corpus():
    """The three-śloka mahābhārata extract, as annotated."""
    return load_corpus(DATA / "adi_parvan_67.jsonl")


@pytest.fixture(scope="session")
def adi_prepared(adi_corpus, lex):
    """Same corpus after pronoun reclassification and compound normalization."""
    return normalize_compounds(reclassify_pronouns(adi_corpus, lex.pronouns))


@pytest.fixture(scope="session")
def nighantu_sloka():
    """śloka 96 of the glossary chapter, as annotated (with analysis errors)."""
    corpus = load_corpus(DATA / "nighantu_1_96.jsonl")
    return corpus.slokas[0]


def pytest_terminal_summary(terminalreporter):
    """One line per acceptance criterion, visible in every run."""
    mod = sys.modules.get("test_acceptance")
    results = getattr(mod, "CRITERION_RESULTS", None) if mod else None
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for number, status, name in sorted(results):
        terminalreporter.write_line(f"[criterion {number:02d}] {status} {name}")
