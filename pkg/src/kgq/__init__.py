"""Knowledge-graph construction and question answering for annotated Sanskrit corpora.

The pipeline: load a morphologically annotated śloka corpus, reclassify
pronouns and normalize split compounds, extract (subject, relation, object)
triplets around relation words, build an indexed knowledge graph, optionally
add inferred inverse edges, then answer factoid questions posed as annotated
token lists. A separate subsystem classifies glossary ślokas as
synonym-enumerating and extracts synonym pairs from them.
"""

from .corpus import (
    AnnotatedToken,
    Corpus,
    CorpusStats,
    MorphTag,
    Sloka,
    corpus_stats,
    load_corpus,
    normalize_compound_members,
    normalize_compounds,
    reclassify_pronouns,
    save_corpus,
    top_property_words,
)
from .errors import KgqError, ParseError, UnparsableQuestion, ValidationError
from .extraction import FILTERS, FilterSpec, Triplet, extract_triplets
from .kg import (
    EntityGender,
    KnowledgeGraph,
    TriplePattern,
    build_kg,
    enhance_with_inverses,
    infer_entity_genders,
    load_kg,
    match_pattern,
    save_kg,
)
from .lexicon import InverseRule, RelationEntry, RelationLexicon, load_lexicon
from .metrics import GoldQuestion, QaTaskReport, TaskCounts, evaluate_qa, prf, accuracy
from .question import (
    AnswerSet,
    ParsedQuestion,
    answer_question,
    enhance_query,
    parse_question,
    prepare_question_tokens,
)
from .synonyms import (
    ClassifierModel,
    FeatureVector,
    classify,
    extract_synonym_pairs,
    featurize,
    group_coverage,
    make_scenario,
    train_classifier,
)

__version__ = "0.1.0"

__all__ = [
    "AnnotatedToken",
    "AnswerSet",
    "ClassifierModel",
    "Corpus",
    "CorpusStats",
    "EntityGender",
    "FILTERS",
    "FeatureVector",
    "FilterSpec",
    "GoldQuestion",
    "InverseRule",
    "KgqError",
    "KnowledgeGraph",
    "MorphTag",
    "ParseError",
    "ParsedQuestion",
    "QaTaskReport",
    "RelationEntry",
    "RelationLexicon",
    "Sloka",
    "TaskCounts",
    "TriplePattern",
    "Triplet",
    "UnparsableQuestion",
    "ValidationError",
    "accuracy",
    "answer_question",
    "build_kg",
    "classify",
    "corpus_stats",
    "enhance_query",
    "enhance_with_inverses",
    "evaluate_qa",
    "extract_synonym_pairs",
    "extract_triplets",
    "featurize",
    "group_coverage",
    "infer_entity_genders",
    "load_corpus",
    "load_kg",
    "load_lexicon",
    "make_scenario",
    "match_pattern",
    "normalize_compound_members",
    "normalize_compounds",
    "parse_question",
    "prepare_question_tokens",
    "prf",
    "reclassify_pronouns",
    "save_corpus",
    "save_kg",
    "top_property_words",
    "train_classifier",
]
