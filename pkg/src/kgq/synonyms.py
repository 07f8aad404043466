"""Synonym-śloka identification and synonym-pair extraction.

Glossary chapters interleave ślokas that enumerate synonyms of a headword
with ślokas that do other things (properties, locations). A 40-feature
vector summarizes each śloka's morphology; a small linear classifier learns
to separate synonym ślokas from the rest. Within a synonym śloka, synonym
pairs are non-property nouns agreeing in case and number (gender is
deliberately not consulted).
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .corpus import Corpus, Sloka
from .errors import ParseError, ValidationError

_COUNT_NAMES = (
    "words",
    "nouns",
    "properties",
    "non_properties",
    "specials",
    "pronouns",
    "verbs",
    "case_1_nouns",
    "case_2_nouns",
    "case_3_nouns",
    "case_4_nouns",
    "case_5_nouns",
    "case_6_nouns",
    "case_7_nouns",
    "case_8_nouns",
    "number_sg_nouns",
    "number_du_nouns",
    "number_pl_nouns",
)

FEATURE_NAMES = _COUNT_NAMES + (
    "nouns_to_words",
    "properties_to_words",
    "non_properties_to_words",
    "specials_to_words",
    "properties_to_nouns",
    "non_properties_to_nouns",
    "specials_to_nouns",
    "case_1_to_nouns",
    "case_2_to_nouns",
    "case_3_to_nouns",
    "case_4_to_nouns",
    "case_5_to_nouns",
    "case_6_to_nouns",
    "case_7_to_nouns",
    "case_8_to_nouns",
    "number_sg_to_nouns",
    "number_du_to_nouns",
    "number_pl_to_nouns",
    "properties_to_non_properties",
    "non_properties_to_properties",
    "specials_to_properties",
    "specials_to_non_properties",
)

N_FEATURES = len(FEATURE_NAMES)

_SPECIAL_POS = frozenset({"adverb", "conjunction", "preposition"})


@dataclass(frozen=True)
class FeatureVector:
    values: tuple[float, ...]

    def __post_init__(self) -> None:
        if len(self.values) != N_FEATURES:
            raise ValidationError(
                f"feature vector needs {N_FEATURES} values, got {len(self.values)}"
            )

    def __getitem__(self, name: str) -> float:
        return self.values[FEATURE_NAMES.index(name)]

    def as_dict(self) -> dict[str, float]:
        return dict(zip(FEATURE_NAMES, self.values))


def _ratio(num: float, den: float) -> float:
    return num / den if den else 0.0


def featurize(sloka: Sloka, property_set: frozenset[str] | set[str]) -> FeatureVector:
    """Compute the 40 morphology features of one śloka.

    ``property_set`` holds the roots treated as property words; nouns split
    into property and non-property counts against it. Nouns missing a case
    or number simply do not contribute to those counts.
    """
    tokens = sloka.tokens
    nouns = [t for t in tokens if t.pos == "noun"]
    counts = {
        "words": len(tokens),
        "nouns": len(nouns),
        "properties": sum(1 for t in nouns if t.root in property_set),
        "specials": sum(1 for t in tokens if t.pos in _SPECIAL_POS),
        "pronouns": sum(1 for t in tokens if t.pos == "pronoun"),
        "verbs": sum(1 for t in tokens if t.pos == "verb"),
    }
    counts["non_properties"] = counts["nouns"] - counts["properties"]
    for i in range(1, 9):
        counts[f"case_{i}_nouns"] = sum(1 for t in nouns if t.morph.case == i)
    for n in ("sg", "du", "pl"):
        counts[f"number_{n}_nouns"] = sum(1 for t in nouns if t.morph.number == n)

    values = [float(counts[name]) for name in _COUNT_NAMES]
    words, noun_count = counts["words"], counts["nouns"]
    for name in ("nouns", "properties", "non_properties", "specials"):
        values.append(_ratio(counts[name], words))
    for name in ("properties", "non_properties", "specials"):
        values.append(_ratio(counts[name], noun_count))
    for i in range(1, 9):
        values.append(_ratio(counts[f"case_{i}_nouns"], noun_count))
    for n in ("sg", "du", "pl"):
        values.append(_ratio(counts[f"number_{n}_nouns"], noun_count))
    values.append(_ratio(counts["properties"], counts["non_properties"]))
    values.append(_ratio(counts["non_properties"], counts["properties"]))
    values.append(_ratio(counts["specials"], counts["properties"]))
    values.append(_ratio(counts["specials"], counts["non_properties"]))
    return FeatureVector(tuple(values))


@dataclass(frozen=True)
class TrainingConfig:
    epochs: int = 500
    learning_rate: float = 0.5
    l2: float = 1e-4

    def __post_init__(self) -> None:
        if self.epochs < 1:
            raise ValidationError("epochs must be >= 1")
        if self.learning_rate <= 0:
            raise ValidationError("learning rate must be positive")
        if self.l2 < 0:
            raise ValidationError("l2 penalty must be non-negative")


@dataclass(frozen=True)
class ClassifierModel:
    """Logistic linear model over standardized features; threshold 0.5."""

    weights: tuple[float, ...]
    bias: float
    feature_mean: tuple[float, ...]
    feature_std: tuple[float, ...]
    config: TrainingConfig
    loss_history: tuple[float, ...] = field(repr=False, default=())

    def standardize(self, v: FeatureVector) -> np.ndarray:
        x = np.asarray(v.values, dtype=float)
        return (x - np.asarray(self.feature_mean)) / np.asarray(self.feature_std)

    def decision_value(self, v: FeatureVector) -> float:
        return float(np.dot(self.standardize(v), self.weights) + self.bias)

    def probability(self, v: FeatureVector) -> float:
        z = self.decision_value(v)
        # numerically stable sigmoid
        if z >= 0:
            return 1.0 / (1.0 + math.exp(-z))
        e = math.exp(z)
        return e / (1.0 + e)


def loss_and_gradients(
    weights: np.ndarray,
    bias: float,
    x: np.ndarray,
    y: np.ndarray,
    l2: float,
) -> tuple[float, np.ndarray, float]:
    """Mean logistic loss with L2 on the weights, and its gradients.

    ``y`` is ±1. Exposed so the analytic gradient can be checked against
    finite differences.
    """
    z = x @ weights + bias
    margins = y * z
    loss = float(np.mean(np.logaddexp(0.0, -margins))) + 0.5 * l2 * float(np.dot(weights, weights))
    # d/dz logaddexp(0, -m) = -y * sigmoid(-m)
    s = 1.0 / (1.0 + np.exp(np.clip(margins, -500, 500)))
    coeff = -y * s
    grad_w = x.T @ coeff / len(y) + l2 * weights
    grad_b = float(np.mean(coeff))
    return loss, grad_w, grad_b


def train_classifier(
    examples: list[tuple[FeatureVector, bool]],
    config: TrainingConfig = TrainingConfig(),
) -> ClassifierModel:
    """Fit the classifier by full-batch gradient descent from zero weights.

    Features are standardized with training-set mean and (population) std;
    constant features get std 1 so they standardize to 0. Training is
    deterministic: same data and config, same model.
    """
    if not examples:
        raise ValidationError("training set is empty")
    labels = {label for _, label in examples}
    if len(labels) < 2:
        raise ValidationError("training set must contain both classes")
    x = np.asarray([v.values for v, _ in examples], dtype=float)
    y = np.asarray([1.0 if label else -1.0 for _, label in examples])
    mean = x.mean(axis=0)
    std = x.std(axis=0)
    std[std == 0.0] = 1.0
    x = (x - mean) / std

    weights = np.zeros(x.shape[1])
    bias = 0.0
    history = []
    for _ in range(config.epochs):
        loss, grad_w, grad_b = loss_and_gradients(weights, bias, x, y, config.l2)
        history.append(loss)
        weights = weights - config.learning_rate * grad_w
        bias = bias - config.learning_rate * grad_b
    return ClassifierModel(
        weights=tuple(weights.tolist()),
        bias=float(bias),
        feature_mean=tuple(mean.tolist()),
        feature_std=tuple(std.tolist()),
        config=config,
        loss_history=tuple(history),
    )


def classify(model: ClassifierModel, v: FeatureVector) -> bool:
    return model.probability(v) >= 0.5


@dataclass(frozen=True)
class SlokaLabel:
    sloka_id: str
    is_synonym_sloka: bool
    groups: tuple[frozenset[str], ...] = ()


def load_labels(path: str | Path) -> dict[str, SlokaLabel]:
    """Load a JSONL label file keyed by śloka id."""
    path = Path(path)
    out: dict[str, SlokaLabel] = {}
    for lineno, line in enumerate(path.read_text(encoding="utf-8").splitlines(), start=1):
        if not line.strip():
            continue
        try:
            record = json.loads(line)
        except json.JSONDecodeError as exc:
            raise ParseError(f"{path}:{lineno}: malformed JSON: {exc.msg}") from exc
        if not isinstance(record, dict) or not isinstance(record.get("sloka_id"), str):
            raise ValidationError(f"{path}:{lineno}: expected an object with a 'sloka_id' string")
        if not isinstance(record.get("is_synonym_sloka"), bool):
            raise ValidationError(f"{path}:{lineno}: field 'is_synonym_sloka' must be a boolean")
        groups = record.get("groups", [])
        if not isinstance(groups, list) or not all(
            isinstance(g, list) and all(isinstance(r, str) for r in g) for g in groups
        ):
            raise ValidationError(f"{path}:{lineno}: field 'groups' must be a list of root lists")
        sid = record["sloka_id"]
        if sid in out:
            raise ValidationError(f"{path}:{lineno}: duplicate label for śloka {sid!r}")
        out[sid] = SlokaLabel(sid, record["is_synonym_sloka"], tuple(frozenset(g) for g in groups))
    return out


SCENARIOS = ("S1", "S2", "S3", "S4")

TRAIN_FRACTION = 0.2


def make_scenario(
    corpus: Corpus,
    labels: dict[str, SlokaLabel],
    scenario: str,
    chapter_a: str = "1",
    chapter_b: str = "2",
) -> tuple[list[Sloka], list[Sloka]]:
    """Split labeled ślokas into (train, test) per the four standard scenarios.

    S1: first 20% of chapter A vs its remaining 80%. S2: the same within
    chapter B. S3: all of A vs all of B. S4: all of B vs all of A. The 20%
    boundary is floor(0.2 * n); ślokas keep corpus order.
    """
    if scenario not in SCENARIOS:
        raise ValidationError(f"unknown scenario {scenario!r}; expected one of {SCENARIOS}")

    def labeled(chapter: str) -> list[Sloka]:
        rows = [s for s in corpus.slokas if s.chapter == chapter and s.sloka_id in labels]
        if not rows:
            raise ValidationError(f"no labeled ślokas for chapter {chapter!r}")
        return rows

    if scenario in ("S1", "S2"):
        rows = labeled(chapter_a if scenario == "S1" else chapter_b)
        cut = math.floor(TRAIN_FRACTION * len(rows))
        return rows[:cut], rows[cut:]
    a, b = labeled(chapter_a), labeled(chapter_b)
    return (a, b) if scenario == "S3" else (b, a)


SynonymPair = tuple[str, str]


def extract_synonym_pairs(
    sloka: Sloka, property_set: frozenset[str] | set[str]
) -> set[SynonymPair]:
    """Unordered pairs of non-property noun roots agreeing in case and number.

    Both fields must be present on both nouns; gender never matters. Pairs
    are returned with their two roots sorted.
    """
    candidates = [
        t
        for t in sloka.tokens
        if t.pos == "noun"
        and t.root not in property_set
        and t.morph.case is not None
        and t.morph.number is not None
    ]
    pairs: set[SynonymPair] = set()
    for i, a in enumerate(candidates):
        for b in candidates[i + 1 :]:
            if a.root == b.root:
                continue
            if a.morph.case == b.morph.case and a.morph.number == b.morph.number:
                pairs.add(tuple(sorted((a.root, b.root))))
    return pairs


def group_coverage(
    gold_groups: list[frozenset[str]], found: set[SynonymPair]
) -> float:
    """Fraction of gold groups hit by at least one found pair inside the group."""
    if not gold_groups:
        raise ValidationError("no gold groups to evaluate")
    covered = sum(
        1
        for group in gold_groups
        if any(a in group and b in group for a, b in found)
    )
    return covered / len(gold_groups)
