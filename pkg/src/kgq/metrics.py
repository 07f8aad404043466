"""Evaluation arithmetic: precision/recall/F1/accuracy and the three QA tasks.

The QA harness scores three related tasks over a gold question set:

    parse    was the question compiled into the right query pattern?
    cond     answering restricted to correctly parsed questions
    overall  answering regardless of how the parse went

Counts follow the total/found/correct convention: ``total`` gold positives,
``found`` system positives, ``correct`` their overlap. All derived numbers
are computed in exact rational arithmetic and only rounded (half-up, two
decimals) at the reporting edge.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from decimal import ROUND_HALF_UP, Decimal
from fractions import Fraction
from pathlib import Path

from .corpus import AnnotatedToken, token_from_json
from .errors import ParseError, UnparsableQuestion, ValidationError
from .kg import KnowledgeGraph, TriplePattern
from .lexicon import RelationLexicon
from .question import answer_question, parse_question, prepare_question_tokens


@dataclass(frozen=True)
class TaskCounts:
    total: int
    found: int
    correct: int
    test_size: int | None = None

    def __post_init__(self) -> None:
        for name in ("total", "found", "correct"):
            if getattr(self, name) < 0:
                raise ValidationError(f"{name} must be non-negative")
        if self.correct > min(self.total, self.found):
            raise ValidationError(
                f"correct ({self.correct}) cannot exceed total ({self.total}) or found ({self.found})"
            )
        if self.test_size is not None and self.test_size < 0:
            raise ValidationError("test_size must be non-negative")


def prf_exact(c: TaskCounts) -> tuple[Fraction, Fraction, Fraction]:
    """Precision, recall, F1 as exact fractions (0 on zero denominators)."""
    precision = Fraction(c.correct, c.found) if c.found else Fraction(0)
    recall = Fraction(c.correct, c.total) if c.total else Fraction(0)
    denom = c.total + c.found
    f1 = Fraction(2 * c.correct, denom) if denom else Fraction(0)
    return precision, recall, f1


def prf(c: TaskCounts) -> tuple[float, float, float]:
    return tuple(float(x) for x in prf_exact(c))


def accuracy_exact(c: TaskCounts) -> Fraction:
    """(TP + TN) / N where TN is recovered from the confusion identity."""
    if c.test_size is None:
        raise ValidationError("accuracy needs test_size")
    if c.test_size < c.total + c.found - c.correct:
        raise ValidationError(
            f"test_size {c.test_size} is smaller than total + found - correct "
            f"({c.total} + {c.found} - {c.correct})"
        )
    true_negatives = c.test_size - c.total - c.found + c.correct
    return Fraction(c.correct + true_negatives, c.test_size)


def accuracy(c: TaskCounts) -> float:
    return float(accuracy_exact(c))


def round_half_up(x: Fraction | float, places: int = 2) -> float:
    """Round with ties away from zero, as the reference tables do."""
    if isinstance(x, Fraction):
        d = Decimal(x.numerator) / Decimal(x.denominator)
    else:
        d = Decimal(repr(x))
    q = Decimal(1).scaleb(-places)
    return float(d.quantize(q, rounding=ROUND_HALF_UP))


def _metrics_dict(c: TaskCounts) -> dict:
    p, r, f1 = prf_exact(c)
    return {
        "total": c.total,
        "found": c.found,
        "correct": c.correct,
        "precision": round_half_up(p),
        "recall": round_half_up(r),
        "f1": round_half_up(f1),
    }


@dataclass(frozen=True)
class QaTaskReport:
    qparse: TaskCounts
    qcond: TaskCounts
    qall: TaskCounts

    def __post_init__(self) -> None:
        if self.qcond.total != self.qparse.correct:
            raise ValidationError(
                "conditional task total must equal the number of correctly parsed questions"
            )

    def as_dict(self) -> dict:
        return {
            "QParse": _metrics_dict(self.qparse),
            "QCond": _metrics_dict(self.qcond),
            "QAll": _metrics_dict(self.qall),
        }


@dataclass(frozen=True)
class GoldQuestion:
    qid: str
    tokens: tuple[AnnotatedToken, ...]
    gold_pattern: tuple[TriplePattern, ...] | None
    gold_answers: frozenset[str]


def load_gold_questions(path: str | Path) -> list[GoldQuestion]:
    """Load gold questions from JSONL.

    Each record: {"id": str, "tokens": [...], "gold_pattern": [[s,p,o],...]
    or null, "gold_answers": [str]}. Variables in patterns are spelled with
    a leading "?" ("?x1", "?ans").
    """
    path = Path(path)
    out: list[GoldQuestion] = []
    seen: set[str] = set()
    for lineno, line in enumerate(path.read_text(encoding="utf-8").splitlines(), start=1):
        if not line.strip():
            continue
        try:
            record = json.loads(line)
        except json.JSONDecodeError as exc:
            raise ParseError(f"{path}:{lineno}: malformed JSON: {exc.msg}") from exc
        where = f"{path}:{lineno}"
        if not isinstance(record, dict) or not isinstance(record.get("id"), str):
            raise ValidationError(f"{where}: expected an object with an 'id' string")
        qid = record["id"]
        if qid in seen:
            raise ValidationError(f"{where}: duplicate question id {qid!r}")
        seen.add(qid)
        raw_tokens = record.get("tokens")
        if not isinstance(raw_tokens, list):
            raise ValidationError(f"{where}: field 'tokens' must be a list")
        tokens = tuple(
            token_from_json(t, where=f"{where}: token {i}") for i, t in enumerate(raw_tokens)
        )
        raw_pattern = record.get("gold_pattern")
        pattern: tuple[TriplePattern, ...] | None
        if raw_pattern is None:
            pattern = None
        elif isinstance(raw_pattern, list) and all(
            isinstance(t, list) and len(t) == 3 and all(isinstance(s, str) for s in t)
            for t in raw_pattern
        ):
            pattern = tuple(TriplePattern(*t) for t in raw_pattern)
        else:
            raise ValidationError(f"{where}: field 'gold_pattern' must be null or a list of 3-lists")
        answers = record.get("gold_answers", [])
        if not isinstance(answers, list) or not all(isinstance(a, str) for a in answers):
            raise ValidationError(f"{where}: field 'gold_answers' must be a list of strings")
        out.append(GoldQuestion(qid, tokens, pattern, frozenset(answers)))
    return out


def evaluate_qa(
    gold: list[GoldQuestion], kg: KnowledgeGraph, lex: RelationLexicon
) -> QaTaskReport:
    """Score parsing, conditional answering, and overall answering.

    Parse correctness is TriplePattern-list equality under the parser's
    canonical variable naming. An answer is counted as found when non-empty
    and as correct when its value set equals the gold answer set exactly.
    """
    n = len(gold)
    parse_found = parse_correct = 0
    cond_found = cond_correct = 0
    all_found = all_correct = 0
    for q in gold:
        tokens = prepare_question_tokens(list(q.tokens), lex)
        try:
            parsed = parse_question(tokens, lex)
        except UnparsableQuestion:
            continue
        parse_found += 1
        is_parse_correct = (
            q.gold_pattern is not None and tuple(parsed.to_patterns()) == q.gold_pattern
        )
        answer = answer_question(kg, parsed, lex)
        answered = not answer.is_no_answer
        answer_correct = (
            answered and bool(q.gold_answers) and set(answer.values()) == set(q.gold_answers)
        )
        if is_parse_correct:
            parse_correct += 1
            cond_found += int(answered)
            cond_correct += int(answer_correct)
        all_found += int(answered)
        all_correct += int(answer_correct)
    return QaTaskReport(
        qparse=TaskCounts(n, parse_found, parse_correct),
        qcond=TaskCounts(parse_correct, cond_found, cond_correct),
        qall=TaskCounts(n, all_found, all_correct),
    )
