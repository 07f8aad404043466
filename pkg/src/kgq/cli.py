"""Command-line entry point.

Subcommands:

    kgq stats     --corpus F
    kgq build-kg  --corpus F --out F [--filter N] [--window N] [--enhance]
    kgq ask       --kg F --question-tokens F.json
    kgq repl      --kg F            (one JSON token array per stdin line)
    kgq eval-qa   --kg F --gold F
    kgq synonyms classify --corpus F --labels F --scenario S1..S4
    kgq synonyms pairs    --corpus F [--properties topK|FILE]

Every command prints machine-readable JSON on stdout (``--tsv`` switches to
tab-separated rows); log chatter goes to stderr. Option precedence is
command-line flag, then ``--config`` JSON file, then built-in default. The
lexicon resolves from ``--lexicon``, the config file, the ``KGQ_LEXICON``
environment variable, or the packaged default, in that order. Output files
are written via a temporary file and atomic rename.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import re
import sys
from pathlib import Path

from .corpus import (
    corpus_stats,
    load_corpus,
    normalize_compounds,
    reclassify_pronouns,
    token_from_json,
    top_property_words,
)
from .errors import KgqError, UnparsableQuestion, ValidationError
from .extraction import extract_triplets
from .kg import (
    build_kg,
    enhance_with_inverses,
    infer_entity_genders,
    load_kg,
    serialize_kg,
)
from .lexicon import load_lexicon
from .metrics import (
    TaskCounts,
    accuracy_exact,
    evaluate_qa,
    load_gold_questions,
    prf_exact,
    round_half_up,
)
from .question import answer_question, parse_question, prepare_question_tokens
from .synonyms import (
    SCENARIOS,
    TrainingConfig,
    classify,
    extract_synonym_pairs,
    featurize,
    load_labels,
    make_scenario,
    train_classifier,
)

log = logging.getLogger("kgq")

_DEFAULTS = {
    "filter": 2,
    "window": 1,
    "k": 50,
    "strict": True,
    "tsv": False,
    "enhance": False,
    "epochs": TrainingConfig().epochs,
    "learning_rate": TrainingConfig().learning_rate,
    "l2": TrainingConfig().l2,
}

_CONFIG_KEYS = frozenset(_DEFAULTS) | {
    "corpus",
    "lexicon",
    "kg",
    "labels",
    "questions",
    "gold",
    "out",
    "scenario",
    "properties",
}


def _load_config(path: str | None) -> dict:
    if path is None:
        return {}
    try:
        data = json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise ValidationError(f"{path}: malformed JSON: {exc.msg}") from exc
    if not isinstance(data, dict):
        raise ValidationError(f"{path}: config must be a JSON object")
    unknown = sorted(set(data) - _CONFIG_KEYS)
    if unknown:
        raise ValidationError(f"{path}: unknown config key(s) {', '.join(map(repr, unknown))}")
    return data


class _Options:
    """Flag > config > default resolution for one parsed invocation."""

    def __init__(self, args: argparse.Namespace) -> None:
        self._args = vars(args)
        self._config = _load_config(self._args.get("config"))

    def get(self, key: str, default=None):
        value = self._args.get(key)
        if value is not None:
            return value
        if key in self._config:
            return self._config[key]
        if key in _DEFAULTS:
            return _DEFAULTS[key]
        return default

    def require(self, key: str, flag: str):
        value = self.get(key)
        if value is None:
            raise ValidationError(f"missing required option {flag}")
        return value

    def lexicon(self):
        path = self.get("lexicon") or os.environ.get("KGQ_LEXICON") or None
        return load_lexicon(path)


def _atomic_write(path: str | Path, text: str) -> None:
    path = Path(path)
    tmp = path.with_name(path.name + ".tmp")
    tmp.write_text(text, encoding="utf-8")
    os.replace(tmp, path)


def _emit(payload: str, out: str | None) -> None:
    if out is None:
        sys.stdout.write(payload)
    else:
        _atomic_write(out, payload)


def _as_json(obj) -> str:
    return json.dumps(obj, ensure_ascii=False) + "\n"


def _as_tsv(rows: list[list[object]]) -> str:
    return "".join("\t".join(str(c) for c in row) + "\n" for row in rows)


def _load_prepared_corpus(opts: _Options, lex):
    corpus = load_corpus(opts.require("corpus", "--corpus"), strict=opts.get("strict"))
    log.info("loaded corpus: %d ślokas", len(corpus))
    return normalize_compounds(reclassify_pronouns(corpus, lex.pronouns))


def cmd_stats(opts: _Options) -> int:
    corpus = load_corpus(opts.require("corpus", "--corpus"), strict=opts.get("strict"))
    stats = corpus_stats(corpus).as_dict()
    if opts.get("tsv"):
        payload = _as_tsv([[k, v] for k, v in stats.items()])
    else:
        payload = _as_json(stats)
    _emit(payload, opts.get("out"))
    return 0


def cmd_build_kg(opts: _Options) -> int:
    lex = opts.lexicon()
    corpus = _load_prepared_corpus(opts, lex)
    triplets = extract_triplets(
        corpus, lex, filter_spec=int(opts.get("filter")), window=int(opts.get("window"))
    )
    kg = build_kg(triplets)
    before = {"edges": len(kg), "relation_types": len(kg.predicates)}
    if opts.get("enhance"):
        genders = infer_entity_genders(corpus, kg)
        kg = enhance_with_inverses(kg, lex, genders)
    after = {"edges": len(kg), "relation_types": len(kg.predicates)}
    _atomic_write(opts.require("out", "--out"), serialize_kg(kg))
    summary = {
        "entities": len(kg.entities),
        "edges_before_enhancement": before["edges"],
        "edges_after_enhancement": after["edges"],
        "relation_types_before_enhancement": before["relation_types"],
        "relation_types_after_enhancement": after["relation_types"],
    }
    if opts.get("tsv"):
        sys.stdout.write(_as_tsv([[k, v] for k, v in summary.items()]))
    else:
        sys.stdout.write(_as_json(summary))
    return 0


def _question_tokens_from_json(data: object, lex, *, where: str):
    if not isinstance(data, list):
        raise ValidationError(f"{where}: expected a JSON array of tokens")
    tokens = [token_from_json(t, where=f"{where}: token {i}") for i, t in enumerate(data)]
    return prepare_question_tokens(tokens, lex)


def _answer_payload(kg, tokens, lex, tsv: bool) -> str:
    parsed = parse_question(tokens, lex)
    result = answer_question(kg, parsed, lex)
    if tsv:
        return _as_tsv([[v, m] for v, m in result.answers])
    return _as_json(result.as_dict())


def cmd_ask(opts: _Options) -> int:
    lex = opts.lexicon()
    kg = load_kg(opts.require("kg", "--kg"))
    path = opts.require("questions", "--question-tokens")
    try:
        data = json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise ValidationError(f"{path}: malformed JSON: {exc.msg}") from exc
    tokens = _question_tokens_from_json(data, lex, where=str(path))
    try:
        payload = _answer_payload(kg, tokens, lex, opts.get("tsv"))
    except UnparsableQuestion as exc:
        sys.stdout.write(_as_json({"error": str(exc)}))
        return 1
    _emit(payload, opts.get("out"))
    return 0


def cmd_repl(opts: _Options) -> int:
    lex = opts.lexicon()
    kg = load_kg(opts.require("kg", "--kg"))
    tsv = opts.get("tsv")
    for lineno, line in enumerate(sys.stdin, start=1):
        if not line.strip():
            continue
        try:
            data = json.loads(line)
            tokens = _question_tokens_from_json(data, lex, where=f"stdin:{lineno}")
            sys.stdout.write(_answer_payload(kg, tokens, lex, tsv))
        except (KgqError, ValueError) as exc:
            sys.stdout.write(_as_json({"error": str(exc)}))
        sys.stdout.flush()
    return 0


def cmd_eval_qa(opts: _Options) -> int:
    lex = opts.lexicon()
    kg = load_kg(opts.require("kg", "--kg"))
    gold = load_gold_questions(opts.require("gold", "--gold"))
    report = evaluate_qa(gold, kg, lex)
    data = report.as_dict()
    if opts.get("tsv"):
        rows = [
            [task, m["total"], m["found"], m["correct"], m["precision"], m["recall"], m["f1"]]
            for task, m in data.items()
        ]
        payload = _as_tsv(rows)
    else:
        payload = _as_json(data)
    _emit(payload, opts.get("out"))
    return 0


def _property_set(opts: _Options, corpus):
    spec = opts.get("properties") or f"top{opts.get('k')}"
    match = re.fullmatch(r"top(\d+)", spec)
    if match:
        return top_property_words(corpus, int(match.group(1)))
    roots = {
        line.strip()
        for line in Path(spec).read_text(encoding="utf-8").splitlines()
        if line.strip()
    }
    if not roots:
        raise ValidationError(f"{spec}: property-word file is empty")
    return roots


def cmd_synonyms_classify(opts: _Options) -> int:
    lex = opts.lexicon()
    corpus = _load_prepared_corpus(opts, lex)
    labels = load_labels(opts.require("labels", "--labels"))
    scenario = opts.require("scenario", "--scenario")
    train_rows, test_rows = make_scenario(corpus, labels, scenario)
    properties = _property_set(opts, corpus)
    config = TrainingConfig(
        epochs=int(opts.get("epochs")),
        learning_rate=float(opts.get("learning_rate")),
        l2=float(opts.get("l2")),
    )
    train_set = [
        (featurize(s, properties), labels[s.sloka_id].is_synonym_sloka) for s in train_rows
    ]
    model = train_classifier(train_set, config)
    total = found = correct = 0
    for sloka in test_rows:
        gold = labels[sloka.sloka_id].is_synonym_sloka
        predicted = classify(model, featurize(sloka, properties))
        total += int(gold)
        found += int(predicted)
        correct += int(gold and predicted)
    counts = TaskCounts(total, found, correct, test_size=len(test_rows))
    precision, recall, f1 = prf_exact(counts)
    report = {
        "scenario": scenario,
        "train_size": len(train_rows),
        "test_size": len(test_rows),
        "total": total,
        "found": found,
        "correct": correct,
        "precision": round_half_up(precision),
        "recall": round_half_up(recall),
        "f1": round_half_up(f1),
        "accuracy": round_half_up(accuracy_exact(counts)),
        "final_loss": model.loss_history[-1] if model.loss_history else None,
    }
    if opts.get("tsv"):
        payload = _as_tsv([[k, v] for k, v in report.items()])
    else:
        payload = _as_json(report)
    _emit(payload, opts.get("out"))
    return 0


def cmd_synonyms_pairs(opts: _Options) -> int:
    lex = opts.lexicon()
    corpus = _load_prepared_corpus(opts, lex)
    properties = _property_set(opts, corpus)
    results = []
    for sloka in corpus.slokas:
        pairs = sorted(extract_synonym_pairs(sloka, properties))
        results.append({"sloka_id": sloka.sloka_id, "pairs": [list(p) for p in pairs]})
    if opts.get("tsv"):
        rows = [[r["sloka_id"], a, b] for r in results for a, b in r["pairs"]]
        payload = _as_tsv(rows)
    else:
        payload = _as_json(results)
    _emit(payload, opts.get("out"))
    return 0


def _add_common(parser: argparse.ArgumentParser, *names: str) -> None:
    if "config" in names:
        parser.add_argument("--config", help="JSON file with default options")
    if "lexicon" in names:
        parser.add_argument("--lexicon", help="relation lexicon JSON (default: packaged)")
    if "corpus" in names:
        parser.add_argument("--corpus", help="corpus JSONL file")
    if "strict" in names:
        parser.add_argument(
            "--lenient",
            dest="strict",
            action="store_false",
            default=None,
            help="ignore unknown fields in input files",
        )
    if "tsv" in names:
        parser.add_argument("--tsv", action="store_true", default=None, help="tab-separated output")
    if "out" in names:
        parser.add_argument("--out", help="write output to this file instead of stdout")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="kgq",
        description="Knowledge-graph question answering over annotated Sanskrit corpora",
    )
    parser.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("stats", help="corpus size statistics")
    _add_common(p, "config", "corpus", "strict", "tsv", "out")
    p.set_defaults(func=cmd_stats)

    p = sub.add_parser("build-kg", help="extract triplets and write a KG file")
    _add_common(p, "config", "lexicon", "corpus", "strict", "tsv", "out")
    p.add_argument("--filter", type=int, help="extraction filter 1..4 (default 2)")
    p.add_argument("--window", type=int, help="context window in ślokas (default 1)")
    p.add_argument(
        "--enhance", action="store_true", default=None, help="add inferred inverse edges"
    )
    p.set_defaults(func=cmd_build_kg)

    p = sub.add_parser("ask", help="answer one annotated question")
    _add_common(p, "config", "lexicon", "tsv", "out")
    p.add_argument("--kg", help="KG file from build-kg")
    p.add_argument(
        "--question-tokens", dest="questions", help="JSON file with the question's token array"
    )
    p.set_defaults(func=cmd_ask)

    p = sub.add_parser("repl", help="answer questions from stdin, one JSON token array per line")
    _add_common(p, "config", "lexicon", "tsv")
    p.add_argument("--kg", help="KG file from build-kg")
    p.set_defaults(func=cmd_repl)

    p = sub.add_parser("eval-qa", help="score parsing and answering against gold questions")
    _add_common(p, "config", "lexicon", "tsv", "out")
    p.add_argument("--kg", help="KG file from build-kg")
    p.add_argument("--gold", help="gold questions JSONL")
    p.set_defaults(func=cmd_eval_qa)

    p = sub.add_parser("synonyms", help="synonym śloka classification and pair extraction")
    syn = p.add_subparsers(dest="subcommand", required=True)

    c = syn.add_parser("classify", help="train on a scenario split and score the test half")
    _add_common(c, "config", "lexicon", "corpus", "strict", "tsv", "out")
    c.add_argument("--report", dest="out", help="alias for --out")
    c.add_argument("--labels", help="śloka labels JSONL")
    c.add_argument("--scenario", choices=SCENARIOS, help="train/test split")
    c.add_argument("--properties", help="property words: topK (e.g. top50) or a file of roots")
    c.add_argument("--epochs", type=int)
    c.add_argument("--learning-rate", dest="learning_rate", type=float)
    c.add_argument("--l2", type=float)
    c.set_defaults(func=cmd_synonyms_classify)

    c = syn.add_parser("pairs", help="extract synonym pairs per śloka")
    _add_common(c, "config", "lexicon", "corpus", "strict", "tsv", "out")
    c.add_argument("--properties", help="property words: topK (e.g. top50) or a file of roots")
    c.set_defaults(func=cmd_synonyms_pairs)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        stream=sys.stderr,
        level=logging.INFO if args.verbose else logging.WARNING,
        format="%(levelname)s %(message)s",
    )
    try:
        opts = _Options(args)
        return args.func(opts)
    except KgqError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except FileNotFoundError as exc:
        print(f"error: {exc.filename}: file not found", file=sys.stderr)
        return 1


if __name__ == "__main__":
    raise SystemExit(main())
