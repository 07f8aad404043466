"""Relation lexicon: relation words, their inverses and decompositions.

The lexicon is a JSON object:

    {"relations": [{"canonical": "पितृ", "forms": ["पितृ"],
                    "inverse": [{"object_gender": "m", "relation": "पुत्र"},
                                {"object_gender": "f", "relation": "पुत्री"}],
                    "decompose": [["मातृ", "भ्रातृ"]]}, ...],
     "pronouns": ["तद्", ...],
     "interrogatives": ["किम्"],
     "mutually_exclusive": [["पति", "पत्नी"], ...]}

``inverse`` rules are conditioned on the gender of the entity the inverse
edge will point at. ``decompose`` lists chains of canonical relations whose
composition is equivalent to the relation (e.g. maternal-uncle = mother's
brother). ``mutually_exclusive`` pairs may be omitted, in which case they
default to the pairs named by the inverse rules, minus any self-pair.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

from .errors import ParseError, ValidationError

_GENDERS_WITH_INVERSES = ("m", "f")


@dataclass(frozen=True)
class InverseRule:
    """If the target entity has ``object_gender``, the reverse edge is ``relation``."""

    object_gender: str
    relation: str

    def __post_init__(self) -> None:
        if self.object_gender not in _GENDERS_WITH_INVERSES:
            raise ValidationError(
                f"inverse rule gender must be 'm' or 'f', got {self.object_gender!r}"
            )
        if not self.relation:
            raise ValidationError("inverse rule relation must be non-empty")


@dataclass(frozen=True)
class RelationEntry:
    canonical: str
    forms: frozenset[str]
    inverse_rules: tuple[InverseRule, ...] = ()
    decompositions: tuple[tuple[str, ...], ...] = ()

    def __post_init__(self) -> None:
        if not self.canonical:
            raise ValidationError("relation entry needs a non-empty canonical root")
        if self.canonical not in self.forms:
            raise ValidationError(
                f"relation {self.canonical!r}: canonical root must be listed among its forms"
            )
        for chain in self.decompositions:
            if len(chain) < 2:
                raise ValidationError(
                    f"relation {self.canonical!r}: decomposition chains need at least 2 steps"
                )


class RelationLexicon:
    """Lookup structure over relation entries, pronoun roots and interrogative roots."""

    def __init__(
        self,
        entries: list[RelationEntry],
        pronouns: frozenset[str],
        interrogatives: frozenset[str],
        mutually_exclusive: frozenset[frozenset[str]] | None = None,
    ) -> None:
        self.entries = tuple(entries)
        self.pronouns = frozenset(pronouns)
        self.interrogatives = frozenset(interrogatives)
        self._by_canonical: dict[str, RelationEntry] = {}
        self._by_form: dict[str, RelationEntry] = {}
        for entry in self.entries:
            if entry.canonical in self._by_canonical:
                raise ValidationError(f"duplicate relation entry {entry.canonical!r}")
            self._by_canonical[entry.canonical] = entry
        for entry in self.entries:
            for form in entry.forms:
                other = self._by_form.get(form)
                if other is not None:
                    raise ValidationError(
                        f"form {form!r} belongs to both {other.canonical!r} and {entry.canonical!r}"
                    )
                self._by_form[form] = entry
        if mutually_exclusive is None:
            mutually_exclusive = self._default_mutual_exclusions()
        self.mutually_exclusive = frozenset(frozenset(pair) for pair in mutually_exclusive)
        self._validate()

    def _default_mutual_exclusions(self) -> frozenset[frozenset[str]]:
        pairs = set()
        for entry in self.entries:
            for rule in entry.inverse_rules:
                if rule.relation != entry.canonical:
                    pairs.add(frozenset((entry.canonical, rule.relation)))
        return frozenset(pairs)

    def _validate(self) -> None:
        overlap = self.interrogatives & set(self._by_form)
        if overlap:
            raise ValidationError(
                f"interrogative root(s) {sorted(overlap)} also appear as relation forms"
            )
        for entry in self.entries:
            for rule in entry.inverse_rules:
                if rule.relation not in self._by_canonical:
                    raise ValidationError(
                        f"relation {entry.canonical!r}: inverse target {rule.relation!r} is not defined"
                    )
            for chain in entry.decompositions:
                for step in chain:
                    if step not in self._by_canonical:
                        raise ValidationError(
                            f"relation {entry.canonical!r}: decomposition step {step!r} is not defined"
                        )
        for pair in self.mutually_exclusive:
            if not 1 <= len(pair) <= 2:
                raise ValidationError("mutually exclusive pairs must name one or two relations")
            for name in pair:
                if name not in self._by_canonical:
                    raise ValidationError(
                        f"mutually exclusive pair names unknown relation {name!r}"
                    )
        # Round-trip closure: following an inverse rule and then any inverse
        # rule of its target must be able to land back on the start relation.
        for entry in self.entries:
            for rule in entry.inverse_rules:
                target = self._by_canonical[rule.relation]
                if not target.inverse_rules:
                    raise ValidationError(
                        f"relation {entry.canonical!r}: inverse target {rule.relation!r} has no inverse rules"
                    )
                back = {r.relation for r in target.inverse_rules}
                if entry.canonical not in back:
                    raise ValidationError(
                        f"inverse rules of {rule.relation!r} never return to {entry.canonical!r}"
                    )

    def entry(self, canonical: str) -> RelationEntry:
        try:
            return self._by_canonical[canonical]
        except KeyError:
            raise ValidationError(f"unknown relation {canonical!r}") from None

    def entry_or_none(self, canonical: str) -> RelationEntry | None:
        return self._by_canonical.get(canonical)

    def canonicalize(self, root: str) -> str | None:
        """Canonical relation for a root, or None if the root is not a relation word."""
        entry = self._by_form.get(root)
        return entry.canonical if entry is not None else None

    def is_relation_word(self, root: str) -> bool:
        return root in self._by_form

    def inverses_of(self, relation: str, gender: str | None) -> tuple[str, ...]:
        """Reverse relations of ``relation`` toward an entity of ``gender``.

        Unknown or neuter gender yields no inverses.
        """
        entry = self.entry(relation)
        if gender not in _GENDERS_WITH_INVERSES:
            return ()
        return tuple(r.relation for r in entry.inverse_rules if r.object_gender == gender)

    def decompositions_of(self, relation: str) -> tuple[tuple[str, ...], ...]:
        return self.entry(relation).decompositions

    def are_mutually_exclusive(self, a: str, b: str) -> bool:
        return frozenset((a, b)) in self.mutually_exclusive


def _parse_entry(obj: object, index: int) -> RelationEntry:
    where = f"relations[{index}]"
    if not isinstance(obj, dict):
        raise ValidationError(f"{where}: expected an object")
    unknown = sorted(set(obj) - {"canonical", "forms", "inverse", "decompose"})
    if unknown:
        raise ValidationError(f"{where}: unknown field(s) {', '.join(map(repr, unknown))}")
    canonical = obj.get("canonical")
    if not isinstance(canonical, str):
        raise ValidationError(f"{where}: field 'canonical' must be a string")
    forms = obj.get("forms")
    if not isinstance(forms, list) or not all(isinstance(f, str) for f in forms):
        raise ValidationError(f"{where}: field 'forms' must be a list of strings")
    rules = []
    for rule in obj.get("inverse", []):
        if not isinstance(rule, dict) or set(rule) != {"object_gender", "relation"}:
            raise ValidationError(
                f"{where}: inverse rules must be objects with object_gender and relation"
            )
        rules.append(InverseRule(rule["object_gender"], rule["relation"]))
    chains = []
    for chain in obj.get("decompose", []):
        if not isinstance(chain, list) or not all(isinstance(s, str) for s in chain):
            raise ValidationError(f"{where}: decomposition chains must be lists of strings")
        chains.append(tuple(chain))
    return RelationEntry(canonical, frozenset(forms), tuple(rules), tuple(chains))


def lexicon_from_json(data: object, *, source: str = "lexicon") -> RelationLexicon:
    if not isinstance(data, dict):
        raise ValidationError(f"{source}: expected a JSON object")
    unknown = sorted(set(data) - {"relations", "pronouns", "interrogatives", "mutually_exclusive"})
    if unknown:
        raise ValidationError(f"{source}: unknown field(s) {', '.join(map(repr, unknown))}")
    relations = data.get("relations")
    if not isinstance(relations, list):
        raise ValidationError(f"{source}: field 'relations' must be a list")
    entries = [_parse_entry(obj, i) for i, obj in enumerate(relations)]
    pronouns = data.get("pronouns", [])
    interrogatives = data.get("interrogatives", [])
    for name, value in (("pronouns", pronouns), ("interrogatives", interrogatives)):
        if not isinstance(value, list) or not all(isinstance(v, str) for v in value):
            raise ValidationError(f"{source}: field {name!r} must be a list of strings")
    raw_me = data.get("mutually_exclusive")
    me: frozenset[frozenset[str]] | None
    if raw_me is None or raw_me == []:
        me = None
    else:
        if not isinstance(raw_me, list):
            raise ValidationError(f"{source}: field 'mutually_exclusive' must be a list of pairs")
        pairs = set()
        for pair in raw_me:
            if not isinstance(pair, list) or not all(isinstance(p, str) for p in pair):
                raise ValidationError(f"{source}: mutually exclusive entries must be lists of strings")
            pairs.add(frozenset(pair))
        me = frozenset(pairs)
    try:
        return RelationLexicon(entries, frozenset(pronouns), frozenset(interrogatives), me)
    except ValidationError as exc:
        raise ValidationError(f"{source}: {exc}") from exc


def load_lexicon(path: str | Path | None = None) -> RelationLexicon:
    """Load a lexicon JSON file, or the packaged default when path is None."""
    if path is None:
        text = resources.files("kgq.data").joinpath("lexicon.json").read_text(encoding="utf-8")
        source = "packaged lexicon"
    else:
        text = Path(path).read_text(encoding="utf-8")
        source = str(path)
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{source}: malformed JSON: {exc.msg}") from exc
    return lexicon_from_json(data, source=source)
