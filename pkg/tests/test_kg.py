"""Triple store, pattern matching, gender inference, inverse enhancement."""

import random

import pytest

from bruteforce import brute_force_match
from helpers import corpus_of, sloka, tok

from kgq.errors import ParseError, ValidationError
from kgq.extraction import Triplet, extract_triplets
from kgq.kg import (
    EntityGender,
    KnowledgeGraph,
    TriplePattern,
    build_kg,
    deserialize_kg,
    enhance_with_inverses,
    infer_entity_genders,
    load_kg,
    match_pattern,
    save_kg,
    serialize_kg,
)
from kgq.lexicon import load_lexicon


def t(s, p, o, prov=("v1",), origin="direct"):
    return Triplet(s, p, o, frozenset(prov), origin)


def genders_of(**kwargs):
    return {k: EntityGender(k, v) for k, v in kwargs.items()}


class TestStore:
    def test_empty(self):
        kg = build_kg([])
        assert len(kg) == 0
        assert kg.edges == ()
        assert kg.entities == frozenset()

    def test_single_edge(self):
        kg = build_kg([t("अर्जुन", "पुत्र", "अभिमन्यु")])
        assert len(kg) == 1
        assert kg.entities == {"अर्जुन", "अभिमन्यु"}
        assert kg.predicates == {"पुत्र"}
        assert ("अर्जुन", "पुत्र", "अभिमन्यु") in kg

    def test_duplicate_add_merges_provenance(self):
        kg = build_kg([
            t("a", "r", "b", prov=("v1",)),
            t("a", "r", "b", prov=("v2",)),
        ])
        assert len(kg) == 1
        assert kg.edges[0].provenance == frozenset({"v1", "v2"})

    def test_direct_wins_over_inferred(self):
        kg = build_kg([
            t("a", "r", "b", origin="inferred"),
            t("a", "r", "b", origin="direct"),
        ])
        assert kg.edges[0].origin == "direct"

    def test_lookup_helpers(self):
        kg = build_kg([t("a", "r", "b"), t("a", "r", "c"), t("a", "q", "b")])
        assert kg.objects("a", "r") == {"b", "c"}
        assert kg.predicates_between("a", "b") == {"r", "q"}
        assert kg.get("a", "q", "b").origin == "direct"
        assert kg.get("a", "q", "z") is None

    def test_edges_sorted(self):
        kg = build_kg([t("b", "r", "c"), t("a", "s", "b"), t("a", "r", "b")])
        keys = [(e.subject, e.predicate, e.object) for e in kg.edges]
        assert keys == sorted(keys)


class TestMatch:
    def test_single_pattern_single_answer(self):
        kg = build_kg([t("अर्जुन", "पुत्र", "अभिमन्यु")])
        out = match_pattern(kg, [TriplePattern("अर्जुन", "पुत्र", "?a")])
        assert out == [{"a": "अभिमन्यु"}]

    def test_empty_pattern_list_matches_trivially(self):
        kg = build_kg([t("a", "r", "b")])
        assert match_pattern(kg, []) == [{}]

    def test_no_match(self):
        kg = build_kg([t("a", "r", "b")])
        assert match_pattern(kg, [TriplePattern("a", "r", "?x"),
                                  TriplePattern("?x", "r", "c")]) == []

    def test_two_pattern_join(self):
        kg = build_kg([
            t("पाण्डु", "पत्नी", "कुन्ती"),
            t("कुन्ती", "भ्रातृ", "वसुदेव"),
        ])
        out = match_pattern(kg, [
            TriplePattern("पाण्डु", "पत्नी", "?x"),
            TriplePattern("?x", "भ्रातृ", "?ans"),
        ])
        assert out == [{"ans": "वसुदेव", "x": "कुन्ती"}]

    def test_predicate_variable(self):
        kg = build_kg([t("a", "r", "b"), t("a", "q", "b"), t("a", "r", "c")])
        out = match_pattern(kg, [TriplePattern("a", "?p", "b")])
        assert out == [{"p": "q"}, {"p": "r"}]

    def test_repeated_variable_must_rebind_consistently(self):
        kg = build_kg([t("a", "r", "b"), t("b", "r", "a"), t("b", "r", "c")])
        out = match_pattern(kg, [TriplePattern("?x", "r", "?y"),
                                 TriplePattern("?y", "r", "?x")])
        assert out == [{"x": "a", "y": "b"}, {"x": "b", "y": "a"}]

    def test_results_sorted_and_unique(self):
        kg = build_kg([t("a", "r", "c"), t("a", "r", "b")])
        out = match_pattern(kg, [TriplePattern("a", "r", "?x")])
        assert out == [{"x": "b"}, {"x": "c"}]

    def test_constant_only_pattern(self):
        kg = build_kg([t("a", "r", "b")])
        assert match_pattern(kg, [TriplePattern("a", "r", "b")]) == [{}]
        assert match_pattern(kg, [TriplePattern("a", "r", "c")]) == []

    def test_matches_bruteforce_on_random_graphs(self):
        rng = random.Random(4242)
        names = ["e%d" % i for i in range(6)] + ["r1", "r2"]
        for _ in range(80):
            edges = set()
            for _ in range(rng.randrange(1, 14)):
                s, o = rng.sample(names, 2)
                edges.add((s, rng.choice(("r1", "r2")), o))
            kg = build_kg([t(*e) for e in edges])
            patterns = []
            for _ in range(rng.randrange(1, 4)):
                slots = [
                    rng.choice(("?x", "?y", "?z", rng.choice(names)))
                    for _ in range(3)
                ]
                patterns.append(TriplePattern(*slots))
            assert kg.match_pattern(patterns) == brute_force_match(kg, patterns)


class TestGenderInference:
    def test_unanimous(self):
        corpus = corpus_of(sloka("s1", [tok("देव", gender="m"), tok("देव", gender="m")]))
        kg = build_kg([t("देव", "r", "x")])
        assert infer_entity_genders(corpus, kg)["देव"].gender == "m"

    def test_majority(self):
        corpus = corpus_of(sloka("s1", [
            tok("देव", gender="m"), tok("देव", gender="m"), tok("देव", gender="f"),
        ]))
        kg = build_kg([t("देव", "r", "x")])
        assert infer_entity_genders(corpus, kg)["देव"].gender == "m"

    def test_tie_is_unknown(self):
        corpus = corpus_of(sloka("s1", [tok("देव", gender="m"), tok("देव", gender="f")]))
        kg = build_kg([t("देव", "r", "x")])
        assert infer_entity_genders(corpus, kg)["देव"].gender == "unknown"

    def test_absent_entity_is_unknown(self):
        kg = build_kg([t("देव", "r", "x")])
        out = infer_entity_genders(corpus_of(), kg)
        assert out["देव"].gender == "unknown"
        assert out["x"].gender == "unknown"

    def test_non_noun_occurrences_ignored(self):
        corpus = corpus_of(sloka("s1", [
            tok("देव", pos="pronoun", gender="f"),
            tok("देव", gender="m"),
        ]))
        kg = build_kg([t("देव", "r", "x")])
        assert infer_entity_genders(corpus, kg)["देव"].gender == "m"

    def test_fixture_genders(self, adi_prepared, lex):
        kg = build_kg(extract_triplets(adi_prepared, lex, 2, window=1))
        genders = infer_entity_genders(adi_prepared, kg)
        assert genders["प्रत्यूष"].gender == "m"
        assert genders["देवल"].gender == "m"
        assert genders["स्त्री"].gender == "f"


class TestEnhancement:
    def setup_method(self):
        self.lex = load_lexicon()

    def test_adds_inferred_reverse_edge(self):
        kg = build_kg([t("प्रत्यूष", "पुत्र", "देवल", prov=("v9",))])
        out = enhance_with_inverses(kg, self.lex, genders_of(प्रत्यूष="m"))
        back = out.get("देवल", "पितृ", "प्रत्यूष")
        assert back is not None
        assert back.origin == "inferred"
        assert back.provenance == frozenset({"v9"})

    def test_subject_gender_selects_rule(self):
        kg = build_kg([t("कुन्ती", "पुत्र", "भीम")])
        out = enhance_with_inverses(kg, self.lex, genders_of(कुन्ती="f"))
        assert ("भीम", "मातृ", "कुन्ती") in out
        assert ("भीम", "पितृ", "कुन्ती") not in out

    def test_unknown_gender_blocks_inference(self):
        kg = build_kg([t("a", "पुत्र", "b")])
        out = enhance_with_inverses(kg, self.lex, {})
        assert len(out) == 1

    def test_existing_direct_edge_not_duplicated(self):
        kg = build_kg([
            t("a", "पुत्र", "b", prov=("v1",)),
            t("b", "पितृ", "a", prov=("v2",)),
        ])
        out = enhance_with_inverses(kg, self.lex, genders_of(a="m", b="m"))
        back = out.get("b", "पितृ", "a")
        assert back.origin == "direct"
        assert back.provenance == frozenset({"v2"})
        # the other edge still gains its own reverse
        assert out.get("a", "पुत्र", "b").origin == "direct"

    def test_mutually_exclusive_direct_edge_blocks(self):
        # each edge's candidate reverse collides with the other direct edge
        kg = build_kg([
            t("a", "पुत्र", "b"),
            t("b", "पुत्र", "a"),
        ])
        out = enhance_with_inverses(kg, self.lex, genders_of(a="m", b="m"))
        assert len(out) == 2
        assert out.get("a", "पितृ", "b") is None
        assert out.get("b", "पितृ", "a") is None

    def test_inferred_edges_never_justify(self):
        kg = build_kg([t("a", "पितृ", "b", origin="inferred")])
        out = enhance_with_inverses(kg, self.lex, genders_of(a="m", b="m"))
        assert len(out) == 1

    def test_non_lexicon_predicate_ignored(self):
        kg = build_kg([t("a", "mystery", "b")])
        out = enhance_with_inverses(kg, self.lex, genders_of(a="m"))
        assert len(out) == 1

    def test_monotone(self):
        kg = build_kg([
            t("a", "पुत्र", "b"),
            t("c", "पत्नी", "d"),
        ])
        out = enhance_with_inverses(kg, self.lex, genders_of(a="m", c="m"))
        before = {(e.subject, e.predicate, e.object) for e in kg.edges}
        after = {(e.subject, e.predicate, e.object) for e in out.edges}
        assert before <= after

    def test_idempotent(self, adi_prepared):
        kg = build_kg(extract_triplets(adi_prepared, self.lex, 2, window=1))
        genders = infer_entity_genders(adi_prepared, kg)
        once = enhance_with_inverses(kg, self.lex, genders)
        twice = enhance_with_inverses(once, self.lex, genders)
        assert serialize_kg(once) == serialize_kg(twice)

    def test_fixture_gains_father_edge(self, adi_prepared):
        kg = build_kg(extract_triplets(adi_prepared, self.lex, 2, window=1))
        genders = infer_entity_genders(adi_prepared, kg)
        out = enhance_with_inverses(kg, self.lex, genders)
        assert len(kg) == 87
        edge = out.get("देवल", "पितृ", "प्रत्यूष")
        assert edge is not None and edge.origin == "inferred"

    def test_every_inferred_edge_justified(self, adi_prepared):
        kg = build_kg(extract_triplets(adi_prepared, self.lex, 2, window=1))
        genders = infer_entity_genders(adi_prepared, kg)
        out = enhance_with_inverses(kg, self.lex, genders)
        direct = {(e.subject, e.predicate, e.object)
                  for e in kg.edges if e.origin == "direct"}
        for e in out.edges:
            if e.origin != "inferred":
                continue
            gender = genders[e.object].gender
            justified = any(
                e.predicate in self.lex.inverses_of(fwd, gender)
                for (s, fwd, o) in direct
                if s == e.object and o == e.subject
                and self.lex.entry_or_none(fwd) is not None
            )
            assert justified, e


class TestSerialization:
    def test_empty_round_trip(self):
        kg = build_kg([])
        assert serialize_kg(kg) == ""
        assert len(deserialize_kg("")) == 0

    def test_round_trip_bytes(self):
        kg = build_kg([
            t("a%d" % i, "r", "b%d" % i, prov=("v%d" % i, "w%d" % i))
            for i in range(10)
        ])
        text = serialize_kg(kg)
        again = serialize_kg(deserialize_kg(text))
        assert text == again

    def test_line_format(self):
        kg = build_kg([t("a", "r", "b", prov=("v2", "v1"))])
        assert serialize_kg(kg) == "a\tr\tb\tdirect\tv1,v2\n"

    def test_file_round_trip(self, tmp_path):
        kg = build_kg([t("a", "r", "b"), t("b", "q", "c", origin="inferred")])
        path = tmp_path / "graph.tsv"
        save_kg(kg, path)
        loaded = load_kg(path)
        assert serialize_kg(loaded) == serialize_kg(kg)

    def test_bad_field_count(self):
        with pytest.raises(ParseError, match=":1"):
            deserialize_kg("a\tr\tb\n")

    def test_bad_origin(self):
        with pytest.raises(ParseError, match=":2"):
            deserialize_kg("a\tr\tb\tdirect\tv1\na\tr\tc\tguessed\tv1\n")


class TestPatternType:
    def test_variable_detection(self):
        assert TriplePattern.is_variable("?x")
        assert not TriplePattern.is_variable("x")

    def test_variables_listed(self):
        p = TriplePattern("?a", "r", "?b")
        assert p.variables() == ("a", "b")

    def test_triplet_to_pattern_shape(self):
        p = TriplePattern("अर्जुन", "पुत्र", "?ans")
        assert p.subject == "अर्जुन" and p.object == "?ans"
