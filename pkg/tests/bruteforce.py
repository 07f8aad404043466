"""Independent brute-force oracles for extraction and pattern matching.

Deliberately naive O(n^3)-ish reference implementations, kept free of the
package's extraction/matching code so the two can disagree. The filter table
is restated here on purpose; do not import it from the package.
"""

from __future__ import annotations

from itertools import product

# filter id -> (subject side, object side, object number must match)
# sides: "any" | "before" | "after", relative to the predicate token
ORACLE_FILTERS = {
    1: ("any", "any", False),
    2: ("any", "any", True),
    3: ("before", "after", True),
    4: ("after", "before", True),
}


def _form_map(lex):
    forms = {}
    for entry in lex.entries:
        for form in entry.forms:
            forms[form] = entry.canonical
    return forms


def _window_tokens(corpus, index, window):
    doc, pos = corpus.doc_position(index)
    indices = corpus.doc_indices(doc)
    lo = max(0, pos - window)
    hi = min(len(indices) - 1, pos + window)
    out = []
    for i in indices[lo : hi + 1]:
        sloka = corpus.slokas[i]
        for tok in sloka.tokens:
            out.append((sloka.sloka_id, tok))
    return out


def _side_ok(candidate: int, predicate: int, side: str) -> bool:
    if side == "any":
        return candidate != predicate
    if side == "before":
        return candidate < predicate
    return candidate > predicate


def brute_force_triplets(corpus, lex, filter_id, window=1):
    """Exhaustive (subject, predicate, object) token scan.

    Returns {(s, p, o): provenance set} merging duplicates.
    """
    subj_side, obj_side, need_number = ORACLE_FILTERS[filter_id]
    forms = _form_map(lex)
    found: dict[tuple[str, str, str], set[str]] = {}
    for index, sloka in enumerate(corpus.slokas):
        ctx = _window_tokens(corpus, index, window)
        for j, (sid, pred) in enumerate(ctx):
            if sid != sloka.sloka_id:
                continue
            if pred.pos != "noun" or pred.root not in forms:
                continue
            canonical = forms[pred.root]
            for i, (_, subj) in enumerate(ctx):
                if not _side_ok(i, j, subj_side):
                    continue
                if subj.pos != "noun" or subj.morph.case != 6 or subj.root in forms:
                    continue
                for k, (_, obj) in enumerate(ctx):
                    if not _side_ok(k, j, obj_side):
                        continue
                    if obj.pos != "noun" or obj.root in forms:
                        continue
                    if obj.morph.case is None or obj.morph.case != pred.morph.case:
                        continue
                    if obj.morph.gender is None or obj.morph.gender != pred.morph.gender:
                        continue
                    if need_number and (
                        obj.morph.number is None or obj.morph.number != pred.morph.number
                    ):
                        continue
                    if subj.root == obj.root:
                        continue
                    found.setdefault((subj.root, canonical, obj.root), set()).add(
                        sloka.sloka_id
                    )
    return found


def brute_force_match(kg, patterns):
    """Try every assignment of variables to entities-or-predicates."""
    edges = {(t.subject, t.predicate, t.object) for t in kg.edges}
    domain = sorted({x for e in edges for x in e})
    variables = sorted(
        {slot[1:] for p in patterns for slot in p if slot.startswith("?")}
    )
    results = []
    for combo in product(domain, repeat=len(variables)):
        binding = dict(zip(variables, combo))

        def fill(slot):
            return binding[slot[1:]] if slot.startswith("?") else slot

        if all((fill(s), fill(p), fill(o)) in edges for s, p, o in patterns):
            results.append(binding)
    unique = {frozenset(b.items()): b for b in results}
    return sorted(unique.values(), key=lambda b: tuple(b[k] for k in sorted(b)))
