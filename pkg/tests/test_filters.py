import random

import pytest

from bilex.corpus import pair_list_from_pairs
from bilex.filters import corpus_filter, exact_match_fraction, mrd_filter
from bilex.induction import LexiconEntry


def entry(source, target, score=1.0, plateau=1):
    return LexiconEntry(
        source=source, target=target, score=score, plateau=plateau, n11=1, link_count=1
    )


def test_mrd_filter_removes_dictionary_pairs():
    entries = [entry("constantes", "constants"), entry("cpio", "cpio")]
    mrd = pair_list_from_pairs([("constantes", "constants")])
    kept, removed = mrd_filter(entries, mrd)
    assert [e.pair for e in kept] == [("cpio", "cpio")]
    assert [e.pair for e in removed] == [("constantes", "constants")]


def test_mrd_filter_with_empty_dictionary_keeps_all():
    entries = [entry("machine", "workstation")]
    kept, removed = mrd_filter(entries, pair_list_from_pairs([]))
    assert kept == entries and removed == []


def test_mrd_filter_matches_on_normalized_forms():
    entries = [entry("Constantes", "CONSTANTS")]
    mrd = pair_list_from_pairs([("constantes", "constants")])
    kept, removed = mrd_filter(entries, mrd)
    assert kept == [] and len(removed) == 1


def test_corpus_filter_removes_shared_pairs():
    entries = [entry("machine", "workstation")]
    other = [entry("machine", "workstation", score=9.9, plateau=2)]
    kept, removed = corpus_filter(entries, other)
    assert kept == [] and len(removed) == 1


def test_corpus_filter_disjoint_lexicons_keep_all():
    entries = [entry("superutilisateur", "root")]
    other = [entry("bernard", "spanky")]
    kept, removed = corpus_filter(entries, other)
    assert kept == entries and removed == []


def random_lexicon(rng, size):
    vocab = [f"w{i}" for i in range(12)]
    seen = set()
    entries = []
    while len(entries) < size:
        pair = (rng.choice(vocab), rng.choice(vocab))
        if pair in seen:
            continue
        seen.add(pair)
        entries.append(entry(*pair, score=rng.uniform(0, 50), plateau=rng.randint(1, 4)))
    return entries


def test_filters_partition_commute_and_preserve_scores():
    rng = random.Random(77)
    for _ in range(200):
        entries = random_lexicon(rng, rng.randint(0, 25))
        mrd = pair_list_from_pairs(
            [(f"w{rng.randrange(12)}", f"w{rng.randrange(12)}") for _ in range(rng.randint(0, 10))]
        )
        other = random_lexicon(rng, rng.randint(0, 15))

        kept_m, removed_m = mrd_filter(entries, mrd)
        assert len(kept_m) + len(removed_m) == len(entries)
        assert set(map(id, kept_m)) | set(map(id, removed_m)) == set(map(id, entries))
        assert not (set(map(id, kept_m)) & set(map(id, removed_m)))

        # Kept entries are the very same objects: scores and plateaus untouched.
        assert all(any(k is e for e in entries) for k in kept_m)

        one, _ = corpus_filter(kept_m, other)
        kept_c, _ = corpus_filter(entries, other)
        two, _ = mrd_filter(kept_c, mrd)
        assert one == two


def test_exact_match_fraction():
    entries = [entry("cpio", "cpio"), entry("fn", "fn"), entry("machine", "workstation")]
    assert exact_match_fraction(entries) == pytest.approx(2 / 3)


def test_exact_match_fraction_extremes():
    assert exact_match_fraction([entry("a", "b")]) == 0.0
    assert exact_match_fraction([entry("a", "a"), entry("b", "b")]) == 1.0


def test_exact_match_fraction_empty_is_an_error():
    with pytest.raises(ValueError):
        exact_match_fraction([])
