"""Lexicon filters: remove likely general-usage entries so that what remains
is dominated by domain-specific vocabulary.

Both filters partition the input exactly (kept + removed = input) and never
touch scores or plateau indices, so they commute with each other.
"""

from __future__ import annotations

from typing import Iterable, Sequence

from .corpus import PairList, normalize
from .induction import LexiconEntry


def _norm_pair(entry: LexiconEntry) -> tuple[str, str]:
    return (normalize(entry.source), normalize(entry.target))


def mrd_filter(
    entries: Sequence[LexiconEntry], mrd: PairList
) -> tuple[list[LexiconEntry], list[LexiconEntry]]:
    """Partition entries by machine-readable-dictionary membership.

    An entry is removed iff its normalized pair appears in the dictionary;
    matching is exact on normalized forms (no stemming).
    """
    kept: list[LexiconEntry] = []
    removed: list[LexiconEntry] = []
    for e in entries:
        (removed if _norm_pair(e) in mrd else kept).append(e)
    return kept, removed


def corpus_filter(
    entries: Sequence[LexiconEntry], other_lexicon: Iterable[LexiconEntry]
) -> tuple[list[LexiconEntry], list[LexiconEntry]]:
    """Partition entries against a lexicon induced from another corpus:
    entries also found there (exact normalized pair match) are removed."""
    other_pairs = {_norm_pair(e) for e in other_lexicon}
    kept: list[LexiconEntry] = []
    removed: list[LexiconEntry] = []
    for e in entries:
        (removed if _norm_pair(e) in other_pairs else kept).append(e)
    return kept, removed


def exact_match_fraction(entries: Sequence[LexiconEntry]) -> float:
    """Fraction of entries whose normalized source equals the target."""
    if not entries:
        raise ValueError("exact-match fraction is undefined for an empty lexicon")
    same = sum(1 for e in entries if normalize(e.source) == normalize(e.target))
    return same / len(entries)
