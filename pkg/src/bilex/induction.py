"""Translation lexicon induction from band co-occurrence counts.

Candidate type pairs are scored with the G-squared log-likelihood-ratio
statistic, then refined by alternating between one-to-one competitive linking
of token instances and rescoring of type pairs from the resulting link
counts; pairs whose links are starved away are dropped. Final scores group
into likelihood plateaus that serve as recall/precision cutoff levels.
"""

from __future__ import annotations

import logging
import math
from collections import Counter
from dataclasses import dataclass, replace
from typing import Iterable, Mapping, Sequence

from .corpus import Token
from .geometry import BandPair, CooccurrenceCounts

log = logging.getLogger(__name__)

PLATEAU_DECIMALS = 6


@dataclass(frozen=True)
class ContingencyTable:
    """2x2 co-occurrence table; n11 pairs (u,v), n22 pairs neither."""

    n11: int
    n12: int
    n21: int
    n22: int

    def __post_init__(self) -> None:
        if min(self.n11, self.n12, self.n21, self.n22) < 0:
            raise ValueError("contingency cells must be non-negative")
        if self.total == 0:
            raise ValueError("contingency table must have a positive total")

    @property
    def total(self) -> int:
        return self.n11 + self.n12 + self.n21 + self.n22


def g2_score(table: ContingencyTable) -> float:
    """G-squared statistic: 2 * sum n_ij * ln(n_ij / m_ij), zero terms for
    empty cells, where m_ij is the independence expectation. Non-negative,
    and zero exactly when observed counts equal the expectation."""
    n11, n12, n21, n22 = table.n11, table.n12, table.n21, table.n22
    total = table.total
    rows = (n11 + n12, n21 + n22)
    cols = (n11 + n21, n12 + n22)
    g2 = 0.0
    for nij, row, col in (
        (n11, rows[0], cols[0]),
        (n12, rows[0], cols[1]),
        (n21, rows[1], cols[0]),
        (n22, rows[1], cols[1]),
    ):
        if nij > 0:
            mij = row * col / total
            g2 += nij * math.log(nij / mij)
    g2 *= 2.0
    # Guard the non-negativity contract against float residue at independence.
    return g2 if g2 > 0.0 else 0.0


@dataclass(frozen=True)
class LexiconEntry:
    """One scored candidate translation pair.

    ``n11`` is the banded co-occurrence count supporting the pair;
    ``link_count`` is the number of token links from the final re-estimation
    pass. ``plateau`` is 1 for the highest rounded-score group.
    """

    source: str
    target: str
    score: float
    plateau: int
    n11: int
    link_count: int

    @property
    def pair(self) -> tuple[str, str]:
        return (self.source, self.target)


@dataclass(frozen=True)
class LinkAssignment:
    """One-to-one links between token indices of the two halves."""

    links: tuple[tuple[int, int], ...]

    def __post_init__(self) -> None:
        a_side = [a for a, _ in self.links]
        b_side = [b for _, b in self.links]
        if len(set(a_side)) != len(a_side) or len(set(b_side)) != len(b_side):
            raise ValueError("links must be one-to-one")

    def __len__(self) -> int:
        return len(self.links)


def competitive_link(
    pairs: Sequence[BandPair], type_scores: Mapping[tuple[str, str], float]
) -> LinkAssignment:
    """Greedy best-first one-to-one linking of banded instance pairs.

    Pairs are taken in order of (type score desc, band deviation asc,
    source index asc, target index asc); a pair links iff neither token is
    already linked. The result is maximal under that order and fully
    deterministic.
    """
    order = sorted(
        pairs,
        key=lambda p: (-type_scores[(p.a_type, p.b_type)], p.deviation, p.a_index, p.b_index),
    )
    linked_a: set[int] = set()
    linked_b: set[int] = set()
    links: list[tuple[int, int]] = []
    for p in order:
        if p.a_index in linked_a or p.b_index in linked_b:
            continue
        linked_a.add(p.a_index)
        linked_b.add(p.b_index)
        links.append((p.a_index, p.b_index))
    return LinkAssignment(links=tuple(links))


def _score_pair(n11: int, nu: int, nv: int, total: int) -> float:
    # n11 can exceed an instance marginal at iteration zero, when one token
    # pairs with several in-band partners; cap to keep the table consistent.
    n11 = min(n11, nu, nv)
    table = ContingencyTable(n11=n11, n12=nu - n11, n21=nv - n11, n22=total - nu - nv + n11)
    return g2_score(table)


def induce_lexicon(
    counts: CooccurrenceCounts,
    pairs: Sequence[BandPair],
    max_iterations: int = 10,
) -> list[LexiconEntry]:
    """Iteratively re-estimate a translation lexicon from banded pairs.

    Iteration zero scores every banded type pair from its raw co-occurrence
    count; each subsequent iteration links token instances competitively,
    recounts n11 from links only, drops typepairs with zero links, and
    rescores. Stops when the surviving pair set and its link counts repeat
    (a true fixed point) or after max_iterations. Marginals and the table
    total stay fixed throughout, so only n11 moves between iterations.
    """
    if not counts.joint:
        return []
    nu = counts.source_marginal
    nv = counts.target_marginal
    total = counts.source_total + counts.target_total
    raw_joint = dict(counts.joint)

    surviving = set(raw_joint)
    scores = {
        (u, v): _score_pair(c, nu[u], nv[v], total) for (u, v), c in raw_joint.items()
    }
    link_counts: Counter[tuple[str, str]] = Counter()
    prev_link_counts: Counter[tuple[str, str]] | None = None

    pair_types = [(p, (p.a_type, p.b_type)) for p in pairs]
    for _ in range(max_iterations):
        in_play = [p for p, tp in pair_types if tp in surviving]
        by_index = {(p.a_index, p.b_index): tp for p, tp in pair_types if tp in surviving}
        assignment = competitive_link(in_play, scores)
        link_counts = Counter(by_index[link] for link in assignment.links)
        new_surviving = {tp for tp in surviving if link_counts[tp] > 0}
        new_scores = {
            (u, v): _score_pair(link_counts[(u, v)], nu[u], nv[v], total)
            for (u, v) in new_surviving
        }
        converged = new_surviving == surviving and link_counts == prev_link_counts
        surviving = new_surviving
        scores = new_scores
        prev_link_counts = link_counts
        if converged:
            break

    entries = [
        LexiconEntry(
            source=u,
            target=v,
            score=scores[(u, v)],
            plateau=0,
            n11=raw_joint[(u, v)],
            link_count=link_counts[(u, v)],
        )
        for (u, v) in surviving
    ]
    return assign_plateaus(entries)


def assign_plateaus(entries: Iterable[LexiconEntry]) -> list[LexiconEntry]:
    """Group entries into likelihood plateaus.

    Scores are rounded to six decimals; the distinct rounded values in
    descending order define plateaus 1, 2, 3, ... and equal rounded scores
    share one plateau. Entry order is preserved.
    """
    entries = list(entries)
    rounded = [round(e.score, PLATEAU_DECIMALS) for e in entries]
    levels = sorted(set(rounded), reverse=True)
    index = {score: i + 1 for i, score in enumerate(levels)}
    return [replace(e, plateau=index[r]) for e, r in zip(entries, rounded)]


def _bitext_types(
    tokens_a: Sequence[Token], tokens_b: Sequence[Token], content_only: bool
) -> set[str]:
    types = set()
    for tokens in (tokens_a, tokens_b):
        for t in tokens:
            if content_only and not t.is_content:
                continue
            types.add(t.norm)
    return types


def compute_recall(
    entries: Iterable[LexiconEntry],
    tokens_a: Sequence[Token],
    tokens_b: Sequence[Token],
    content_only: bool = True,
) -> float:
    """Recall against the bitext vocabulary: the fraction of distinct types
    (both halves pooled) that appear in at least one entry. Perfect recall
    means every word is covered by some entry."""
    types = _bitext_types(tokens_a, tokens_b, content_only)
    if not types:
        raise ValueError("recall is undefined for an empty bitext")
    covered_forms: set[str] = set()
    for e in entries:
        covered_forms.add(e.source)
        covered_forms.add(e.target)
    return len(types & covered_forms) / len(types)


@dataclass(frozen=True)
class RecallThreshold:
    cutoff: int
    achieved_recall: float
    reached_target: bool


def threshold_by_recall(
    entries: Sequence[LexiconEntry],
    target_recall: float,
    tokens_a: Sequence[Token],
    tokens_b: Sequence[Token],
    content_only: bool = True,
) -> RecallThreshold:
    """Choose the smallest plateau cutoff whose cumulative recall reaches the
    target; falls back to the deepest plateau (with a warning) when even the
    whole lexicon falls short of the requested recall."""
    if not 0.0 < target_recall <= 1.0:
        raise ValueError("target_recall must be in (0, 1]")
    if not entries:
        raise ValueError("cannot threshold an empty lexicon")
    plateaus = sorted({e.plateau for e in entries})
    achieved = 0.0
    for k in plateaus:
        subset = [e for e in entries if e.plateau <= k]
        achieved = compute_recall(subset, tokens_a, tokens_b, content_only)
        if achieved >= target_recall:
            return RecallThreshold(cutoff=k, achieved_recall=achieved, reached_target=True)
    deepest = plateaus[-1]
    log.warning(
        "target recall %.3f unreachable; deepest plateau %d achieves %.3f "
        "(recall/precision tradeoff)",
        target_recall,
        deepest,
        achieved,
    )
    return RecallThreshold(cutoff=deepest, achieved_recall=achieved, reached_target=False)
