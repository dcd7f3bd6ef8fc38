"""Chain-based geometric bitext mapping.

Produces an injective correspondence map by interleaving candidate point
generation (cognate / seed-lexicon / exact matching on word tokens) with
geometric selection: a fixed-size chain of candidate points is accepted when
it is injective, lies near the bitext's main diagonal slope, and fits a line
with small RMS residual. The search walks a rectangle along the expected
diagonal from the origin, advancing past each accepted chain and widening
after failed searches.
"""

from __future__ import annotations

import logging
import math
from bisect import bisect_right
from dataclasses import dataclass
from typing import Sequence

from .corpus import PairList, Token, normalize
from .geometry import BitextMap, BitextSpace, CorrespondencePoint

log = logging.getLogger(__name__)

HEURISTIC_KINDS = ("cognate-lcsr", "seed-lexicon", "exact-match")


@dataclass(frozen=True)
class MapperParams:
    """Knobs for candidate generation and chain selection.

    ``initial_rect_chars`` and ``rect_vertical_slack`` size the search
    rectangle (characters along x, extra y beyond the diagonal projection);
    both grow by ``search_widening`` after a failed search.
    """

    chain_size: int = 6
    lcsr_threshold: float = 0.58
    max_slope_deviation: float = 0.33
    max_rms_error: float = 20.0
    search_widening: float = 1.5
    initial_rect_chars: int = 700
    rect_vertical_slack: float = 150.0

    def __post_init__(self) -> None:
        if self.chain_size < 4:
            raise ValueError("chain_size must be at least 4")
        if not 0.0 < self.lcsr_threshold <= 1.0:
            raise ValueError("lcsr_threshold must be in (0, 1]")
        if self.max_rms_error <= 0:
            raise ValueError("max_rms_error must be positive")
        if self.search_widening <= 1.0:
            raise ValueError("search_widening must exceed 1")
        if self.initial_rect_chars < 1:
            raise ValueError("initial_rect_chars must be positive")


@dataclass(frozen=True)
class MatchHeuristic:
    kind: str
    resources: PairList | None = None

    def __post_init__(self) -> None:
        if self.kind not in HEURISTIC_KINDS:
            raise ValueError(f"unknown heuristic kind: {self.kind!r}")
        if self.kind == "seed-lexicon" and not (self.resources and len(self.resources) > 0):
            raise ValueError("seed-lexicon heuristic requires a non-empty pair list")


def lcsr(a: str, b: str) -> float:
    """Longest common subsequence ratio: LCS(a, b) / max(|a|, |b|)."""
    if not a or not b:
        raise ValueError("lcsr requires non-empty strings")
    if a == b:
        return 1.0
    # Two-row LCS dynamic program.
    if len(a) < len(b):
        a, b = b, a
    prev = [0] * (len(b) + 1)
    for ca in a:
        cur = [0]
        for j, cb in enumerate(b, start=1):
            if ca == cb:
                cur.append(prev[j - 1] + 1)
            else:
                cur.append(max(prev[j], cur[j - 1]))
        prev = cur
    return prev[-1] / len(a)


@dataclass(frozen=True)
class SearchRect:
    """Half-open rectangle (x_lo, x_hi] x (y_lo, y_hi]."""

    x_lo: float
    x_hi: float
    y_lo: float
    y_hi: float

    def contains(self, x: float, y: float) -> bool:
        return self.x_lo < x <= self.x_hi and self.y_lo < y <= self.y_hi


def _letters(form: str) -> int:
    return sum(1 for c in form if c.isalpha())


class _LcsrCache:
    """Type-level LCSR memo with the min/max length prefilter baked in."""

    def __init__(self, threshold: float) -> None:
        self.threshold = threshold
        self._memo: dict[tuple[str, str], bool] = {}

    def matches(self, a: str, b: str) -> bool:
        key = (a, b)
        hit = self._memo.get(key)
        if hit is not None:
            return hit
        la, lb = len(a), len(b)
        # LCS <= min length, so the ratio cannot reach the threshold when
        # min/max falls below it.
        if min(la, lb) / max(la, lb) < self.threshold:
            result = False
        else:
            result = lcsr(a, b) >= self.threshold
        self._memo[key] = result
        return result


class _WordIndex:
    """Word tokens of one half, ordered by center, sliceable by bisect."""

    def __init__(self, tokens: Sequence[Token]) -> None:
        self.tokens = [t for t in tokens if t.is_word]
        self.centers = [t.center for t in self.tokens]
        # Fold diacritics once per token for the cognate comparison.
        self.folded = [normalize(t.norm, fold_diacritics=True) for t in self.tokens]

    def window(self, lo: float, hi: float) -> range:
        # (lo, hi] to match SearchRect's half-open convention.
        start = bisect_right(self.centers, lo)
        stop = bisect_right(self.centers, hi)
        return range(start, stop)


def generate_candidates(
    rect: SearchRect,
    tokens_a: Sequence[Token],
    tokens_b: Sequence[Token],
    heuristics: Sequence[MatchHeuristic],
    params: MapperParams,
    _cache: _LcsrCache | None = None,
) -> set[CorrespondencePoint]:
    """Emit (a.center, b.center) for every in-rect word-token pair that some
    enabled heuristic matches.

    Cognate matching requires at least four letters on both sides and LCSR at
    or above the threshold (diacritics folded for the comparison only); seed
    matching looks the normalized pair up in the seed lexicon; exact matching
    requires equal normalized forms. All matching pairs are emitted; ambiguity
    is left to chain selection.
    """
    index_a = _WordIndex(tokens_a)
    index_b = _WordIndex(tokens_b)
    return _candidates_in_rect(rect, index_a, index_b, heuristics, params, _cache)


def _candidates_in_rect(
    rect: SearchRect,
    index_a: _WordIndex,
    index_b: _WordIndex,
    heuristics: Sequence[MatchHeuristic],
    params: MapperParams,
    cache: _LcsrCache | None = None,
) -> set[CorrespondencePoint]:
    a_range = index_a.window(rect.x_lo, rect.x_hi)
    b_range = index_b.window(rect.y_lo, rect.y_hi)
    a_in = [index_a.tokens[i] for i in a_range]
    b_in = [index_b.tokens[i] for i in b_range]
    if not a_in or not b_in:
        return set()

    kinds = {h.kind for h in heuristics}
    points: set[CorrespondencePoint] = set()

    if "exact-match" in kinds:
        by_norm: dict[str, list[Token]] = {}
        for b in b_in:
            by_norm.setdefault(b.norm, []).append(b)
        for a in a_in:
            for b in by_norm.get(a.norm, ()):
                points.add(CorrespondencePoint(a.center, b.center))

    if "seed-lexicon" in kinds:
        seed_targets: dict[str, set[str]] = {}
        for h in heuristics:
            if h.kind == "seed-lexicon" and h.resources is not None:
                for src, tgt in h.resources.pairs:
                    seed_targets.setdefault(src, set()).add(tgt)
        by_norm_b: dict[str, list[Token]] = {}
        for b in b_in:
            by_norm_b.setdefault(b.norm, []).append(b)
        for a in a_in:
            for tgt in seed_targets.get(a.norm, ()):
                for b in by_norm_b.get(tgt, ()):
                    points.add(CorrespondencePoint(a.center, b.center))

    if "cognate-lcsr" in kinds:
        if cache is None:
            cache = _LcsrCache(params.lcsr_threshold)
        a_forms = [
            (index_a.tokens[i], index_a.folded[i])
            for i in a_range
            if _letters(index_a.folded[i]) >= 4
        ]
        b_forms = [
            (index_b.tokens[i], index_b.folded[i])
            for i in b_range
            if _letters(index_b.folded[i]) >= 4
        ]
        for a, fa in a_forms:
            for b, fb in b_forms:
                if cache.matches(fa, fb):
                    points.add(CorrespondencePoint(a.center, b.center))

    return points


def _least_squares(points: Sequence[CorrespondencePoint]) -> tuple[float, float] | None:
    n = len(points)
    sx = sum(p.x for p in points)
    sy = sum(p.y for p in points)
    sxx = sum(p.x * p.x for p in points)
    sxy = sum(p.x * p.y for p in points)
    denom = n * sxx - sx * sx
    if denom == 0:
        return None
    slope = (n * sxy - sx * sy) / denom
    intercept = (sy - slope * sx) / n
    return slope, intercept


def chain_rms_error(points: Sequence[CorrespondencePoint]) -> float:
    fit = _least_squares(points)
    if fit is None:
        return math.inf
    slope, intercept = fit
    sq = sum((p.y - (intercept + slope * p.x)) ** 2 for p in points)
    return math.sqrt(sq / len(points))


def accept_chain(
    points: Sequence[CorrespondencePoint], space: BitextSpace, params: MapperParams
) -> bool:
    """Accept a candidate chain iff it is injective, its least-squares slope
    stays within the allowed fraction of the main diagonal slope, and its RMS
    residual is within bounds."""
    if len(points) < 2:
        return False
    xs = {p.x for p in points}
    ys = {p.y for p in points}
    if len(xs) != len(points) or len(ys) != len(points):
        return False
    fit = _least_squares(points)
    if fit is None:
        return False
    slope, intercept = fit
    d = space.diagonal_slope
    if abs(slope - d) > params.max_slope_deviation * d:
        return False
    sq = sum((p.y - (intercept + slope * p.x)) ** 2 for p in points)
    rms = math.sqrt(sq / len(points))
    return rms <= params.max_rms_error


@dataclass(frozen=True)
class MapResult:
    bitext_map: BitextMap
    chains_accepted: int
    rects_searched: int
    note: str = ""


def _find_chain(
    candidates: set[CorrespondencePoint],
    space: BitextSpace,
    params: MapperParams,
    anchor: tuple[float, float],
) -> list[CorrespondencePoint] | None:
    """Greedy first-found chain: candidates ordered by x then by deviation
    from the expected diagonal through the anchor; on rejection the start
    index advances by one."""
    d = space.diagonal_slope
    fx, fy = anchor

    def deviation(p: CorrespondencePoint) -> float:
        return abs(p.y - (fy + d * (p.x - fx)))

    order = sorted(candidates, key=lambda p: (p.x, deviation(p), p.y))
    size = params.chain_size
    for start in range(len(order)):
        if len(order) - start < size:
            break
        first = order[start]
        chain = [first]
        used_x = {first.x}
        used_y = {first.y}
        for p in order[start + 1 :]:
            if p.x in used_x or p.y in used_y:
                continue
            chain.append(p)
            used_x.add(p.x)
            used_y.add(p.y)
            if len(chain) == size:
                break
        if len(chain) == size and accept_chain(chain, space, params):
            return chain
    return None


def map_bitext(
    tokens_a: Sequence[Token],
    tokens_b: Sequence[Token],
    space: BitextSpace,
    heuristics: Sequence[MatchHeuristic],
    params: MapperParams | None = None,
) -> MapResult:
    """Map the bitext by alternating candidate generation and chain selection.

    The search rectangle starts at the origin; each accepted chain moves its
    lower-left corner past the chain's maximal coordinates and resets the
    rectangle size, and each failure widens the rectangle until it covers the
    remaining space. The returned map is injective; when nothing is ever
    accepted the map is empty and the note says so.
    """
    if params is None:
        params = MapperParams()
    if not tokens_a or not tokens_b:
        raise ValueError("both bitext halves must contain tokens")
    d = space.diagonal_slope
    cache = _LcsrCache(params.lcsr_threshold)
    index_a = _WordIndex(tokens_a)
    index_b = _WordIndex(tokens_b)
    result = BitextMap()
    fx, fy = 0.0, 0.0
    width = float(params.initial_rect_chars)
    slack = params.rect_vertical_slack
    chains = 0
    rects = 0
    while fx < space.width - 1 and fy < space.height - 1:
        x_hi = min(fx + width, float(space.width))
        y_hi = min(fy + d * width + slack, float(space.height))
        rect = SearchRect(x_lo=fx, x_hi=x_hi, y_lo=fy, y_hi=y_hi)
        rects += 1
        candidates = _candidates_in_rect(rect, index_a, index_b, heuristics, params, cache)
        chain = _find_chain(candidates, space, params, anchor=(fx, fy))
        if chain is not None:
            for p in chain:
                result.add(p)
            fx = float(max(p.x for p in chain))
            fy = float(max(p.y for p in chain))
            width = float(params.initial_rect_chars)
            slack = params.rect_vertical_slack
            chains += 1
            continue
        covered_all = x_hi >= space.width and y_hi >= space.height
        if covered_all:
            break
        width *= params.search_widening
        slack *= params.search_widening
    note = ""
    if len(result) == 0:
        note = "no chain was ever accepted; the map is empty"
        log.warning(note)
    return MapResult(bitext_map=result, chains_accepted=chains, rects_searched=rects, note=note)
