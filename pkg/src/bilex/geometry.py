"""Bitext geometry: injective correspondence maps, monotonization,
piecewise-linear interpolation, and band co-occurrence counting.

A bitext map relates character positions across the two halves. Because the
raw map may contain crossing correspondences, interpolation first requires
monotonization: each minimal non-monotonic run of points collapses to the
lower-left and upper-right corners of its minimum enclosing rectangle.
Two tokens then co-occur when the target token's center lies within a
vertical distance delta of the interpolated map at the source token's center.
"""

from __future__ import annotations

from bisect import bisect_left, bisect_right
from dataclasses import dataclass
from typing import Iterable, Iterator, Mapping, Sequence

from .corpus import Token


class InjectivityError(ValueError):
    """Two correspondence points share an x or a y position."""


class UndefinedMapError(ValueError):
    """An operation needs a non-empty bitext map."""


@dataclass(frozen=True)
class BitextSpace:
    """The rectangle [0, width) x [0, height) of character positions."""

    width: int
    height: int

    def __post_init__(self) -> None:
        if self.width <= 0 or self.height <= 0:
            raise ValueError(f"bitext space must be positive, got {self.width}x{self.height}")

    @property
    def diagonal_slope(self) -> float:
        return self.height / self.width


@dataclass(frozen=True, order=True, slots=True)
class CorrespondencePoint:
    x: int
    y: int

    def __post_init__(self) -> None:
        if self.x < 0 or self.y < 0:
            raise ValueError(f"correspondence point must be non-negative, got ({self.x}, {self.y})")

    def in_space(self, space: BitextSpace) -> bool:
        return 0 <= self.x < space.width and 0 <= self.y < space.height


class BitextMap:
    """An injective partial function between character positions.

    No two points may share an x, and no two may share a y. ``add`` rejects
    violating insertions (returns False) so callers can keep first-accepted
    points; the constructor raises on duplicates instead.
    """

    def __init__(self, points: Iterable[CorrespondencePoint] = ()) -> None:
        self._by_x: dict[int, CorrespondencePoint] = {}
        self._ys: set[int] = set()
        for p in points:
            if not self.add(p):
                raise InjectivityError(f"point {p} conflicts with an existing point")

    def add(self, point: CorrespondencePoint) -> bool:
        if point.x in self._by_x or point.y in self._ys:
            return False
        self._by_x[point.x] = point
        self._ys.add(point.y)
        return True

    def points(self) -> list[CorrespondencePoint]:
        return sorted(self._by_x.values())

    def __len__(self) -> int:
        return len(self._by_x)

    def __iter__(self) -> Iterator[CorrespondencePoint]:
        return iter(self.points())

    def __contains__(self, point: CorrespondencePoint) -> bool:
        return self._by_x.get(point.x) == point


@dataclass(frozen=True)
class MonotonicMap:
    """Correspondence points strictly increasing in both coordinates."""

    points: tuple[CorrespondencePoint, ...]

    def __post_init__(self) -> None:
        for prev, cur in zip(self.points, self.points[1:]):
            if not (prev.x < cur.x and prev.y < cur.y):
                raise ValueError(f"points not strictly monotonic: {prev} then {cur}")

    def __len__(self) -> int:
        return len(self.points)


def monotonize(bitext_map: BitextMap) -> MonotonicMap:
    """Collapse minimal non-monotonic point sets to their MER corners.

    Walks points in x order keeping a stack of groups whose y-ranges are
    strictly increasing; a new point merges every earlier group whose y-range
    it overlaps (this is the closure that keeps interpolation well-defined).
    Singleton groups survive verbatim; larger groups contribute the lower-left
    and upper-right corners of their minimum enclosing rectangle.
    """
    pts = bitext_map.points()
    # stack entries: (x_min, x_max, y_min, y_max, size)
    stack: list[tuple[int, int, int, int, int]] = []
    for p in pts:
        x_min, x_max, y_min, y_max, size = p.x, p.x, p.y, p.y, 1
        while stack and stack[-1][3] >= y_min:
            gx_min, _, gy_min, gy_max, gsize = stack.pop()
            x_min = gx_min
            y_min = min(y_min, gy_min)
            y_max = max(y_max, gy_max)
            size += gsize
        stack.append((x_min, x_max, y_min, y_max, size))
    out: list[CorrespondencePoint] = []
    for x_min, x_max, y_min, y_max, size in stack:
        if size == 1:
            out.append(CorrespondencePoint(x_min, y_min))
        else:
            out.append(CorrespondencePoint(x_min, y_min))
            out.append(CorrespondencePoint(x_max, y_max))
    return MonotonicMap(points=tuple(out))


def interpolate(mono: MonotonicMap, space: BitextSpace, x: float) -> float:
    """Evaluate the piecewise-linear map at x.

    Between points it interpolates linearly; before the first point it runs
    toward the origin corner (0, 0), after the last toward the terminal
    corner (width, height).
    """
    pts = mono.points
    if not pts:
        raise UndefinedMapError("cannot interpolate an empty map")
    if x <= pts[0].x:
        if x == pts[0].x:
            return float(pts[0].y)
        x0, y0, x1, y1 = 0.0, 0.0, pts[0].x, pts[0].y
    elif x >= pts[-1].x:
        if x == pts[-1].x:
            return float(pts[-1].y)
        x0, y0 = pts[-1].x, pts[-1].y
        x1, y1 = float(space.width), float(space.height)
    else:
        xs = [p.x for p in pts]
        i = bisect_right(xs, x) - 1
        x0, y0 = pts[i].x, pts[i].y
        x1, y1 = pts[i + 1].x, pts[i + 1].y
    return y0 + (y1 - y0) * (x - x0) / (x1 - x0)


@dataclass(frozen=True, slots=True)
class BandPair:
    """One token-instance pair inside the delta band."""

    a_index: int
    b_index: int
    a_type: str
    b_type: str
    a_center: int
    b_center: int
    deviation: float


@dataclass(frozen=True)
class CooccurrenceCounts:
    """Type-level co-occurrence counts from one banded scan.

    ``joint`` counts banded instance pairs per (source type, target type).
    The marginals count all token instances of each type in its half
    (content-filtered if the scan was), independent of delta.
    """

    joint: Mapping[tuple[str, str], int]
    source_marginal: Mapping[str, int]
    target_marginal: Mapping[str, int]
    total_pairs: int

    @property
    def source_total(self) -> int:
        return sum(self.source_marginal.values())

    @property
    def target_total(self) -> int:
        return sum(self.target_marginal.values())


def _eligible(tokens: Sequence[Token], content_only: bool) -> list[Token]:
    if content_only:
        return [t for t in tokens if t.is_content]
    return list(tokens)


def banded_pairs(
    tokens_a: Sequence[Token],
    tokens_b: Sequence[Token],
    mono: MonotonicMap,
    space: BitextSpace,
    delta: float,
    content_only: bool = False,
) -> list[BandPair]:
    """Enumerate token-instance pairs within delta of the interpolated map.

    The pair (a, b) is in the band iff |b.center - map(a.center)| <= delta.
    Uses a bisect window over target centers, then applies the exact
    predicate, so results match the all-pairs definition exactly.
    """
    if delta <= 0:
        raise ValueError(f"delta must be positive, got {delta}")
    if not mono.points:
        raise UndefinedMapError("co-occurrence counting needs a non-empty map")
    a_tokens = _eligible(tokens_a, content_only)
    b_tokens = _eligible(tokens_b, content_only)
    b_centers = [t.center for t in b_tokens]
    pairs: list[BandPair] = []
    for a in a_tokens:
        ya = interpolate(mono, space, a.center)
        lo = bisect_left(b_centers, ya - delta - 1.0)
        hi = bisect_right(b_centers, ya + delta + 1.0)
        for b in b_tokens[lo:hi]:
            dev = abs(b.center - ya)
            if dev <= delta:
                pairs.append(
                    BandPair(
                        a_index=a.index,
                        b_index=b.index,
                        a_type=a.norm,
                        b_type=b.norm,
                        a_center=a.center,
                        b_center=b.center,
                        deviation=dev,
                    )
                )
    return pairs


def count_cooccurrences(
    tokens_a: Sequence[Token],
    tokens_b: Sequence[Token],
    mono: MonotonicMap,
    space: BitextSpace,
    delta: float,
    content_only: bool = False,
) -> CooccurrenceCounts:
    """Count banded co-occurrences per type pair, plus instance marginals."""
    pairs = banded_pairs(tokens_a, tokens_b, mono, space, delta, content_only)
    return counts_from_pairs(pairs, tokens_a, tokens_b, content_only)


def counts_from_pairs(
    pairs: Sequence[BandPair],
    tokens_a: Sequence[Token],
    tokens_b: Sequence[Token],
    content_only: bool = False,
) -> CooccurrenceCounts:
    joint: dict[tuple[str, str], int] = {}
    for p in pairs:
        key = (p.a_type, p.b_type)
        joint[key] = joint.get(key, 0) + 1
    source_marginal: dict[str, int] = {}
    for t in _eligible(tokens_a, content_only):
        source_marginal[t.norm] = source_marginal.get(t.norm, 0) + 1
    target_marginal: dict[str, int] = {}
    for t in _eligible(tokens_b, content_only):
        target_marginal[t.norm] = target_marginal.get(t.norm, 0) + 1
    return CooccurrenceCounts(
        joint=joint,
        source_marginal=source_marginal,
        target_marginal=target_marginal,
        total_pairs=len(pairs),
    )
