"""Bilingual concordances: paired context windows around banded instances of
a candidate pair, for annotator display and CLI inspection."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .corpus import TextHalf, Token
from .geometry import BitextSpace, MonotonicMap, UndefinedMapError, interpolate

DEFAULT_WINDOW = 80
DEFAULT_LIMIT = 10


@dataclass(frozen=True)
class ConcordanceInstance:
    """One usage of a pair in context.

    Focus offsets are relative to the window strings so display layers can
    mark the focus token however they like; spans are absolute character
    ranges in the halves, which makes every instance reproducible from the
    stored map and delta.
    """

    source_window: str
    target_window: str
    a_center: int
    b_center: int
    source_focus: tuple[int, int]
    target_focus: tuple[int, int]
    source_span: tuple[int, int]
    target_span: tuple[int, int]


def _snap_window(
    content: str, tokens: Sequence[Token], focus: Token, window: int
) -> tuple[int, int]:
    lo = max(0, focus.start - window)
    hi = min(len(content), focus.end + window)
    # Snap outward so the window never cuts a token in half.
    for t in tokens:
        if t.start < lo < t.end:
            lo = t.start
        if t.start < hi < t.end:
            hi = t.end
        if t.start > hi:
            break
    return lo, hi


def build_concordance(
    pair: tuple[str, str],
    half_a: TextHalf,
    half_b: TextHalf,
    tokens_a: Sequence[Token],
    tokens_b: Sequence[Token],
    mono: MonotonicMap,
    space: BitextSpace,
    delta: float,
    limit: int = DEFAULT_LIMIT,
    window: int = DEFAULT_WINDOW,
) -> list[ConcordanceInstance]:
    """Collect up to ``limit`` banded instances of the pair, in source order.

    For each source-half occurrence of the source type, the closest banded
    occurrence of the target type (by deviation from the interpolated map)
    becomes its counterpart; occurrences with no banded counterpart are
    skipped. An unknown or never-banded pair yields an empty list.
    """
    if limit < 1:
        raise ValueError("limit must be at least 1")
    if not mono.points:
        raise UndefinedMapError("concordances need a non-empty map")
    source_type, target_type = pair
    b_matches = [t for t in tokens_b if t.is_word and t.norm == target_type]
    if not b_matches:
        return []
    instances: list[ConcordanceInstance] = []
    for a in tokens_a:
        if not a.is_word or a.norm != source_type:
            continue
        ya = interpolate(mono, space, a.center)
        best: tuple[float, int, Token] | None = None
        for b in b_matches:
            dev = abs(b.center - ya)
            if dev <= delta and (best is None or (dev, b.center) < best[:2]):
                best = (dev, b.center, b)
        if best is None:
            continue
        b = best[2]
        a_lo, a_hi = _snap_window(half_a.content, tokens_a, a, window)
        b_lo, b_hi = _snap_window(half_b.content, tokens_b, b, window)
        instances.append(
            ConcordanceInstance(
                source_window=half_a.content[a_lo:a_hi],
                target_window=half_b.content[b_lo:b_hi],
                a_center=a.center,
                b_center=b.center,
                source_focus=(a.start - a_lo, a.end - a_lo),
                target_focus=(b.start - b_lo, b.end - b_lo),
                source_span=(a_lo, a_hi),
                target_span=(b_lo, b_hi),
            )
        )
        if len(instances) == limit:
            break
    return instances


def format_instance(instance: ConcordanceInstance) -> str:
    """Two-line plain-text block with the focus token bracketed."""
    lines = []
    for text, (fs, fe) in (
        (instance.source_window, instance.source_focus),
        (instance.target_window, instance.target_focus),
    ):
        lines.append(f"{text[:fs]}[{text[fs:fe]}]{text[fe:]}")
    return "\n".join(lines)
