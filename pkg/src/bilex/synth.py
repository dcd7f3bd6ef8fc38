"""Deterministic synthetic bitext generation with recorded ground truth.

The generator builds a random true lexicon (content pairs, a configurable
fraction of them cognates that are guaranteed to pass the LCSR threshold,
plus high-frequency function-word pairs), then renders parallel segments
with controllable word-order permutation and omission noise. The exact
correspondence point of every surviving token pair is recorded, so mapping
accuracy and lexicon precision/recall can be measured against truth.
"""

from __future__ import annotations

import random
import string
from dataclasses import dataclass

from .corpus import TextHalf, WordList
from .geometry import CorrespondencePoint

_ALPHABET = string.ascii_lowercase


@dataclass(frozen=True)
class SyntheticConfig:
    lexicon_size: int = 200
    segment_count: int = 300
    segment_tokens: tuple[int, int] = (8, 16)
    cognate_rate: float = 0.3
    omission_rate: float = 0.1
    permutation_window: int = 1
    function_word_count: int = 12
    function_word_rate: float = 0.35
    zipf_exponent: float = 1.05
    word_length: tuple[int, int] = (4, 10)
    guaranteed_lcsr: float = 0.7
    seed: int = 0

    def __post_init__(self) -> None:
        if self.lexicon_size < 1 or self.segment_count < 1:
            raise ValueError("lexicon_size and segment_count must be at least 1")
        if self.permutation_window < 1:
            raise ValueError("permutation_window must be at least 1")
        if not 0.0 <= self.omission_rate < 1.0:
            raise ValueError("omission_rate must be in [0, 1)")


@dataclass(frozen=True)
class TruePair:
    source: str
    target: str
    cognate: bool
    function: bool


@dataclass(frozen=True)
class TruePoint:
    """Ground-truth correspondence of one surviving token instance pair."""

    x: int
    y: int
    source: str
    target: str


@dataclass(frozen=True)
class SyntheticBitext:
    config: SyntheticConfig
    half_a: TextHalf
    half_b: TextHalf
    pairs: tuple[TruePair, ...]
    true_points: tuple[TruePoint, ...]
    omitted_count: int

    @property
    def content_pairs(self) -> list[TruePair]:
        return [p for p in self.pairs if not p.function]

    @property
    def stoplist_a(self) -> WordList:
        return WordList(
            entries=frozenset(p.source for p in self.pairs if p.function), purpose="stoplist"
        )

    @property
    def stoplist_b(self) -> WordList:
        return WordList(
            entries=frozenset(p.target for p in self.pairs if p.function), purpose="stoplist"
        )

    def true_map_points(self) -> list[CorrespondencePoint]:
        return [CorrespondencePoint(t.x, t.y) for t in self.true_points]


def _new_word(rng: random.Random, length: tuple[int, int], used: set[str]) -> str:
    while True:
        n = rng.randint(*length)
        word = "".join(rng.choice(_ALPHABET) for _ in range(n))
        if word not in used:
            used.add(word)
            return word


def _cognate_of(rng: random.Random, source: str, min_ratio: float, used: set[str]) -> str:
    # Replacing at most floor(len * (1 - min_ratio)) trailing characters keeps
    # the common prefix long enough that LCSR >= min_ratio by construction;
    # collision fallbacks grow the suffix one character at a time, which
    # still leaves the ratio above 0.58 for all configured word lengths.
    k = max(1, int(len(source) * (1.0 - min_ratio)))
    prefix = source[: len(source) - k]
    suffix_len = k
    while True:
        for _ in range(200):
            suffix = "".join(rng.choice(_ALPHABET) for _ in range(suffix_len))
            candidate = prefix + suffix
            if candidate != source and candidate not in used:
                used.add(candidate)
                return candidate
        suffix_len += 1


def generate_synthetic_bitext(config: SyntheticConfig) -> SyntheticBitext:
    """Generate both halves plus ground truth, deterministically per seed."""
    rng = random.Random(config.seed)
    used_sources: set[str] = set()
    used_targets: set[str] = set()

    pairs: list[TruePair] = []
    for _ in range(config.lexicon_size):
        source = _new_word(rng, config.word_length, used_sources)
        if rng.random() < config.cognate_rate:
            target = _cognate_of(rng, source, config.guaranteed_lcsr, used_targets)
            cognate = True
        else:
            target = _new_word(rng, config.word_length, used_targets)
            cognate = False
        pairs.append(TruePair(source=source, target=target, cognate=cognate, function=False))
    function_pairs: list[TruePair] = []
    for _ in range(config.function_word_count):
        source = _new_word(rng, (2, 3), used_sources)
        target = _new_word(rng, (2, 3), used_targets)
        function_pairs.append(TruePair(source=source, target=target, cognate=False, function=True))

    weights = [1.0 / (rank + 1) ** config.zipf_exponent for rank in range(config.lexicon_size)]

    # Items are (pair, serial); the serial keeps instance identity through
    # permutation and omission so ground truth points stay exact.
    serial = 0
    segments: list[list[tuple[TruePair, int]]] = []
    for _ in range(config.segment_count):
        k = rng.randint(*config.segment_tokens)
        items: list[tuple[TruePair, int]] = []
        for pair in rng.choices(pairs, weights=weights, k=k):
            if function_pairs and rng.random() < config.function_word_rate:
                items.append((rng.choice(function_pairs), serial))
                serial += 1
            items.append((pair, serial))
            serial += 1
        segments.append(items)

    a_parts: list[str] = []
    b_parts: list[str] = []
    a_centers: dict[int, int] = {}
    b_centers: dict[int, int] = {}
    a_cursor = 0
    b_cursor = 0
    omitted = 0
    surviving: list[tuple[TruePair, int]] = []

    for items in segments:
        b_items = list(items)
        if config.permutation_window > 1:
            for i in range(0, len(b_items), config.permutation_window):
                block = b_items[i : i + config.permutation_window]
                rng.shuffle(block)
                b_items[i : i + config.permutation_window] = block
        kept_b: list[tuple[TruePair, int]] = []
        for item in b_items:
            if config.omission_rate > 0 and rng.random() < config.omission_rate:
                omitted += 1
            else:
                kept_b.append(item)

        for pair, sid in items:
            word = pair.source
            a_centers[sid] = a_cursor + (len(word) - 1) // 2
            a_parts.append(word)
            a_cursor += len(word) + 1
        a_parts.append(".")
        a_cursor += 2  # ". " then segment newline handled below
        a_parts.append("\n")
        for pair, sid in kept_b:
            word = pair.target
            b_centers[sid] = b_cursor + (len(word) - 1) // 2
            b_parts.append(word)
            b_cursor += len(word) + 1
        b_parts.append(".")
        b_cursor += 2
        b_parts.append("\n")
        surviving.extend(item for item in items if item[1] in b_centers)

    def render(parts: list[str]) -> str:
        out: list[str] = []
        for part in parts:
            if part == "\n":
                out.append("\n")
            else:
                out.append(part)
                out.append(" ")
        # Drop the trailing space before each newline to match cursors.
        text = "".join(out).replace(" \n", "\n")
        return text

    content_a = render(a_parts)
    content_b = render(b_parts)

    true_points = tuple(
        TruePoint(x=a_centers[sid], y=b_centers[sid], source=pair.source, target=pair.target)
        for pair, sid in surviving
    )
    return SyntheticBitext(
        config=config,
        half_a=TextHalf(language_tag="synth-a", content=content_a),
        half_b=TextHalf(language_tag="synth-b", content=content_b),
        pairs=tuple(pairs + function_pairs),
        true_points=true_points,
        omitted_count=omitted,
    )
