"""Bitext corpus input: tokenization, normalization, word lists and pair lists.

Every downstream stage (mapping, co-occurrence counting, concordances)
addresses text through character offsets into a half's content string, so
tokenization must be lossless: each token records the exact slice it came
from, and everything between tokens is whitespace.
"""

from __future__ import annotations

import logging
import unicodedata
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Iterator

log = logging.getLogger(__name__)

_HYPHENS = frozenset({"-", "‐", "‑"})

WORD_LIST_PURPOSES = ("stoplist", "seed-source", "seed-target")


class CorpusError(Exception):
    """Base class for corpus input problems."""


class EncodingError(CorpusError):
    """Input bytes are not valid text in the declared encoding."""

    def __init__(self, path: str, byte_offset: int, encoding: str) -> None:
        super().__init__(
            f"{path}: undecodable byte sequence at byte offset {byte_offset} "
            f"(declared encoding: {encoding})"
        )
        self.path = path
        self.byte_offset = byte_offset
        self.encoding = encoding


class ParseError(CorpusError):
    """A word-list or pair-list line could not be parsed."""

    def __init__(self, path: str, line_no: int, message: str) -> None:
        super().__init__(f"{path}:{line_no}: {message}")
        self.path = path
        self.line_no = line_no


@dataclass(frozen=True)
class TextHalf:
    """One half of a bitext."""

    language_tag: str
    content: str

    def __post_init__(self) -> None:
        if not self.language_tag:
            raise ValueError("language_tag must be non-empty")

    @property
    def length(self) -> int:
        return len(self.content)


@dataclass(frozen=True, slots=True)
class Token:
    """A tokenized slice of a text half.

    ``center`` is the character position the geometric mapper anchors
    correspondence points to. ``is_word`` marks letter/digit runs (as opposed
    to punctuation runs); ``is_content`` additionally requires at least one
    letter and absence from the stop list.
    """

    surface: str
    start: int
    end: int
    index: int
    norm: str
    is_word: bool
    is_content: bool

    def __post_init__(self) -> None:
        if not self.start < self.end:
            raise ValueError(f"token offsets must satisfy start < end, got ({self.start}, {self.end})")

    @property
    def center(self) -> int:
        return (self.start + self.end - 1) // 2


@dataclass(frozen=True)
class TokenizerConfig:
    """Tokenization rules.

    Hyphens surrounded by letters/digits stay inside one token ("rw-r"),
    apostrophes always split ("l'espace" -> l / ' / espace). The stop list
    only affects the content flag, never segmentation.
    """

    stoplist: frozenset[str] = frozenset()
    join_hyphens: bool = True


def normalize(surface: str, fold_diacritics: bool = False) -> str:
    """Case-fold a surface form; optionally strip diacritics.

    Idempotent in both modes. Diacritic folding decomposes canonically and
    drops nonspacing marks, so "Relâché" -> "relache"; the default keeps
    accents so lexicon output stays readable.
    """
    folded = surface.casefold()
    if fold_diacritics:
        decomposed = unicodedata.normalize("NFD", folded)
        folded = "".join(ch for ch in decomposed if unicodedata.category(ch) != "Mn")
    return folded


def _is_word_char(ch: str) -> bool:
    # Combining marks count as word chars so NFD-encoded accents do not
    # split tokens.
    return ch.isalnum() or unicodedata.category(ch) in ("Mn", "Mc")


def tokenize(half: TextHalf, config: TokenizerConfig | None = None) -> list[Token]:
    """Split a text half into word and punctuation tokens.

    Word tokens are maximal letter/digit runs (with internal hyphens when
    configured); punctuation tokens are maximal runs of other non-whitespace
    characters. Offsets are non-overlapping and strictly increasing, and the
    gaps between tokens contain only whitespace.
    """
    if config is None:
        config = TokenizerConfig()
    text = half.content
    n = len(text)
    tokens: list[Token] = []
    i = 0
    while i < n:
        ch = text[i]
        if ch.isspace():
            i += 1
            continue
        start = i
        if _is_word_char(ch):
            i += 1
            while i < n:
                c = text[i]
                if _is_word_char(c):
                    i += 1
                elif (
                    config.join_hyphens
                    and c in _HYPHENS
                    and i + 1 < n
                    and _is_word_char(text[i + 1])
                ):
                    i += 1
                else:
                    break
            is_word = True
        else:
            i += 1
            while i < n and not text[i].isspace() and not _is_word_char(text[i]):
                i += 1
            is_word = False
        surface = text[start:i]
        norm = normalize(surface)
        has_letter = any(c.isalpha() for c in surface)
        is_content = is_word and has_letter and norm not in config.stoplist
        tokens.append(
            Token(
                surface=surface,
                start=start,
                end=i,
                index=len(tokens),
                norm=norm,
                is_word=is_word,
                is_content=is_content,
            )
        )
    return tokens


def read_text_half(path: str | Path, language_tag: str, encoding: str = "utf-8") -> TextHalf:
    """Load one half of a bitext, reporting the byte offset of bad input."""
    raw = Path(path).read_bytes()
    try:
        content = raw.decode(encoding)
    except UnicodeDecodeError as exc:
        raise EncodingError(str(path), exc.start, encoding) from exc
    return TextHalf(language_tag=language_tag, content=content)


@dataclass(frozen=True)
class WordList:
    """A set of normalized word forms with a declared purpose."""

    entries: frozenset[str]
    purpose: str

    def __post_init__(self) -> None:
        if self.purpose not in WORD_LIST_PURPOSES:
            raise ValueError(f"unknown word list purpose: {self.purpose!r}")

    def __contains__(self, form: str) -> bool:
        return form in self.entries


@dataclass(frozen=True)
class PairList:
    """A set of normalized (source form, target form) pairs."""

    pairs: frozenset[tuple[str, str]]

    def __contains__(self, pair: tuple[str, str]) -> bool:
        return pair in self.pairs

    def __len__(self) -> int:
        return len(self.pairs)


def _data_lines(path: Path) -> Iterator[tuple[int, str]]:
    for line_no, line in enumerate(path.read_text(encoding="utf-8").splitlines(), start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        yield line_no, stripped


def load_word_list(
    path: str | Path, purpose: str, fold_diacritics: bool = False
) -> WordList:
    """Load a one-form-per-line word list; duplicates are warned about."""
    path = Path(path)
    entries: set[str] = set()
    duplicates: list[int] = []
    for line_no, line in _data_lines(path):
        if any(c.isspace() for c in line):
            raise ParseError(str(path), line_no, f"expected a single form, got {line!r}")
        form = normalize(line, fold_diacritics=fold_diacritics)
        if form in entries:
            duplicates.append(line_no)
        entries.add(form)
    if duplicates:
        log.warning(
            "%s: %d duplicate entries ignored (lines %s)",
            path,
            len(duplicates),
            ", ".join(map(str, duplicates)),
        )
    return WordList(entries=frozenset(entries), purpose=purpose)


def load_pair_list(path: str | Path, fold_diacritics: bool = False) -> PairList:
    """Load a tab-separated pair list ('#' lines ignored); duplicates warned."""
    path = Path(path)
    pairs: set[tuple[str, str]] = set()
    duplicates: list[int] = []
    for line_no, line in _data_lines(path):
        fields = line.split("\t")
        if len(fields) != 2 or not fields[0].strip() or not fields[1].strip():
            raise ParseError(
                str(path), line_no, f"expected two tab-separated forms, got {line!r}"
            )
        pair = (
            normalize(fields[0].strip(), fold_diacritics=fold_diacritics),
            normalize(fields[1].strip(), fold_diacritics=fold_diacritics),
        )
        if pair in pairs:
            duplicates.append(line_no)
        pairs.add(pair)
    if duplicates:
        log.warning(
            "%s: %d duplicate pairs ignored (lines %s)",
            path,
            len(duplicates),
            ", ".join(map(str, duplicates)),
        )
    return PairList(pairs=frozenset(pairs))


def pair_list_from_pairs(pairs: Iterable[tuple[str, str]]) -> PairList:
    return PairList(pairs=frozenset(pairs))
