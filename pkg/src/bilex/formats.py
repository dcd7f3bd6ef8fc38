"""Readers and writers for the flat-text artifacts passed between pipeline
stages. Everything here is deterministic: fixed column orders, sorted rows
where order is not semantic, and no timestamps, so artifact bytes are a pure
function of inputs and parameters."""

from __future__ import annotations

import json
from pathlib import Path
from typing import Iterable, Mapping, Sequence

from .corpus import ParseError, Token, WordList, normalize
from .evaluation import Annotation, SheetEntry
from .geometry import BandPair, BitextMap, CooccurrenceCounts, CorrespondencePoint
from .induction import LexiconEntry

TOKENS_HEADER = "# index\tstart\tend\tword\tcontent\tsurface"
LEXICON_HEADER = "# source\ttarget\tscore\tplateau\tn11\tlink_count"
ANNOTATIONS_HEADER = "# annotator\tentry_id\tverdict\tspecific\tgeneral"


def _rows(path: Path) -> Iterable[tuple[int, str]]:
    for line_no, line in enumerate(path.read_text(encoding="utf-8").splitlines(), start=1):
        if not line.strip() or line.startswith("#"):
            continue
        yield line_no, line


# --- tokens -------------------------------------------------------------------


def write_tokens(path: str | Path, tokens: Sequence[Token]) -> None:
    lines = [TOKENS_HEADER]
    for t in tokens:
        lines.append(
            f"{t.index}\t{t.start}\t{t.end}\t{int(t.is_word)}\t{int(t.is_content)}\t{t.surface}"
        )
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def read_tokens(path: str | Path) -> list[Token]:
    path = Path(path)
    tokens: list[Token] = []
    for line_no, line in _rows(path):
        fields = line.split("\t")
        if len(fields) != 6:
            raise ParseError(str(path), line_no, f"expected 6 token fields, got {len(fields)}")
        index, start, end, is_word, is_content = map(int, fields[:5])
        surface = fields[5]
        tokens.append(
            Token(
                surface=surface,
                start=start,
                end=end,
                index=index,
                norm=normalize(surface),
                is_word=bool(is_word),
                is_content=bool(is_content),
            )
        )
    return tokens


# --- bitext map ---------------------------------------------------------------


def write_map(path: str | Path, bitext_map: BitextMap | Iterable[CorrespondencePoint]) -> None:
    points = bitext_map.points() if isinstance(bitext_map, BitextMap) else sorted(bitext_map)
    lines = ["# x\ty"]
    lines.extend(f"{p.x}\t{p.y}" for p in points)
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def read_map(path: str | Path) -> BitextMap:
    path = Path(path)
    points: list[CorrespondencePoint] = []
    for line_no, line in _rows(path):
        fields = line.split("\t")
        if len(fields) != 2:
            raise ParseError(str(path), line_no, f"expected 'x<TAB>y', got {line!r}")
        points.append(CorrespondencePoint(int(fields[0]), int(fields[1])))
    for prev, cur in zip(points, points[1:]):
        if cur.x <= prev.x:
            raise ParseError(str(path), 0, "map file must be sorted by x")
    return BitextMap(points)


# --- band pairs and counts ------------------------------------------------------


def write_band_pairs(path: str | Path, pairs: Sequence[BandPair]) -> None:
    lines = ["# a_index\tb_index\ta_center\tb_center\tdeviation\ta_type\tb_type"]
    for p in pairs:
        lines.append(
            f"{p.a_index}\t{p.b_index}\t{p.a_center}\t{p.b_center}\t{p.deviation!r}\t{p.a_type}\t{p.b_type}"
        )
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def read_band_pairs(path: str | Path) -> list[BandPair]:
    path = Path(path)
    pairs: list[BandPair] = []
    for line_no, line in _rows(path):
        fields = line.split("\t")
        if len(fields) != 7:
            raise ParseError(str(path), line_no, f"expected 7 pair fields, got {len(fields)}")
        pairs.append(
            BandPair(
                a_index=int(fields[0]),
                b_index=int(fields[1]),
                a_center=int(fields[2]),
                b_center=int(fields[3]),
                deviation=float(fields[4]),
                a_type=fields[5],
                b_type=fields[6],
            )
        )
    return pairs


def write_counts(path: str | Path, counts: CooccurrenceCounts) -> None:
    lines = ["# kind\tkey...\tcount"]
    for (u, v), n in sorted(counts.joint.items()):
        lines.append(f"J\t{u}\t{v}\t{n}")
    for u, n in sorted(counts.source_marginal.items()):
        lines.append(f"S\t{u}\t{n}")
    for v, n in sorted(counts.target_marginal.items()):
        lines.append(f"T\t{v}\t{n}")
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def read_counts(path: str | Path) -> CooccurrenceCounts:
    path = Path(path)
    joint: dict[tuple[str, str], int] = {}
    source: dict[str, int] = {}
    target: dict[str, int] = {}
    for line_no, line in _rows(path):
        fields = line.split("\t")
        kind = fields[0]
        if kind == "J" and len(fields) == 4:
            joint[(fields[1], fields[2])] = int(fields[3])
        elif kind == "S" and len(fields) == 3:
            source[fields[1]] = int(fields[2])
        elif kind == "T" and len(fields) == 3:
            target[fields[1]] = int(fields[2])
        else:
            raise ParseError(str(path), line_no, f"unrecognized counts row: {line!r}")
    return CooccurrenceCounts(
        joint=joint,
        source_marginal=source,
        target_marginal=target,
        total_pairs=sum(joint.values()),
    )


# --- lexicon ---------------------------------------------------------------------


def lexicon_sort_key(entry: LexiconEntry):
    return (entry.plateau, -entry.score, entry.source, entry.target)


def write_lexicon(path: str | Path, entries: Iterable[LexiconEntry]) -> None:
    lines = [LEXICON_HEADER]
    for e in sorted(entries, key=lexicon_sort_key):
        lines.append(
            f"{e.source}\t{e.target}\t{e.score:.6f}\t{e.plateau}\t{e.n11}\t{e.link_count}"
        )
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def read_lexicon(path: str | Path) -> list[LexiconEntry]:
    path = Path(path)
    entries: list[LexiconEntry] = []
    for line_no, line in _rows(path):
        fields = line.split("\t")
        if len(fields) != 6:
            raise ParseError(str(path), line_no, f"expected 6 lexicon fields, got {len(fields)}")
        entries.append(
            LexiconEntry(
                source=fields[0],
                target=fields[1],
                score=float(fields[2]),
                plateau=int(fields[3]),
                n11=int(fields[4]),
                link_count=int(fields[5]),
            )
        )
    return entries


# --- word lists --------------------------------------------------------------------


def write_word_list(path: str | Path, word_list: WordList | Iterable[str]) -> None:
    entries = word_list.entries if isinstance(word_list, WordList) else word_list
    Path(path).write_text("\n".join(sorted(entries)) + "\n", encoding="utf-8")


def write_pair_rows(path: str | Path, pairs: Iterable[tuple[str, str]]) -> None:
    lines = [f"{a}\t{b}" for a, b in sorted(pairs)]
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


# --- annotations ---------------------------------------------------------------------


def write_annotations(path: str | Path, annotations: Sequence[Annotation]) -> None:
    lines = [ANNOTATIONS_HEADER]
    for a in annotations:
        lines.append(
            f"{a.annotator}\t{a.entry_id}\t{a.verdict}\t{int(a.specific)}\t{int(a.general)}"
        )
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def annotations_to_text(annotations: Sequence[Annotation]) -> str:
    lines = [ANNOTATIONS_HEADER]
    for a in annotations:
        lines.append(
            f"{a.annotator}\t{a.entry_id}\t{a.verdict}\t{int(a.specific)}\t{int(a.general)}"
        )
    return "\n".join(lines) + "\n"


def _annotation_from_fields(annotator, entry_id, verdict, specific, general) -> Annotation:
    return Annotation(
        annotator=annotator,
        entry_id=entry_id,
        verdict=verdict,
        specific=bool(int(specific)) if isinstance(specific, str) else bool(specific),
        general=bool(int(general)) if isinstance(general, str) else bool(general),
    )


def read_annotations(path: str | Path) -> list[Annotation]:
    """Accepts the tab-separated format or a JSON list of records."""
    path = Path(path)
    if path.suffix == ".json":
        records = json.loads(path.read_text(encoding="utf-8"))
        return [
            _annotation_from_fields(
                r["annotator"], r["entry_id"], r["verdict"], r.get("specific", False), r.get("general", False)
            )
            for r in records
        ]
    annotations: list[Annotation] = []
    for line_no, line in _rows(path):
        fields = line.split("\t")
        if len(fields) != 5:
            raise ParseError(str(path), line_no, f"expected 5 annotation fields, got {len(fields)}")
        annotations.append(_annotation_from_fields(*fields))
    return annotations


# --- annotation sheet ------------------------------------------------------------------


def write_sheet(path: str | Path, sheet: Sequence[SheetEntry], meta: Mapping | None = None) -> None:
    doc = {
        "meta": dict(meta or {}),
        "entries": [
            {
                "entry_id": e.entry_id,
                "source": e.source,
                "target": e.target,
                "variant": e.variant,
                "pos_hint": e.pos_hint,
            }
            for e in sheet
        ],
    }
    Path(path).write_text(json.dumps(doc, sort_keys=True, indent=1) + "\n", encoding="utf-8")


def read_sheet(path: str | Path) -> tuple[list[SheetEntry], dict]:
    doc = json.loads(Path(path).read_text(encoding="utf-8"))
    entries = [
        SheetEntry(
            entry_id=e["entry_id"],
            source=e["source"],
            target=e["target"],
            variant=e["variant"],
            pos_hint=e.get("pos_hint"),
        )
        for e in doc["entries"]
    ]
    return entries, doc.get("meta", {})


# --- flat key=value config ----------------------------------------------------------------


def parse_config(path: str | Path) -> dict[str, str]:
    path = Path(path)
    config: dict[str, str] = {}
    for line_no, raw in enumerate(path.read_text(encoding="utf-8").splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ParseError(str(path), line_no, f"expected key=value, got {line!r}")
        key, _, value = line.partition("=")
        config[key.strip()] = value.strip()
    return config
