"""Local HTTP review service: serves candidate entries with their bilingual
concordances, persists annotations in an append-only log, and exposes live
precision/agreement reports.

Persistence is a single log file of length-prefixed, checksummed records;
corrections append superseding records and the latest record per
(entry, annotator) wins. A partially written trailing record (crash) is
discarded on restart, so exports only ever contain fully appended records.
"""

from __future__ import annotations

import json
import logging
import mimetypes
import os
import struct
import threading
import zlib
from dataclasses import dataclass
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from pathlib import Path
from typing import Sequence
from urllib.parse import parse_qs, urlparse

from .concordance import build_concordance
from .corpus import TextHalf, read_text_half
from .evaluation import Annotation, AnnotationDataError, group_annotation, kappa_suite, precision_summary
from .formats import annotations_to_text, read_map, read_sheet, read_tokens
from .geometry import BitextSpace, MonotonicMap, monotonize
from .manifest import file_sha256

log = logging.getLogger(__name__)

_RECORD_HEADER = struct.Struct(">II")  # payload length, crc32


class ServiceStartupError(Exception):
    """The service refused to start (artifact mismatch, bad config)."""


class AnnotationLog:
    """Append-only record log with per-record framing and checksums."""

    def __init__(self, path: str | Path) -> None:
        self.path = Path(path)
        self._records: list[dict] = []
        self._valid_bytes = 0
        if self.path.exists():
            self._load()

    def _load(self) -> None:
        data = self.path.read_bytes()
        offset = 0
        while offset + _RECORD_HEADER.size <= len(data):
            length, checksum = _RECORD_HEADER.unpack_from(data, offset)
            start = offset + _RECORD_HEADER.size
            end = start + length
            if end > len(data):
                break  # partial trailing record
            payload = data[start:end]
            if zlib.crc32(payload) != checksum:
                break
            try:
                self._records.append(json.loads(payload.decode("utf-8")))
            except (UnicodeDecodeError, json.JSONDecodeError):
                break
            offset = end
        self._valid_bytes = offset
        if offset < len(data):
            log.warning(
                "%s: discarding %d trailing bytes (partial record)",
                self.path,
                len(data) - offset,
            )

    def append(self, record: dict) -> None:
        payload = json.dumps(record, sort_keys=True).encode("utf-8")
        frame = _RECORD_HEADER.pack(len(payload), zlib.crc32(payload)) + payload
        # Drop any partial tail before the first new append after a crash.
        if self.path.exists() and self.path.stat().st_size != self._valid_bytes:
            with open(self.path, "r+b") as handle:
                handle.truncate(self._valid_bytes)
        with open(self.path, "ab") as handle:
            handle.write(frame)
            handle.flush()
            os.fsync(handle.fileno())
        self._valid_bytes += len(frame)
        self._records.append(record)

    def records(self) -> list[dict]:
        return list(self._records)

    def __len__(self) -> int:
        return len(self._records)


@dataclass(frozen=True)
class ServiceConfig:
    sheet_path: Path
    text_a: Path
    text_b: Path
    tokens_a: Path
    tokens_b: Path
    map_path: Path
    log_path: Path
    session_path: Path
    annotators: tuple[str, ...] = ("A1", "A2", "A3", "A4", "A5", "A6")
    delta: float = 100.0
    concord_limit: int = 10
    window: int = 80
    quorum: int = 3
    host: str = "127.0.0.1"
    port: int = 8765
    ui_dir: Path | None = None


@dataclass(frozen=True)
class _Corpus:
    half_a: TextHalf
    half_b: TextHalf
    tokens_a: list
    tokens_b: list
    mono: MonotonicMap
    space: BitextSpace


class ReviewSession:
    """Sheet order, registered annotators, and the annotation log."""

    def __init__(self, sheet, annotators: Sequence[str], store: AnnotationLog) -> None:
        self.sheet = list(sheet)
        self.by_id = {e.entry_id: e for e in self.sheet}
        self.order = {e.entry_id: i for i, e in enumerate(self.sheet)}
        self.annotators = tuple(annotators)
        self.store = store
        self._lock = threading.Lock()

    def latest(self) -> dict[tuple[str, str], Annotation]:
        result: dict[tuple[str, str], Annotation] = {}
        for record in self.store.records():
            try:
                annotation = Annotation(
                    annotator=record["annotator"],
                    entry_id=record["entry_id"],
                    verdict=record["verdict"],
                    specific=bool(record.get("specific", False)),
                    general=bool(record.get("general", False)),
                )
            except (KeyError, AnnotationDataError):
                log.warning("skipping malformed log record: %r", record)
                continue
            result[(annotation.entry_id, annotation.annotator)] = annotation
        return result

    def submit(self, annotation: Annotation) -> None:
        with self._lock:
            self.store.append(
                {
                    "annotator": annotation.annotator,
                    "entry_id": annotation.entry_id,
                    "verdict": annotation.verdict,
                    "specific": annotation.specific,
                    "general": annotation.general,
                }
            )

    def statuses(self, annotator: str) -> dict[str, str]:
        latest = self.latest()
        out = {}
        for entry in self.sheet:
            annotation = latest.get((entry.entry_id, annotator))
            if annotation is None:
                out[entry.entry_id] = "pending"
            elif annotation.verdict == "skipped":
                out[entry.entry_id] = "skipped"
            else:
                out[entry.entry_id] = "done"
        return out

    def export(self) -> list[Annotation]:
        latest = self.latest()
        keys = sorted(latest, key=lambda k: (self.order.get(k[0], 1 << 30), k[0], k[1]))
        return [latest[k] for k in keys]

    def group_annotations(self, quorum: int) -> dict:
        latest = self.latest()
        by_entry: dict[str, list[Annotation]] = {}
        for (entry_id, _), annotation in sorted(
            latest.items(), key=lambda kv: (self.order.get(kv[0][0], 1 << 30), kv[0])
        ):
            by_entry.setdefault(entry_id, []).append(annotation)
        return {
            eid: group_annotation(annotations, quorum=quorum)
            for eid, annotations in by_entry.items()
        }


class ReviewApp:
    """Routes requests to pure handlers; transport-independent for testing."""

    def __init__(self, session: ReviewSession, corpus: _Corpus, config: ServiceConfig) -> None:
        self.session = session
        self.corpus = corpus
        self.config = config

    # Every handler returns (status, payload); payload is JSON-serializable
    # except /export, which returns the annotation file text.

    def handle(self, method: str, path: str, query: dict, body: bytes | None = None):
        parts = [p for p in path.split("/") if p]
        if method == "GET" and parts == ["session"]:
            return self._session_info()
        if method == "GET" and parts == ["entries"]:
            return self._entries(query)
        if method == "GET" and len(parts) == 2 and parts[0] == "entries":
            return self._entry(parts[1])
        if method == "GET" and len(parts) == 3 and parts[0] == "entries" and parts[2] == "concordance":
            return self._concordance(parts[1])
        if method == "POST" and len(parts) == 3 and parts[0] == "entries" and parts[2] == "annotation":
            return self._annotate(parts[1], body)
        if method == "GET" and parts == ["report", "precision"]:
            return self._report_precision()
        if method == "GET" and parts == ["report", "kappa"]:
            return self._report_kappa()
        if method == "GET" and parts == ["export"]:
            return 200, annotations_to_text(self.session.export())
        return 404, {"error": f"unknown endpoint: {method} {path}"}

    def _session_info(self):
        progress = {}
        for annotator in self.session.annotators:
            statuses = self.session.statuses(annotator)
            progress[annotator] = {
                "pending": sum(1 for s in statuses.values() if s == "pending"),
                "done": sum(1 for s in statuses.values() if s == "done"),
                "skipped": sum(1 for s in statuses.values() if s == "skipped"),
            }
        return 200, {
            "sheet_size": len(self.session.sheet),
            "annotators": list(self.session.annotators),
            "progress": progress,
            "log_records": len(self.session.store),
        }

    def _entries(self, query):
        annotator = (query.get("annotator") or [None])[0]
        wanted = (query.get("status") or ["pending"])[0]
        if annotator not in self.session.annotators:
            return 404, {"error": f"unknown annotator: {annotator!r}"}
        if wanted not in ("pending", "done", "skipped", "all"):
            return 404, {"error": f"unknown status filter: {wanted!r}"}
        statuses = self.session.statuses(annotator)
        ids = [
            e.entry_id
            for e in self.session.sheet
            if wanted == "all" or statuses[e.entry_id] == wanted
        ]
        counts = {
            "pending": sum(1 for s in statuses.values() if s == "pending"),
            "done": sum(1 for s in statuses.values() if s == "done"),
            "skipped": sum(1 for s in statuses.values() if s == "skipped"),
        }
        return 200, {"annotator": annotator, "status": wanted, "entry_ids": ids, "counts": counts}

    def _entry_payload(self, entry):
        # The variant tag stays hidden: annotators must not see provenance.
        return {
            "entry_id": entry.entry_id,
            "position": self.session.order[entry.entry_id] + 1,
            "total": len(self.session.sheet),
            "source": entry.source,
            "target": entry.target,
            "pos_hint": entry.pos_hint,
        }

    def _entry(self, entry_id):
        entry = self.session.by_id.get(entry_id)
        if entry is None:
            return 404, {"error": f"unknown entry: {entry_id!r}"}
        return 200, self._entry_payload(entry)

    def _concordance(self, entry_id):
        entry = self.session.by_id.get(entry_id)
        if entry is None:
            return 404, {"error": f"unknown entry: {entry_id!r}"}
        instances = build_concordance(
            (entry.source, entry.target),
            self.corpus.half_a,
            self.corpus.half_b,
            self.corpus.tokens_a,
            self.corpus.tokens_b,
            self.corpus.mono,
            self.corpus.space,
            delta=self.config.delta,
            limit=self.config.concord_limit,
            window=self.config.window,
        )
        return 200, {
            "entry_id": entry_id,
            "instances": [
                {
                    "source_window": i.source_window,
                    "target_window": i.target_window,
                    "source_focus": list(i.source_focus),
                    "target_focus": list(i.target_focus),
                }
                for i in instances
            ],
        }

    def _annotate(self, entry_id, body):
        entry = self.session.by_id.get(entry_id)
        if entry is None:
            return 404, {"error": f"unknown entry: {entry_id!r}"}
        try:
            record = json.loads((body or b"").decode("utf-8"))
        except (UnicodeDecodeError, json.JSONDecodeError):
            return 409, {"error": "body must be a JSON annotation record"}
        annotator = record.get("annotator")
        if annotator not in self.session.annotators:
            return 404, {"error": f"unknown annotator: {annotator!r}"}
        try:
            annotation = Annotation(
                annotator=annotator,
                entry_id=entry_id,
                verdict=record.get("verdict", ""),
                specific=bool(record.get("specific", False)),
                general=bool(record.get("general", False)),
            )
        except AnnotationDataError as exc:
            return 409, {"error": str(exc)}
        self.session.submit(annotation)
        return 200, {"ok": True, "flagged": annotation.flagged}

    def _report_precision(self):
        groups = self.session.group_annotations(self.config.quorum)
        if not groups:
            return 200, {"n": 0, "summary": None}
        summary = precision_summary(list(groups.values()))
        return 200, {"n": summary.n, "summary": summary.as_dict()}

    def _report_kappa(self):
        groups = self.session.group_annotations(self.config.quorum)
        latest = self.session.latest()
        annotations = list(latest.values())
        if not groups or not annotations:
            return 200, {"annotators": {}}
        def encode(k):
            return {"kappa": k.kappa, "p_o": k.p_o, "p_e": k.p_e, "n": k.n}

        reports = kappa_suite(annotations, groups)
        return 200, {
            "annotators": {
                name: {
                    "kappa1": encode(r.kappa1),
                    "kappa2": encode(r.kappa2),
                    "kappa3": encode(r.kappa3),
                    "kappa4": encode(r.kappa4),
                }
                for name, r in reports.items()
            }
        }


def _check_or_pin_session(config: ServiceConfig) -> None:
    artifacts = {
        "sheet": config.sheet_path,
        "text_a": config.text_a,
        "text_b": config.text_b,
        "tokens_a": config.tokens_a,
        "tokens_b": config.tokens_b,
        "map": config.map_path,
    }
    current = {name: file_sha256(path) for name, path in artifacts.items()}
    if config.session_path.exists():
        pinned = json.loads(config.session_path.read_text(encoding="utf-8"))
        for name, digest in pinned.get("artifacts", {}).items():
            if current.get(name) != digest:
                raise ServiceStartupError(
                    f"artifact {name!r} does not match the session's pinned hash; "
                    "refusing to start against modified inputs"
                )
    else:
        config.session_path.write_text(
            json.dumps(
                {"artifacts": current, "annotators": list(config.annotators)},
                sort_keys=True,
                indent=1,
            )
            + "\n",
            encoding="utf-8",
        )


def build_app(config: ServiceConfig) -> ReviewApp:
    for path in (
        config.sheet_path, config.text_a, config.text_b,
        config.tokens_a, config.tokens_b, config.map_path,
    ):
        if not Path(path).exists():
            raise ServiceStartupError(f"missing artifact: {path}")
    _check_or_pin_session(config)
    sheet, _meta = read_sheet(config.sheet_path)
    half_a = read_text_half(config.text_a, "a")
    half_b = read_text_half(config.text_b, "b")
    tokens_a = read_tokens(config.tokens_a)
    tokens_b = read_tokens(config.tokens_b)
    bitext_map = read_map(config.map_path)
    if len(bitext_map) == 0:
        raise ServiceStartupError(f"bitext map {config.map_path} is empty")
    corpus = _Corpus(
        half_a=half_a,
        half_b=half_b,
        tokens_a=tokens_a,
        tokens_b=tokens_b,
        mono=monotonize(bitext_map),
        space=BitextSpace(half_a.length, half_b.length),
    )
    store = AnnotationLog(config.log_path)
    session = ReviewSession(sheet, config.annotators, store)
    return ReviewApp(session=session, corpus=corpus, config=config)


class _Handler(BaseHTTPRequestHandler):
    app: ReviewApp = None  # set by make_server
    ui_dir: Path | None = None

    def log_message(self, fmt, *args):  # quiet by default
        log.debug("http: " + fmt, *args)

    def _send_json(self, status: int, payload) -> None:
        body = json.dumps(payload).encode("utf-8")
        self.send_response(status)
        self.send_header("Content-Type", "application/json; charset=utf-8")
        self.send_header("Content-Length", str(len(body)))
        self.end_headers()
        self.wfile.write(body)

    def _serve_ui(self, path: str) -> None:
        rel = path[len("/ui") :].lstrip("/") or "index.html"
        base = self.ui_dir.resolve()
        target = (base / rel).resolve()
        if base not in target.parents and target != base:
            self._send_json(404, {"error": "not found"})
            return
        if not target.is_file():
            self._send_json(404, {"error": f"no UI file {rel!r}"})
            return
        body = target.read_bytes()
        ctype = mimetypes.guess_type(str(target))[0] or "application/octet-stream"
        self.send_response(200)
        self.send_header("Content-Type", ctype)
        self.send_header("Content-Length", str(len(body)))
        self.end_headers()
        self.wfile.write(body)

    def _dispatch(self, method: str) -> None:
        parsed = urlparse(self.path)
        if self.ui_dir and method == "GET" and (parsed.path == "/" or parsed.path.startswith("/ui")):
            if parsed.path == "/":
                self.send_response(302)
                self.send_header("Location", "/ui/")
                self.end_headers()
                return
            self._serve_ui(parsed.path)
            return
        body = None
        if method == "POST":
            length = int(self.headers.get("Content-Length", "0"))
            body = self.rfile.read(length)
        status, payload = self.app.handle(method, parsed.path, parse_qs(parsed.query), body)
        if isinstance(payload, str):
            data = payload.encode("utf-8")
            self.send_response(status)
            self.send_header("Content-Type", "text/tab-separated-values; charset=utf-8")
            self.send_header("Content-Length", str(len(data)))
            self.end_headers()
            self.wfile.write(data)
        else:
            self._send_json(status, payload)

    def do_GET(self):
        self._dispatch("GET")

    def do_POST(self):
        self._dispatch("POST")


def make_server(app: ReviewApp, host: str, port: int, ui_dir: Path | None = None) -> ThreadingHTTPServer:
    handler = type("BoundHandler", (_Handler,), {"app": app, "ui_dir": ui_dir})
    try:
        return ThreadingHTTPServer((host, port), handler)
    except OSError as exc:
        raise ServiceStartupError(f"cannot bind {host}:{port}: {exc}") from exc


def run_service(config: ServiceConfig) -> None:
    app = build_app(config)
    server = make_server(app, config.host, config.port, config.ui_dir)
    host, port = server.server_address[:2]
    print(f"review service listening on http://{host}:{port}/ (log: {config.log_path})")
    try:
        server.serve_forever()
    except KeyboardInterrupt:
        pass
    finally:
        server.shutdown()
