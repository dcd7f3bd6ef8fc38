"""Pipeline command line: composable stages with one flat config, a single
seed, and a manifest per stage so every run is reproducible.

Exit codes: 0 success, 2 usage error, 3 missing input artifact, 4 invalid
artifact or data.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Mapping, Sequence

from .concordance import DEFAULT_LIMIT, DEFAULT_WINDOW, build_concordance, format_instance
from .corpus import (
    CorpusError,
    TokenizerConfig,
    load_pair_list,
    load_word_list,
    read_text_half,
    tokenize,
)
from .evaluation import (
    DEFAULT_QUORUM,
    AnnotationDataError,
    group_annotation,
    kappa_suite,
    precision_summary,
    sample_and_interleave,
)
from .filters import corpus_filter, mrd_filter
from .formats import (
    parse_config,
    read_annotations,
    read_band_pairs,
    read_counts,
    read_lexicon,
    read_map,
    read_sheet,
    read_tokens,
    write_band_pairs,
    write_counts,
    write_lexicon,
    write_map,
    write_pair_rows,
    write_sheet,
    write_tokens,
    write_word_list,
)
from .geometry import BitextSpace, banded_pairs, counts_from_pairs, monotonize
from .induction import induce_lexicon, threshold_by_recall
from .manifest import build_manifest, write_manifest
from .mapper import MapperParams, MatchHeuristic, map_bitext
from .synth import SyntheticConfig, generate_synthetic_bitext

EXIT_OK = 0
EXIT_MISSING_INPUT = 3  # argparse owns exit code 2 for usage errors
EXIT_BAD_DATA = 4

DEFAULT_DELTA = 100.0
DEFAULT_MAX_ITERATIONS = 10


class StageError(Exception):
    exit_code = 1


class MissingInputError(StageError):
    exit_code = EXIT_MISSING_INPUT


class BadDataError(StageError):
    exit_code = EXIT_BAD_DATA


def _require(path: str | None, what: str) -> Path:
    if path is None:
        raise MissingInputError(f"missing required input: {what}")
    p = Path(path)
    if not p.exists():
        raise MissingInputError(f"expected {what} at {p}, but it does not exist")
    return p


class Settings:
    """Resolution order: command-line flag, then config file, then default."""

    def __init__(self, config_path: str | None) -> None:
        self._config: dict[str, str] = {}
        if config_path:
            self._config = parse_config(_require(config_path, "config file"))

    def resolve(self, flag_value, key: str, default, cast):
        if flag_value is not None:
            return flag_value
        if key in self._config:
            raw = self._config[key]
            if cast is bool:
                return raw.lower() in ("1", "true", "yes", "on")
            return cast(raw)
        return default


def _out_dir(args) -> Path:
    out = Path(args.out or ".")
    out.mkdir(parents=True, exist_ok=True)
    return out


def _write_stage_manifest(out: Path, stage: str, params: Mapping, inputs, outputs) -> None:
    manifest = build_manifest(stage, dict(params), inputs, outputs)
    write_manifest(out / f"{stage}.manifest.json", manifest)


def _tokenizer_config(stoplist_path: str | None) -> TokenizerConfig:
    if stoplist_path:
        stop = load_word_list(_require(stoplist_path, "stop list"), "stoplist")
        return TokenizerConfig(stoplist=stop.entries)
    return TokenizerConfig()


# --- stages -------------------------------------------------------------------


def cmd_tokenize(args, settings: Settings) -> int:
    out = _out_dir(args)
    text_a = _require(args.text_a, "bitext half A")
    text_b = _require(args.text_b, "bitext half B")
    half_a = read_text_half(text_a, args.lang_a)
    half_b = read_text_half(text_b, args.lang_b)
    tokens_a = tokenize(half_a, _tokenizer_config(args.stoplist_a))
    tokens_b = tokenize(half_b, _tokenizer_config(args.stoplist_b))
    path_a = out / "tokens_a.tsv"
    path_b = out / "tokens_b.tsv"
    write_tokens(path_a, tokens_a)
    write_tokens(path_b, tokens_b)
    inputs = {"text_a": text_a, "text_b": text_b}
    if args.stoplist_a:
        inputs["stoplist_a"] = Path(args.stoplist_a)
    if args.stoplist_b:
        inputs["stoplist_b"] = Path(args.stoplist_b)
    _write_stage_manifest(
        out,
        "tokenize",
        {"lang_a": args.lang_a, "lang_b": args.lang_b},
        inputs,
        {"tokens_a": path_a, "tokens_b": path_b},
    )
    print(f"tokenize: {len(tokens_a)} + {len(tokens_b)} tokens -> {path_a}, {path_b}")
    return EXIT_OK


def _mapper_params(args, settings: Settings) -> MapperParams:
    return MapperParams(
        chain_size=settings.resolve(args.chain_size, "chain_size", 6, int),
        lcsr_threshold=settings.resolve(args.lcsr_threshold, "lcsr_threshold", 0.58, float),
        max_slope_deviation=settings.resolve(
            args.max_slope_deviation, "max_slope_deviation", 0.33, float
        ),
        max_rms_error=settings.resolve(args.max_rms_error, "max_rms_error", 20.0, float),
        search_widening=settings.resolve(args.search_widening, "search_widening", 1.5, float),
        initial_rect_chars=settings.resolve(
            args.initial_rect_chars, "initial_rect_chars", 700, int
        ),
        rect_vertical_slack=settings.resolve(
            args.rect_vertical_slack, "rect_vertical_slack", 150.0, float
        ),
    )


def _load_token_halves(args) -> tuple[list, list, Path, Path]:
    if args.tokens_a and args.tokens_b:
        path_a = _require(args.tokens_a, "token file A")
        path_b = _require(args.tokens_b, "token file B")
        return read_tokens(path_a), read_tokens(path_b), path_a, path_b
    raise MissingInputError("missing required input: token files (--tokens-a/--tokens-b)")


def cmd_map(args, settings: Settings) -> int:
    out = _out_dir(args)
    if args.text_a and args.text_b and not (args.tokens_a and args.tokens_b):
        text_a = _require(args.text_a, "bitext half A")
        text_b = _require(args.text_b, "bitext half B")
        tokens_a = tokenize(read_text_half(text_a, args.lang_a), _tokenizer_config(args.stoplist_a))
        tokens_b = tokenize(read_text_half(text_b, args.lang_b), _tokenizer_config(args.stoplist_b))
        input_a, input_b = text_a, text_b
    else:
        tokens_a, tokens_b, input_a, input_b = _load_token_halves(args)
    if not tokens_a or not tokens_b:
        raise BadDataError("cannot map an empty bitext half")
    space = BitextSpace(max(t.end for t in tokens_a), max(t.end for t in tokens_b))
    params = _mapper_params(args, settings)
    kinds = settings.resolve(args.heuristics, "heuristics", "cognate,exact", str)
    heuristics = []
    for kind in kinds.split(","):
        kind = kind.strip()
        if kind in ("cognate", "cognate-lcsr"):
            heuristics.append(MatchHeuristic(kind="cognate-lcsr"))
        elif kind in ("exact", "exact-match"):
            heuristics.append(MatchHeuristic(kind="exact-match"))
        elif kind in ("seed", "seed-lexicon"):
            seed = load_pair_list(_require(args.seed_lexicon, "seed lexicon"))
            heuristics.append(MatchHeuristic(kind="seed-lexicon", resources=seed))
        else:
            raise BadDataError(f"unknown heuristic: {kind!r}")
    result = map_bitext(tokens_a, tokens_b, space, heuristics, params)
    map_path = out / "bitext.map"
    write_map(map_path, result.bitext_map)
    _write_stage_manifest(
        out,
        "map",
        {
            "chain_size": params.chain_size,
            "lcsr_threshold": params.lcsr_threshold,
            "max_slope_deviation": params.max_slope_deviation,
            "max_rms_error": params.max_rms_error,
            "search_widening": params.search_widening,
            "initial_rect_chars": params.initial_rect_chars,
            "rect_vertical_slack": params.rect_vertical_slack,
            "heuristics": kinds,
            "width": space.width,
            "height": space.height,
        },
        {"input_a": input_a, "input_b": input_b},
        {"bitext_map": map_path},
    )
    print(
        f"map: {len(result.bitext_map)} points from {result.chains_accepted} chains "
        f"({result.rects_searched} searches) -> {map_path}"
    )
    if result.note:
        print(f"map: note: {result.note}")
    return EXIT_OK


def cmd_cooccur(args, settings: Settings) -> int:
    out = _out_dir(args)
    tokens_a, tokens_b, path_a, path_b = _load_token_halves(args)
    map_path = _require(args.map, "bitext map")
    bitext_map = read_map(map_path)
    if len(bitext_map) == 0:
        raise BadDataError(f"bitext map {map_path} is empty; co-occurrence is undefined")
    space = BitextSpace(max(t.end for t in tokens_a), max(t.end for t in tokens_b))
    mono = monotonize(bitext_map)
    delta = settings.resolve(args.delta, "delta", DEFAULT_DELTA, float)
    content_only = settings.resolve(args.content_only, "content_only", True, bool)
    pairs = banded_pairs(tokens_a, tokens_b, mono, space, delta, content_only)
    counts = counts_from_pairs(pairs, tokens_a, tokens_b, content_only)
    pairs_path = out / "band_pairs.tsv"
    counts_path = out / "counts.tsv"
    write_band_pairs(pairs_path, pairs)
    write_counts(counts_path, counts)
    _write_stage_manifest(
        out,
        "cooccur",
        {"delta": delta, "content_only": content_only},
        {"tokens_a": path_a, "tokens_b": path_b, "bitext_map": map_path},
        {"band_pairs": pairs_path, "counts": counts_path},
    )
    print(f"cooccur: {len(pairs)} banded pairs, {len(counts.joint)} type pairs -> {pairs_path}")
    return EXIT_OK


def cmd_induce(args, settings: Settings) -> int:
    out = _out_dir(args)
    pairs_path = _require(args.pairs, "band pairs file")
    counts_path = _require(args.counts, "counts file")
    pairs = read_band_pairs(pairs_path)
    counts = read_counts(counts_path)
    max_iterations = settings.resolve(
        args.max_iterations, "max_iterations", DEFAULT_MAX_ITERATIONS, int
    )
    entries = induce_lexicon(counts, pairs, max_iterations=max_iterations)
    lexicon_path = out / "lexicon.tsv"
    write_lexicon(lexicon_path, entries)
    inputs = {"band_pairs": pairs_path, "counts": counts_path}
    outputs = {"lexicon": lexicon_path}
    params = {"max_iterations": max_iterations}
    target_recall = settings.resolve(args.target_recall, "target_recall", None, float)
    if target_recall is not None:
        tokens_a, tokens_b, path_a, path_b = _load_token_halves(args)
        content_only = settings.resolve(args.content_only, "content_only", True, bool)
        result = threshold_by_recall(entries, target_recall, tokens_a, tokens_b, content_only)
        threshold_path = out / "threshold.json"
        threshold_path.write_text(
            json.dumps(
                {
                    "target_recall": target_recall,
                    "cutoff": result.cutoff,
                    "achieved_recall": result.achieved_recall,
                    "reached_target": result.reached_target,
                },
                sort_keys=True,
                indent=1,
            )
            + "\n",
            encoding="utf-8",
        )
        inputs.update({"tokens_a": path_a, "tokens_b": path_b})
        outputs["threshold"] = threshold_path
        params["target_recall"] = target_recall
        print(
            f"induce: recall target {target_recall} -> plateau cutoff {result.cutoff} "
            f"(achieved {result.achieved_recall:.3f})"
        )
    _write_stage_manifest(out, "induce", params, inputs, outputs)
    print(f"induce: {len(entries)} entries -> {lexicon_path}")
    return EXIT_OK


def cmd_filter(args, settings: Settings) -> int:
    out = _out_dir(args)
    lexicon_path = _require(args.lexicon, "lexicon file")
    entries = read_lexicon(lexicon_path)
    min_plateau = settings.resolve(args.min_plateau, "min_plateau", None, int)
    if min_plateau is not None:
        entries = [e for e in entries if e.plateau <= min_plateau]
    removed = []
    inputs = {"lexicon": lexicon_path}
    params: dict = {}
    if args.mrd:
        mrd_path = _require(args.mrd, "machine-readable dictionary pair list")
        mrd = load_pair_list(mrd_path)
        entries, removed_now = mrd_filter(entries, mrd)
        removed.extend(removed_now)
        inputs["mrd"] = mrd_path
        params["mrd"] = True
    if args.subtract:
        other_path = _require(args.subtract, "subtraction lexicon")
        other = read_lexicon(other_path)
        entries, removed_now = corpus_filter(entries, other)
        removed.extend(removed_now)
        inputs["subtract"] = other_path
        params["subtract"] = True
    if min_plateau is not None:
        params["min_plateau"] = min_plateau
    kept_path = out / "kept.tsv"
    removed_path = out / "removed.tsv"
    write_lexicon(kept_path, entries)
    write_lexicon(removed_path, removed)
    _write_stage_manifest(
        out, "filter", params, inputs, {"kept": kept_path, "removed": removed_path}
    )
    print(f"filter: kept {len(entries)}, removed {len(removed)} -> {kept_path}, {removed_path}")
    return EXIT_OK


def cmd_concord(args, settings: Settings) -> int:
    out = _out_dir(args)
    tokens_a, tokens_b, path_a, path_b = _load_token_halves(args)
    text_a = _require(args.text_a, "bitext half A")
    text_b = _require(args.text_b, "bitext half B")
    half_a = read_text_half(text_a, args.lang_a)
    half_b = read_text_half(text_b, args.lang_b)
    map_path = _require(args.map, "bitext map")
    bitext_map = read_map(map_path)
    if len(bitext_map) == 0:
        raise BadDataError(f"bitext map {map_path} is empty")
    space = BitextSpace(half_a.length, half_b.length)
    mono = monotonize(bitext_map)
    delta = settings.resolve(args.delta, "delta", DEFAULT_DELTA, float)
    limit = settings.resolve(args.limit, "limit", DEFAULT_LIMIT, int)
    window = settings.resolve(args.window, "window", DEFAULT_WINDOW, int)
    source, target = args.pair
    instances = build_concordance(
        (source, target), half_a, half_b, tokens_a, tokens_b, mono, space, delta, limit, window
    )
    doc = {
        "pair": {"source": source, "target": target},
        "instances": [
            {
                "source_window": i.source_window,
                "target_window": i.target_window,
                "a_center": i.a_center,
                "b_center": i.b_center,
                "source_focus": list(i.source_focus),
                "target_focus": list(i.target_focus),
            }
            for i in instances
        ],
    }
    concord_path = out / "concordance.json"
    concord_path.write_text(json.dumps(doc, sort_keys=True, indent=1) + "\n", encoding="utf-8")
    _write_stage_manifest(
        out,
        "concord",
        {"source": source, "target": target, "delta": delta, "limit": limit, "window": window},
        {
            "tokens_a": path_a,
            "tokens_b": path_b,
            "text_a": text_a,
            "text_b": text_b,
            "bitext_map": map_path,
        },
        {"concordance": concord_path},
    )
    if not args.quiet:
        for instance in instances:
            print(format_instance(instance))
            print()
    print(f"concord: {len(instances)} instances -> {concord_path}")
    return EXIT_OK


def cmd_sample(args, settings: Settings) -> int:
    out = _out_dir(args)
    variants = []
    inputs = {}
    for spec in args.lexicons:
        if "=" not in spec:
            raise BadDataError(f"--lexicons expects name=path, got {spec!r}")
        name, _, path = spec.partition("=")
        lex_path = _require(path, f"lexicon variant {name!r}")
        variants.append((name, read_lexicon(lex_path)))
        inputs[f"lexicon_{name}"] = lex_path
    n = settings.resolve(args.n, "sample_n", 100, int)
    seed = settings.resolve(args.seed, "seed", 0, int)
    sheet = sample_and_interleave(variants, n=n, seed=seed)
    sheet_path = out / "sheet.json"
    write_sheet(
        sheet_path,
        sheet,
        meta={"n_per_variant": n, "seed": seed, "variants": [name for name, _ in variants]},
    )
    _write_stage_manifest(
        out, "sample", {"n_per_variant": n, "seed": seed}, inputs, {"sheet": sheet_path}
    )
    print(f"sample: {len(sheet)} entries -> {sheet_path}")
    return EXIT_OK


def cmd_eval(args, settings: Settings) -> int:
    out = _out_dir(args)
    sheet_path = _require(args.sheet, "annotation sheet")
    annotations_path = _require(args.annotations, "annotation file")
    sheet, _meta = read_sheet(sheet_path)
    annotations = read_annotations(annotations_path)
    quorum = settings.resolve(args.quorum, "quorum", DEFAULT_QUORUM, int)
    unclassified = settings.resolve(
        args.unclassified_threshold, "unclassified_threshold", quorum + 1, int
    )
    by_entry: dict[str, list] = {}
    for a in annotations:
        by_entry.setdefault(a.entry_id, []).append(a)
    groups = {
        eid: group_annotation(anns, quorum=quorum, unclassified_threshold=unclassified)
        for eid, anns in sorted(by_entry.items())
    }
    if not groups:
        raise BadDataError("annotation file contains no records")
    variant_of = {e.entry_id: e.variant for e in sheet}
    overall = precision_summary(list(groups.values()))
    by_variant = {}
    for variant in sorted({e.variant for e in sheet}):
        subset = [g for eid, g in groups.items() if variant_of.get(eid) == variant]
        if subset:
            summary = precision_summary(subset)
            by_variant[variant] = {
                **summary.as_dict(),
                "pct_specific": 100.0 * sum(1 for g in subset if g.specific == "yes") / len(subset),
                "pct_general": 100.0 * sum(1 for g in subset if g.general == "yes") / len(subset),
            }
    kappa = {
        name: {
            f"kappa{i}": {"kappa": k.kappa, "p_o": k.p_o, "p_e": k.p_e, "n": k.n}
            for i, k in enumerate(
                (report.kappa1, report.kappa2, report.kappa3, report.kappa4), start=1
            )
        }
        for name, report in kappa_suite(annotations, groups).items()
    }
    report_doc = {
        "n_entries": len(groups),
        "quorum": quorum,
        "unclassified_threshold": unclassified,
        "overall": overall.as_dict(),
        "by_variant": by_variant,
        "kappa": kappa,
        "group_annotations": [
            {
                "entry_id": eid,
                "validity": g.validity,
                "specific": g.specific,
                "general": g.general,
                "variant": variant_of.get(eid),
            }
            for eid, g in sorted(groups.items())
        ],
    }
    report_path = out / "report.json"
    report_path.write_text(json.dumps(report_doc, sort_keys=True, indent=1) + "\n", encoding="utf-8")
    _write_stage_manifest(
        out,
        "eval",
        {"quorum": quorum, "unclassified_threshold": unclassified},
        {"sheet": sheet_path, "annotations": annotations_path},
        {"report": report_path},
    )
    print(
        f"eval: {len(groups)} entries, all-valid {overall.pct_all_valid:.2f}% -> {report_path}"
    )
    return EXIT_OK


def cmd_synth(args, settings: Settings) -> int:
    out = _out_dir(args)
    config = SyntheticConfig(
        lexicon_size=settings.resolve(args.lexicon_size, "lexicon_size", 200, int),
        segment_count=settings.resolve(args.segment_count, "segment_count", 300, int),
        cognate_rate=settings.resolve(args.cognate_rate, "cognate_rate", 0.3, float),
        omission_rate=settings.resolve(args.omission_rate, "omission_rate", 0.1, float),
        permutation_window=settings.resolve(
            args.permutation_window, "permutation_window", 1, int
        ),
        seed=settings.resolve(args.seed, "seed", 0, int),
    )
    synth = generate_synthetic_bitext(config)
    paths = {
        "half_a": out / "half_a.txt",
        "half_b": out / "half_b.txt",
        "true_map": out / "true_map.tsv",
        "true_lexicon": out / "true_lexicon.tsv",
        "stoplist_a": out / "stoplist_a.txt",
        "stoplist_b": out / "stoplist_b.txt",
    }
    paths["half_a"].write_text(synth.half_a.content, encoding="utf-8")
    paths["half_b"].write_text(synth.half_b.content, encoding="utf-8")
    rows = sorted((t.x, t.y) for t in synth.true_points)
    paths["true_map"].write_text(
        "# x\ty\n" + "".join(f"{x}\t{y}\n" for x, y in rows), encoding="utf-8"
    )
    write_pair_rows(paths["true_lexicon"], [(p.source, p.target) for p in synth.content_pairs])
    write_word_list(paths["stoplist_a"], synth.stoplist_a)
    write_word_list(paths["stoplist_b"], synth.stoplist_b)
    _write_stage_manifest(
        out,
        "synth",
        {
            "lexicon_size": config.lexicon_size,
            "segment_count": config.segment_count,
            "cognate_rate": config.cognate_rate,
            "omission_rate": config.omission_rate,
            "permutation_window": config.permutation_window,
            "seed": config.seed,
        },
        {},
        paths,
    )
    print(
        f"synth: {synth.half_a.length} + {synth.half_b.length} chars, "
        f"{len(synth.content_pairs)} true pairs -> {out}"
    )
    return EXIT_OK


def cmd_serve(args, settings: Settings) -> int:
    from .service import ServiceConfig, ServiceStartupError, run_service

    config = ServiceConfig(
        sheet_path=_require(args.sheet, "annotation sheet"),
        text_a=_require(args.text_a, "bitext half A"),
        text_b=_require(args.text_b, "bitext half B"),
        tokens_a=_require(args.tokens_a, "token file A"),
        tokens_b=_require(args.tokens_b, "token file B"),
        map_path=_require(args.map, "bitext map"),
        log_path=Path(args.log or (_out_dir(args) / "annotations.log")),
        session_path=Path(args.session or (_out_dir(args) / "session.json")),
        annotators=tuple(args.annotators.split(",")),
        delta=settings.resolve(args.delta, "delta", DEFAULT_DELTA, float),
        host=args.host,
        port=args.port,
        ui_dir=Path(args.ui_dir) if args.ui_dir else None,
    )
    try:
        run_service(config)
    except ServiceStartupError as exc:
        print(f"serve: {exc}", file=sys.stderr)
        return EXIT_BAD_DATA
    return EXIT_OK


# --- parser --------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="bilex",
        description="Acquire domain-specific translation lexicons from raw parallel corpora.",
    )
    sub = parser.add_subparsers(dest="stage", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="flat key=value config file")
    common.add_argument("--seed", type=int, help="global random seed")
    common.add_argument("--out", help="output directory (default: current)")

    texts = argparse.ArgumentParser(add_help=False)
    texts.add_argument("--text-a", help="plain-text bitext half A (UTF-8)")
    texts.add_argument("--text-b", help="plain-text bitext half B (UTF-8)")
    texts.add_argument("--lang-a", default="a", help="language tag for half A")
    texts.add_argument("--lang-b", default="b", help="language tag for half B")
    texts.add_argument("--stoplist-a", help="stop list for half A")
    texts.add_argument("--stoplist-b", help="stop list for half B")

    tokens = argparse.ArgumentParser(add_help=False)
    tokens.add_argument("--tokens-a", help="token file for half A")
    tokens.add_argument("--tokens-b", help="token file for half B")

    p = sub.add_parser("tokenize", parents=[common, texts], help="tokenize both halves")
    p.set_defaults(func=cmd_tokenize)

    p = sub.add_parser(
        "map", parents=[common, texts, tokens], help="produce the bitext correspondence map"
    )
    p.add_argument("--heuristics", help="comma list: cognate,exact,seed (default cognate,exact)")
    p.add_argument("--seed-lexicon", help="pair list for the seed heuristic")
    p.add_argument("--chain-size", type=int)
    p.add_argument("--lcsr-threshold", type=float)
    p.add_argument("--max-slope-deviation", type=float)
    p.add_argument("--max-rms-error", type=float)
    p.add_argument("--search-widening", type=float)
    p.add_argument("--initial-rect-chars", type=int)
    p.add_argument("--rect-vertical-slack", type=float)
    p.set_defaults(func=cmd_map)

    p = sub.add_parser(
        "cooccur", parents=[common, tokens], help="count band co-occurrences under the map"
    )
    p.add_argument("--map", help="bitext map file")
    p.add_argument("--delta", type=float, help="band half-width in characters (default 100)")
    p.add_argument(
        "--content-only",
        action="store_const",
        const=True,
        help="restrict to content words (default on; content_only=false in config to disable)",
    )
    p.set_defaults(func=cmd_cooccur)

    p = sub.add_parser(
        "induce", parents=[common, tokens], help="induce the scored translation lexicon"
    )
    p.add_argument("--pairs", help="band pairs file")
    p.add_argument("--counts", help="counts file")
    p.add_argument("--max-iterations", type=int)
    p.add_argument("--target-recall", type=float, help="also compute a plateau cutoff")
    p.add_argument("--content-only", action="store_const", const=True)
    p.set_defaults(func=cmd_induce)

    p = sub.add_parser("filter", parents=[common], help="remove general-usage entries")
    p.add_argument("--lexicon", help="lexicon to filter")
    p.add_argument("--mrd", help="machine-readable dictionary pair list")
    p.add_argument("--subtract", help="lexicon from another corpus to subtract")
    p.add_argument("--min-plateau", type=int, help="keep only plateaus <= this before filtering")
    p.set_defaults(func=cmd_filter)

    p = sub.add_parser(
        "concord", parents=[common, texts, tokens], help="bilingual concordance for one pair"
    )
    p.add_argument("--pair", nargs=2, metavar=("SOURCE", "TARGET"), required=True)
    p.add_argument("--map", help="bitext map file")
    p.add_argument("--delta", type=float)
    p.add_argument("--limit", type=int)
    p.add_argument("--window", type=int)
    p.add_argument("--quiet", action="store_true", help="suppress text blocks")
    p.set_defaults(func=cmd_concord)

    p = sub.add_parser("sample", parents=[common], help="sample and interleave annotation sheets")
    p.add_argument(
        "--lexicons",
        nargs="+",
        required=True,
        metavar="NAME=PATH",
        help="lexicon variants to sample from",
    )
    p.add_argument("--n", type=int, help="entries per variant (default 100)")
    p.set_defaults(func=cmd_sample)

    p = sub.add_parser("eval", parents=[common], help="aggregate annotations into reports")
    p.add_argument("--sheet", help="sheet file from the sample stage")
    p.add_argument("--annotations", help="annotation records (TSV or JSON)")
    p.add_argument("--quorum", type=int)
    p.add_argument("--unclassified-threshold", type=int,
                   help="pooled valid verdicts needed for unclassified-valid (default quorum+1)")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("synth", parents=[common], help="generate a synthetic bitext with truth")
    p.add_argument("--lexicon-size", type=int)
    p.add_argument("--segment-count", type=int)
    p.add_argument("--cognate-rate", type=float)
    p.add_argument("--omission-rate", type=float)
    p.add_argument("--permutation-window", type=int)
    p.set_defaults(func=cmd_synth)

    p = sub.add_parser("serve", parents=[common, texts, tokens], help="run the review service")
    p.add_argument("--sheet", help="sheet file")
    p.add_argument("--map", help="bitext map file")
    p.add_argument("--annotators", default="A1,A2,A3,A4,A5,A6")
    p.add_argument("--log", help="annotation log path")
    p.add_argument("--session", help="session state path")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8765)
    p.add_argument("--delta", type=float)
    p.add_argument("--ui-dir", help="directory of built UI assets to serve at /ui/")
    p.set_defaults(func=cmd_serve)

    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        settings = Settings(args.config)
        return args.func(args, settings)
    except StageError as exc:
        print(f"{args.stage}: {exc}", file=sys.stderr)
        return exc.exit_code
    except (CorpusError, AnnotationDataError, ValueError) as exc:
        print(f"{args.stage}: {exc}", file=sys.stderr)
        return EXIT_BAD_DATA


if __name__ == "__main__":
    sys.exit(main())
