"""Human evaluation machinery: annotation records, plurality-based group
aggregation, precision and domain-specificity summaries, Wald confidence
intervals, and the four-way Cohen's kappa agreement suite."""

from __future__ import annotations

import random
from dataclasses import dataclass
from statistics import NormalDist
from typing import Iterable, Mapping, Sequence

from .induction import LexiconEntry

VERDICTS = ("invalid", "V", "P", "I", "skipped")
VALID_TYPES = ("V", "P", "I")

DEFAULT_QUORUM = 3


class AnnotationDataError(ValueError):
    """Inconsistent annotation data (duplicate annotator, bad verdict)."""


@dataclass(frozen=True)
class Annotation:
    """One rater's verdict on one candidate entry.

    ``invalid`` and ``skipped`` exclude the usefulness flags. A V/P/I verdict
    without either flag is accepted but reported by ``flagged`` (the
    questionnaire asks raters to reconsider such answers).
    """

    annotator: str
    entry_id: str
    verdict: str
    specific: bool = False
    general: bool = False

    def __post_init__(self) -> None:
        if self.verdict not in VERDICTS:
            raise AnnotationDataError(f"unknown verdict: {self.verdict!r}")
        if self.verdict in ("invalid", "skipped") and (self.specific or self.general):
            raise AnnotationDataError(
                f"verdict {self.verdict!r} excludes the specific/general flags"
            )

    @property
    def flagged(self) -> bool:
        return self.verdict in VALID_TYPES and not (self.specific or self.general)


@dataclass(frozen=True)
class GroupAnnotation:
    """Plurality-aggregated verdict for one entry."""

    entry_id: str
    validity: str  # invalid | V | P | I | unclassified-valid | none
    specific: str  # yes | no-consensus
    general: str  # yes | no-consensus


def group_annotation(
    annotations: Sequence[Annotation],
    quorum: int = DEFAULT_QUORUM,
    unclassified_threshold: int | None = None,
) -> GroupAnnotation:
    """Aggregate one entry's annotations into a group verdict.

    A verdict class reaching the quorum alone wins. When several classes
    reach it, or none does, valid verdicts (V, P, I pooled) totalling at
    least ``unclassified_threshold`` (default quorum+1) yield an
    unclassified-valid verdict unless an invalid quorum ties it, in which
    case the tie means no annotation at all. The usefulness flags aggregate
    independently: yes iff at least quorum raters set the flag.
    """
    if quorum < 2:
        raise ValueError("quorum must be at least 2")
    if unclassified_threshold is None:
        unclassified_threshold = quorum + 1
    if not annotations:
        raise AnnotationDataError("group annotation needs at least one annotation")
    entry_ids = {a.entry_id for a in annotations}
    if len(entry_ids) != 1:
        raise AnnotationDataError(f"annotations span several entries: {sorted(entry_ids)}")
    annotators = [a.annotator for a in annotations]
    if len(set(annotators)) != len(annotators):
        raise AnnotationDataError("duplicate annotator for one entry")

    counts = {c: 0 for c in ("invalid", "V", "P", "I")}
    for a in annotations:
        if a.verdict != "skipped":
            counts[a.verdict] += 1
    reaching = [c for c, n in counts.items() if n >= quorum]
    valid_total = counts["V"] + counts["P"] + counts["I"]

    if len(reaching) == 1:
        validity = reaching[0]
    elif len(reaching) > 1:
        validity = "none" if "invalid" in reaching else "unclassified-valid"
    elif valid_total >= unclassified_threshold:
        validity = "unclassified-valid"
    else:
        validity = "none"

    specific_count = sum(1 for a in annotations if a.specific)
    general_count = sum(1 for a in annotations if a.general)
    return GroupAnnotation(
        entry_id=annotations[0].entry_id,
        validity=validity,
        specific="yes" if specific_count >= quorum else "no-consensus",
        general="yes" if general_count >= quorum else "no-consensus",
    )


@dataclass(frozen=True)
class PrecisionSummary:
    """Percentages over all entries in the sample."""

    n: int
    pct_v: float
    pct_p: float
    pct_i: float
    pct_all_valid: float
    pct_specific_only: float
    pct_general_only: float
    pct_both: float

    def as_dict(self) -> dict[str, float]:
        return {
            "n": self.n,
            "pct_v": self.pct_v,
            "pct_p": self.pct_p,
            "pct_i": self.pct_i,
            "pct_all_valid": self.pct_all_valid,
            "pct_specific_only": self.pct_specific_only,
            "pct_general_only": self.pct_general_only,
            "pct_both": self.pct_both,
        }


def precision_summary(groups: Sequence[GroupAnnotation]) -> PrecisionSummary:
    """Summarize group verdicts: per-class percentages, the pooled all-valid
    percentage (V + P + I + unclassified-valid), and the specificity split."""
    if not groups:
        raise ValueError("precision summary needs a non-empty annotation set")
    n = len(groups)

    def pct(count: int) -> float:
        return 100.0 * count / n

    n_v = sum(1 for g in groups if g.validity == "V")
    n_p = sum(1 for g in groups if g.validity == "P")
    n_i = sum(1 for g in groups if g.validity == "I")
    n_uv = sum(1 for g in groups if g.validity == "unclassified-valid")
    n_spec_only = sum(1 for g in groups if g.specific == "yes" and g.general != "yes")
    n_gen_only = sum(1 for g in groups if g.general == "yes" and g.specific != "yes")
    n_both = sum(1 for g in groups if g.specific == "yes" and g.general == "yes")
    return PrecisionSummary(
        n=n,
        pct_v=pct(n_v),
        pct_p=pct(n_p),
        pct_i=pct(n_i),
        pct_all_valid=pct(n_v + n_p + n_i + n_uv),
        pct_specific_only=pct(n_spec_only),
        pct_general_only=pct(n_gen_only),
        pct_both=pct(n_both),
    )


@dataclass(frozen=True)
class KappaValue:
    """Cohen's kappa with its ingredients; ``kappa`` is None when the
    statistic is undefined (fewer than two items, or chance agreement 1)."""

    kappa: float | None
    p_o: float | None
    p_e: float | None
    n: int

    @property
    def defined(self) -> bool:
        return self.kappa is not None


def cohen_kappa(labels_a: Sequence[str], labels_b: Sequence[str]) -> KappaValue:
    """Chance-corrected agreement between two aligned label sequences:
    kappa = (p_o - p_e) / (1 - p_e), p_e from the raters' marginals.

    Both raters constant on the same label makes p_e = 1 and kappa undefined,
    which is reported distinctly from kappa = 1.
    """
    if len(labels_a) != len(labels_b):
        raise ValueError("label sequences must be aligned")
    n = len(labels_a)
    if n < 2:
        return KappaValue(kappa=None, p_o=None, p_e=None, n=n)
    p_o = sum(1 for a, b in zip(labels_a, labels_b) if a == b) / n
    categories = set(labels_a) | set(labels_b)
    if len(set(labels_a)) == 1 and set(labels_a) == set(labels_b):
        return KappaValue(kappa=None, p_o=p_o, p_e=1.0, n=n)
    p_e = 0.0
    for c in categories:
        p_e += (labels_a.count(c) / n) * (labels_b.count(c) / n)
    return KappaValue(kappa=(p_o - p_e) / (1.0 - p_e), p_o=p_o, p_e=p_e, n=n)


@dataclass(frozen=True)
class KappaReport:
    """The four agreement statistics for one annotator against the group."""

    annotator: str
    kappa1: KappaValue
    kappa2: KappaValue
    kappa3: KappaValue
    kappa4: KappaValue


def _retention_label(verdict_or_validity: str) -> str:
    if verdict_or_validity in VALID_TYPES or verdict_or_validity == "unclassified-valid":
        return "retained"
    if verdict_or_validity == "invalid":
        return "rejected"
    # skipped annotator verdicts and tie/no-plurality group outcomes both
    # mean no decision was reached; they form their own category.
    return "no-decision"


def kappa_suite(
    annotations: Iterable[Annotation],
    groups: Mapping[str, GroupAnnotation],
) -> dict[str, KappaReport]:
    """Compute kappa 1-4 for each annotator against the group annotation.

    kappa1 compares retain/reject/no-decision over every group-annotated item
    (skips count as their own category rather than being dropped). kappa2-4
    restrict to items retained with a definite type by both the annotator and
    the group: kappa2 on the V/P/I type, kappa3 on the specific flag, kappa4
    on the general flag. Slices with fewer than two items report undefined.
    """
    by_annotator: dict[str, dict[str, Annotation]] = {}
    for a in annotations:
        by_annotator.setdefault(a.annotator, {})[a.entry_id] = a
    reports: dict[str, KappaReport] = {}
    for annotator in sorted(by_annotator):
        own = by_annotator[annotator]
        entry_ids = [eid for eid in groups if eid in own]
        k1 = cohen_kappa(
            [_retention_label(own[eid].verdict) for eid in entry_ids],
            [_retention_label(groups[eid].validity) for eid in entry_ids],
        )
        mutual = [
            eid
            for eid in entry_ids
            if own[eid].verdict in VALID_TYPES and groups[eid].validity in VALID_TYPES
        ]
        k2 = cohen_kappa(
            [own[eid].verdict for eid in mutual],
            [groups[eid].validity for eid in mutual],
        )
        k3 = cohen_kappa(
            ["specific" if own[eid].specific else "not" for eid in mutual],
            ["specific" if groups[eid].specific == "yes" else "not" for eid in mutual],
        )
        k4 = cohen_kappa(
            ["general" if own[eid].general else "not" for eid in mutual],
            ["general" if groups[eid].general == "yes" else "not" for eid in mutual],
        )
        reports[annotator] = KappaReport(
            annotator=annotator, kappa1=k1, kappa2=k2, kappa3=k3, kappa4=k4
        )
    return reports


def proportion_ci(p: float, n: int, level: float = 0.95) -> tuple[float, float]:
    """Wald interval p +/- z * sqrt(p(1-p)/n), clipped to [0, 1]."""
    if not 0.0 <= p <= 1.0:
        raise ValueError("p must be a proportion")
    if n < 1:
        raise ValueError("n must be at least 1")
    if not 0.0 <= level < 1.0:
        raise ValueError("confidence level must be in [0, 1)")
    z = NormalDist().inv_cdf(0.5 + level / 2.0)
    half = z * (p * (1.0 - p) / n) ** 0.5
    return (max(0.0, p - half), min(1.0, p + half))


class SamplingError(ValueError):
    """A lexicon variant is too small for the requested sample size."""


@dataclass(frozen=True)
class SheetEntry:
    """One row of an annotation sheet. ``variant`` records which lexicon the
    entry was sampled from; it must stay hidden from annotators."""

    entry_id: str
    source: str
    target: str
    variant: str
    pos_hint: str | None = None


def sample_and_interleave(
    variants: Sequence[tuple[str, Sequence[LexiconEntry]]],
    n: int,
    seed: int,
    pos_hints: Mapping[str, str] | None = None,
) -> list[SheetEntry]:
    """Draw n entries per lexicon variant and interleave them into one sheet.

    Sampling is uniform without replacement; rounds are emitted round-robin
    with a fresh random rotation per round so variant order carries no
    signal. Entry ids follow sheet position, so they leak nothing either.
    A fixed seed reproduces the sheet exactly.
    """
    rng = random.Random(seed)
    samples: list[tuple[str, list[LexiconEntry]]] = []
    for name, entries in variants:
        if len(entries) < n:
            raise SamplingError(
                f"variant {name!r} has {len(entries)} entries, cannot sample {n}"
            )
        samples.append((name, rng.sample(list(entries), n)))
    sheet: list[SheetEntry] = []
    k = len(samples)
    for i in range(n):
        rotation = rng.randrange(k) if k > 1 else 0
        for j in range(k):
            name, sample = samples[(rotation + j) % k]
            entry = sample[i]
            sheet.append(
                SheetEntry(
                    entry_id=f"e{len(sheet) + 1:04d}",
                    source=entry.source,
                    target=entry.target,
                    variant=name,
                    pos_hint=(pos_hints or {}).get(entry.source),
                )
            )
    return sheet
