"""Evaluation machinery: P/R/F1, P@k blocks, split protocols, per-field
extraction scoring.

Macro averages cover Need and Availability only; Other is a catch-all
and would swamp the numbers the coordinators care about.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Callable, Sequence

from .classify import Hyper, train_linear
from .model import ExtractionResult, PostKind
from .textprep import TokenizedText

# Externally reported full-scale transformer baselines for the same
# protocols (reference only; not reproducible at desk scale).
REFERENCE_BASELINES = {
    "indomain_macro_f1": {"nepal": 0.828, "italy": 0.826},
    "matching_f1": {"nepal": 0.84, "italy": 0.87},
}

MACRO_CLASSES = (PostKind.NEED, PostKind.AVAILABILITY)
EXTRACTION_FIELDS = ("resource", "location", "quantity", "source", "contact")


class LengthMismatch(ValueError):
    pass


class AlignmentError(ValueError):
    pass


class DegenerateCorpus(ValueError):
    pass


def f1_score(p: float, r: float) -> float:
    return 2 * p * r / (p + r) if (p + r) > 0 else 0.0


@dataclass(frozen=True)
class ClassMetrics:
    precision: float
    recall: float
    f1: float
    support: int

    def to_json(self) -> dict:
        return {
            "precision": self.precision,
            "recall": self.recall,
            "f1": self.f1,
            "support": self.support,
        }


@dataclass(frozen=True)
class AtK:
    k: int
    precision: float
    recall: float
    f1: float

    def to_json(self) -> dict:
        return {"k": self.k, "precision": self.precision, "recall": self.recall, "f1": self.f1}


@dataclass(frozen=True)
class MetricsReport:
    per_class: dict[str, ClassMetrics]
    macro_precision: float
    macro_recall: float
    macro_f1: float
    at_k: dict[str, AtK] = field(default_factory=dict)
    extra: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        doc = {
            "per_class": {k: self.per_class[k].to_json() for k in sorted(self.per_class)},
            "macro": {
                "precision": self.macro_precision,
                "recall": self.macro_recall,
                "f1": self.macro_f1,
            },
            "reference_baselines": REFERENCE_BASELINES,
        }
        if self.at_k:
            doc["at_k"] = {k: self.at_k[k].to_json() for k in sorted(self.at_k)}
        if self.extra:
            doc["extra"] = self.extra
        return doc


def prf(gold: Sequence[PostKind], pred: Sequence[PostKind]) -> MetricsReport:
    """One-vs-rest P/R/F1 per class plus the Need/Availability macro."""
    if len(gold) != len(pred):
        raise LengthMismatch(f"gold has {len(gold)} items, pred has {len(pred)}")
    if not gold:
        raise LengthMismatch("empty inputs")
    per_class: dict[str, ClassMetrics] = {}
    for cls in PostKind:
        tp = sum(1 for g, p in zip(gold, pred) if g is cls and p is cls)
        fp = sum(1 for g, p in zip(gold, pred) if g is not cls and p is cls)
        fn = sum(1 for g, p in zip(gold, pred) if g is cls and p is not cls)
        precision = tp / (tp + fp) if (tp + fp) > 0 else 0.0
        recall = tp / (tp + fn) if (tp + fn) > 0 else 0.0
        per_class[cls.value] = ClassMetrics(precision, recall, f1_score(precision, recall), tp + fn)
    macro_p = sum(per_class[c.value].precision for c in MACRO_CLASSES) / len(MACRO_CLASSES)
    macro_r = sum(per_class[c.value].recall for c in MACRO_CLASSES) / len(MACRO_CLASSES)
    macro_f = sum(per_class[c.value].f1 for c in MACRO_CLASSES) / len(MACRO_CLASSES)
    return MetricsReport(per_class, macro_p, macro_r, macro_f)


def prf_at_k(
    ranked: Sequence[tuple[str, float]],
    gold_relevant: set[str],
    k: int,
    total_relevant: int,
) -> AtK:
    """Precision/recall/F1 over the top-k of a score ranking."""
    if k < 1:
        raise ValueError("k must be >= 1")
    top = [item_id for item_id, _ in ranked[:k]]
    hits = sum(1 for item_id in top if item_id in gold_relevant)
    if total_relevant < hits:
        raise ValueError("total_relevant smaller than relevant hits in top-k")
    p = hits / k
    r = hits / total_relevant if total_relevant > 0 else 0.0
    return AtK(k, p, r, f1_score(p, r))


@dataclass(frozen=True)
class SplitSpec:
    seed: int = 0
    train: float = 0.7
    validation: float = 0.1
    test: float = 0.2

    def __post_init__(self) -> None:
        if abs(self.train + self.validation + self.test - 1.0) > 1e-9:
            raise ValueError("split fractions must sum to 1")


LabeledCorpus = list[tuple[TokenizedText, PostKind]]


def split_corpus(corpus: LabeledCorpus, spec: SplitSpec) -> tuple[LabeledCorpus, LabeledCorpus, LabeledCorpus]:
    """Deterministic shuffle then 70/10/20 slicing."""
    idx = list(range(len(corpus)))
    random.Random(spec.seed).shuffle(idx)
    n = len(corpus)
    n_train = int(round(spec.train * n))
    n_val = int(round(spec.validation * n))
    train = [corpus[i] for i in idx[:n_train]]
    val = [corpus[i] for i in idx[n_train : n_train + n_val]]
    test = [corpus[i] for i in idx[n_train + n_val :]]
    return train, val, test


def _check_corpus(corpus: LabeledCorpus, name: str) -> None:
    if not corpus:
        raise DegenerateCorpus(f"{name} corpus is empty")
    if len({t.clean_text for t, _ in corpus}) < 2:
        raise DegenerateCorpus(f"{name} corpus has a single distinct text")


ClassifierFactory = Callable[[LabeledCorpus], object]


def cue_factory(classifier) -> ClassifierFactory:
    """Wrap an untrainable classifier (the cue baseline) as a factory."""
    return lambda _train: classifier


def linear_factory(hyper: Hyper = Hyper()) -> ClassifierFactory:
    return lambda train: train_linear(train, hyper)


def run_indomain(corpus: LabeledCorpus, split: SplitSpec, factory: ClassifierFactory) -> MetricsReport:
    """Train on 70%, evaluate P/R/F1 on the held-out 20%."""
    _check_corpus(corpus, "labeled")
    train, val, test = split_corpus(corpus, split)
    if not test:
        raise DegenerateCorpus("test split is empty; corpus too small")
    model = factory(train if train else corpus)
    gold = [kind for _, kind in test]
    pred = [model.predict(text)[0] for text, _ in test]
    report = prf(gold, pred)
    return MetricsReport(
        report.per_class,
        report.macro_precision,
        report.macro_recall,
        report.macro_f1,
        extra={
            "protocol": "indomain",
            "seed": split.seed,
            "sizes": {"train": len(train), "validation": len(val), "test": len(test)},
        },
    )


def run_crossdomain(
    train_corpus: LabeledCorpus,
    test_corpus: LabeledCorpus,
    factory: ClassifierFactory,
    k: int = 100,
) -> MetricsReport:
    """Train on one event, test on the other; adds per-class @k blocks
    over the classifier-score ranking of the test posts."""
    _check_corpus(train_corpus, "train")
    _check_corpus(test_corpus, "test")
    model = factory(train_corpus)
    gold = [kind for _, kind in test_corpus]
    predictions = [model.predict(text) for text, _ in test_corpus]
    pred = [kind for kind, _ in predictions]
    report = prf(gold, pred)
    at_k: dict[str, AtK] = {}
    for cls in MACRO_CLASSES:
        ranked = sorted(
            ((str(i), scores[cls]) for i, (_, scores) in enumerate(predictions)),
            key=lambda t: (-t[1], int(t[0])),
        )
        relevant = {str(i) for i, g in enumerate(gold) if g is cls}
        at_k[cls.value] = prf_at_k(ranked, relevant, k, len(relevant))
    return MetricsReport(
        report.per_class,
        report.macro_precision,
        report.macro_recall,
        report.macro_f1,
        at_k=at_k,
        extra={"protocol": "crossdomain", "sizes": {"train": len(train_corpus), "test": len(test_corpus)}},
    )


# -- per-field extraction scoring -----------------------------------------


def _field_sets(ann: dict) -> dict[str, set]:
    return {
        "resource": set(ann.get("resources", [])),
        "location": set(ann.get("locations", [])),
        "quantity": {(k, int(v)) for k, v in ann.get("quantities", {}).items()},
        "source": set(ann.get("sources", [])),
        "contact": set(ann.get("contacts", [])),
    }


def extraction_to_annotation(ex: ExtractionResult) -> dict:
    return {
        "resources": sorted(ex.resources),
        "locations": sorted({loc.canonical for loc in ex.locations}),
        "quantities": dict(ex.quantities),
        "sources": list(ex.sources),
        "contacts": [c.value for c in ex.contacts],
    }


def _set_prf(gold: set, pred: set) -> tuple[float, float]:
    """Per-post P/R; empty-vs-empty counts as perfect, empty-vs-some as 0."""
    if not gold and not pred:
        return 1.0, 1.0
    inter = len(gold & pred)
    p = inter / len(pred) if pred else (1.0 if not gold else 0.0)
    r = inter / len(gold) if gold else (1.0 if not pred else 0.0)
    return p, r


def score_extraction(gold: dict[str, dict], pred: dict[str, dict]) -> dict[str, ClassMetrics]:
    """Per-field P/R/F1, averaged over posts, exact-string matching.

    `gold` and `pred` map post id -> annotation dict ({resources: [...],
    locations: [...], quantities: {...}, sources: [...], contacts: [...]}).
    """
    if set(gold) != set(pred):
        missing = set(gold) ^ set(pred)
        raise AlignmentError(f"post ids differ between gold and pred: {sorted(missing)[:5]}")
    if not gold:
        raise AlignmentError("no posts to score")
    sums = {f: [0.0, 0.0] for f in EXTRACTION_FIELDS}
    for pid in gold:
        gsets = _field_sets(gold[pid])
        psets = _field_sets(pred[pid])
        for f in EXTRACTION_FIELDS:
            p, r = _set_prf(gsets[f], psets[f])
            sums[f][0] += p
            sums[f][1] += r
    n = len(gold)
    out: dict[str, ClassMetrics] = {}
    for f in EXTRACTION_FIELDS:
        p, r = sums[f][0] / n, sums[f][1] / n
        out[f] = ClassMetrics(p, r, f1_score(p, r), n)
    return out
