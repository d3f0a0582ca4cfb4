"""Post-kind classification: cue-scoring baseline and a linear model.

Both implementations satisfy the same contract: predict returns the
argmax class plus a full score map. The linear model is a desk-scale
softmax regression over unigram presence features; full-scale encoder
models can slot in behind the same contract later.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Protocol

import numpy as np

from . import kernels
from .lexicons import CueLexicon
from .model import KIND_ORDER, PostKind
from .textprep import TokenizedText

MODEL_FORMAT_VERSION = 1


class DegenerateCorpus(ValueError):
    """Training corpus is empty or has a single distinct text."""


class Classifier(Protocol):
    def predict(self, text: TokenizedText) -> tuple[PostKind, dict[PostKind, float]]: ...


def _count_phrase_hits(lowered: list[str], phrase: str) -> int:
    words = phrase.split()
    n = len(words)
    return sum(1 for i in range(len(lowered) - n + 1) if lowered[i : i + n] == words)


def predict_cue_baseline(
    text: TokenizedText, cues: CueLexicon
) -> tuple[PostKind, dict[PostKind, float]]:
    """Count cue-phrase hits per side.

    Other wins only when both sides score zero; a Need/Availability tie
    resolves to Need (safety first: better to over-flag requirements).
    """
    lowered = text.lowered()
    need = float(sum(_count_phrase_hits(lowered, p) for p in cues.need_cues))
    avail = float(sum(_count_phrase_hits(lowered, p) for p in cues.avail_cues))
    scores = {PostKind.NEED: need, PostKind.AVAILABILITY: avail, PostKind.OTHER: 0.0}
    if need == 0.0 and avail == 0.0:
        return PostKind.OTHER, scores
    kind = PostKind.NEED if need >= avail else PostKind.AVAILABILITY
    return kind, scores


@dataclass(frozen=True)
class CueClassifier:
    cues: CueLexicon

    def predict(self, text: TokenizedText) -> tuple[PostKind, dict[PostKind, float]]:
        return predict_cue_baseline(text, self.cues)


@dataclass(frozen=True)
class Hyper:
    learning_rate: float = 0.5
    epochs: int = 300
    l2: float = 1e-4
    seed: int = 0


@dataclass
class LinearModel:
    vocabulary: dict[str, int]
    weights: np.ndarray  # [3, vocab] in KIND_ORDER
    bias: np.ndarray  # [3]
    hyper: Hyper = field(default_factory=Hyper)

    def __post_init__(self) -> None:
        k, d = self.weights.shape
        if k != len(KIND_ORDER) or d != len(self.vocabulary) or self.bias.shape != (k,):
            raise ValueError("model dimensions inconsistent with vocabulary")

    def save(self, path: Path) -> None:
        doc = {
            "version": MODEL_FORMAT_VERSION,
            "vocabulary": self.vocabulary,
            "weights": [float(x) for x in self.weights.ravel()],  # row-major
            "bias": [float(x) for x in self.bias],
            "hyperparameters": {
                "learning_rate": self.hyper.learning_rate,
                "epochs": self.hyper.epochs,
                "l2": self.hyper.l2,
            },
            "seed": self.hyper.seed,
        }
        Path(path).write_text(json.dumps(doc), encoding="utf-8")

    @classmethod
    def load(cls, path: Path) -> LinearModel:
        doc = json.loads(Path(path).read_text(encoding="utf-8"))
        if doc.get("version") != MODEL_FORMAT_VERSION:
            raise ValueError(f"unsupported model version {doc.get('version')!r}")
        vocab = {str(k): int(v) for k, v in doc["vocabulary"].items()}
        k = len(KIND_ORDER)
        weights = np.array(doc["weights"], dtype=np.float64).reshape(k, len(vocab))
        bias = np.array(doc["bias"], dtype=np.float64)
        h = doc["hyperparameters"]
        hyper = Hyper(float(h["learning_rate"]), int(h["epochs"]), float(h["l2"]), int(doc["seed"]))
        return cls(vocab, weights, bias, hyper)

    def predict(self, text: TokenizedText) -> tuple[PostKind, dict[PostKind, float]]:
        return predict_linear(self, text)


def features(text: TokenizedText, vocabulary: dict[str, int]) -> np.ndarray:
    """Unigram presence vector; unknown tokens are ignored."""
    x = np.zeros(len(vocabulary), dtype=np.float64)
    for tok in set(text.lowered()):
        idx = vocabulary.get(tok)
        if idx is not None:
            x[idx] = 1.0
    return x


def train_linear(
    corpus: list[tuple[TokenizedText, PostKind]], hyper: Hyper = Hyper()
) -> LinearModel:
    """Fit softmax regression by full-batch gradient descent.

    Deterministic: the vocabulary is sorted and weights start at zero,
    so identical corpus and hyperparameters give bit-identical models.
    """
    if not corpus:
        raise DegenerateCorpus("empty corpus")
    if len({t.clean_text for t, _ in corpus}) < 2:
        raise DegenerateCorpus("corpus has a single distinct text")
    vocabulary = {tok: i for i, tok in enumerate(sorted({w for t, _ in corpus for w in t.lowered()}))}
    x = np.stack([features(t, vocabulary) for t, _ in corpus])
    y = np.zeros((len(corpus), len(KIND_ORDER)), dtype=np.float64)
    kind_index = {k: i for i, k in enumerate(KIND_ORDER)}
    for row, (_, kind) in enumerate(corpus):
        y[row, kind_index[kind]] = 1.0
    w, b, _losses = kernels.logreg_fit(x, y, hyper.learning_rate, hyper.l2, hyper.epochs)
    return LinearModel(vocabulary, w, b, hyper)


def predict_linear(
    model: LinearModel, text: TokenizedText, other_margin: float = 0.0
) -> tuple[PostKind, dict[PostKind, float]]:
    """Softmax scores over the three kinds; argmax with fixed-order ties.

    ``other_margin`` lowers Other's effective score before the argmax,
    trading precision for recall on the actionable classes; reported
    scores stay the raw softmax (they sum to 1).
    """
    x = features(text, model.vocabulary)
    z = model.weights @ x + model.bias
    z = z - z.max()
    e = np.exp(z)
    p = e / e.sum()
    scores = {kind: float(p[i]) for i, kind in enumerate(KIND_ORDER)}
    effective = p.copy()
    effective[KIND_ORDER.index(PostKind.OTHER)] -= other_margin
    kind = KIND_ORDER[int(np.argmax(effective))]
    return kind, scores


@dataclass(frozen=True)
class ThresholdedLinearClassifier:
    """Linear model with the recall-oriented Other margin baked in."""

    model: LinearModel
    other_margin: float = 0.0

    def predict(self, text: TokenizedText) -> tuple[PostKind, dict[PostKind, float]]:
        return predict_linear(self.model, text, self.other_margin)
