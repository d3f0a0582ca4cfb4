from __future__ import annotations

import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from reliefmatch.classify import Hyper
from reliefmatch.evalkit import (
    AlignmentError,
    DegenerateCorpus,
    LengthMismatch,
    SplitSpec,
    cue_factory,
    linear_factory,
    prf,
    prf_at_k,
    run_crossdomain,
    run_indomain,
    score_extraction,
    split_corpus,
)
from reliefmatch.model import PostKind
from reliefmatch.textprep import preprocess

N, A, O = PostKind.NEED, PostKind.AVAILABILITY, PostKind.OTHER


def test_perfect_prediction():
    gold = [N, A, O, N, A]
    report = prf(gold, list(gold))
    assert report.macro_f1 == report.macro_precision == report.macro_recall == 1.0
    for cls in (N, A):
        assert report.per_class[cls.value].f1 == 1.0


def test_all_other_when_gold_all_need():
    report = prf([N, N, N], [O, O, O])
    assert report.per_class[N.value].recall == 0.0
    assert report.macro_f1 == 0.0


def test_harmonic_mean():
    # one-class toy where Need has P=0.5, R=0.5 -> F1 exactly 0.5
    gold = [N, N, A, A]
    pred = [N, A, N, A]
    report = prf(gold, pred)
    assert report.per_class[N.value].precision == 0.5
    assert report.per_class[N.value].recall == 0.5
    assert report.per_class[N.value].f1 == pytest.approx(0.5, abs=1e-9)


def test_length_mismatch():
    with pytest.raises(LengthMismatch):
        prf([N], [N, A])
    with pytest.raises(LengthMismatch):
        prf([], [])


# Five hand-computed confusion cases, frozen to 1e-9. Derivations:
#  case 1: gold NNAA pred NNAA -> everything 1
#  case 2: gold NNNN pred NNAA -> Need P=1 R=.5 F1=2/3; Avail P=0 R=0; macro F1=1/3
#  case 3: gold NAONA pred NANNO -> Need: tp2 fp1 fn0 (P=2/3 R=1 F1=0.8)
#          Avail: tp1 fp0 fn1 (P=1 R=.5 F1=2/3); macro F1 = (0.8+2/3)/2
#  case 4: gold NNAAOO pred AANNOO -> Need and Avail all zero; macro 0
#  case 5: gold NAOOA pred NAOOA with one Avail->Other: gold NAOOA pred NAOOO
#          Avail: tp1 fp0 fn1 -> P=1 R=.5 F1=2/3; Need perfect; macro F1=(1+2/3)/2
HAND_CASES = [
    ([N, N, A, A], [N, N, A, A], 1.0),
    ([N, N, N, N], [N, N, A, A], (2 / 3 + 0.0) / 2),
    ([N, A, O, N, A], [N, A, N, N, O], (0.8 + 2 / 3) / 2),
    ([N, N, A, A, O, O], [A, A, N, N, O, O], 0.0),
    ([N, A, O, O, A], [N, A, O, O, O], (1.0 + 2 / 3) / 2),
]


@pytest.mark.parametrize("gold,pred,expected_macro_f1", HAND_CASES)
def test_hand_computed_confusions(gold, pred, expected_macro_f1):
    report = prf(gold, pred)
    assert report.macro_f1 == pytest.approx(expected_macro_f1, abs=1e-9)


@given(st.lists(st.tuples(st.sampled_from([N, A, O]), st.sampled_from([N, A, O])), min_size=1, max_size=40))
def test_prf_permutation_equivariant(pairs):
    gold = [g for g, _ in pairs]
    pred = [p for _, p in pairs]
    base = prf(gold, pred)
    rng = random.Random(1)
    idx = list(range(len(pairs)))
    rng.shuffle(idx)
    shuffled = prf([gold[i] for i in idx], [pred[i] for i in idx])
    assert shuffled == base


@given(st.lists(st.sampled_from([N, A, O]), min_size=1, max_size=30))
def test_f1_between_min_and_max(gold):
    rng = random.Random(7)
    pred = [rng.choice([N, A, O]) for _ in gold]
    report = prf(gold, pred)
    for m in report.per_class.values():
        if m.precision > 0 and m.recall > 0:
            assert min(m.precision, m.recall) - 1e-12 <= m.f1 <= max(m.precision, m.recall) + 1e-12


def test_at_k_all_relevant():
    ranked = [(f"i{j}", 1.0 - j / 10) for j in range(5)]
    block = prf_at_k(ranked, {f"i{j}" for j in range(5)}, k=5, total_relevant=5)
    assert block.precision == block.recall == block.f1 == 1.0


def test_at_k_none_relevant():
    ranked = [("x", 0.9), ("y", 0.8)]
    block = prf_at_k(ranked, {"z"}, k=2, total_relevant=1)
    assert block.precision == block.recall == block.f1 == 0.0


def test_at_k_arithmetic():
    # 10 relevant inside top-100 of 50 total relevant
    ranked = [(f"r{j}", 1.0) for j in range(10)] + [(f"x{j}", 0.5) for j in range(90)]
    block = prf_at_k(ranked, {f"r{j}" for j in range(50)}, k=100, total_relevant=50)
    assert block.precision == pytest.approx(0.10, abs=1e-9)
    assert block.recall == pytest.approx(0.20, abs=1e-9)
    assert block.f1 == pytest.approx(2 * 0.1 * 0.2 / 0.3, abs=1e-9)


@given(st.integers(min_value=1, max_value=20), st.integers(min_value=0, max_value=20))
def test_at_k_precision_nonincreasing_with_irrelevant_tail(k, extra):
    ranked = [(f"r{j}", 1.0) for j in range(5)]
    padded = ranked + [(f"pad{j}", 0.1) for j in range(extra)]
    rel = {f"r{j}" for j in range(5)}
    p1 = prf_at_k(ranked, rel, k, 5).precision
    p2 = prf_at_k(padded, rel, k + extra, 5).precision if k + extra >= 1 else p1
    assert p2 <= p1 + 1e-12


# -- protocols ---------------------------------------------------------------


def corpus_from(rows):
    return [(preprocess(t), k) for t, k in rows]


def test_split_deterministic_and_sized():
    corpus = corpus_from([(f"text number {i} water", N) for i in range(20)])
    spec = SplitSpec(seed=3)
    a = split_corpus(corpus, spec)
    b = split_corpus(corpus, spec)
    assert [len(x) for x in a] == [14, 2, 4]
    assert [[t.clean_text for t, _ in part] for part in a] == [
        [t.clean_text for t, _ in part] for part in b
    ]


def test_indomain_cue_baseline_on_paper_fixture(ctx):
    from tests.conftest import load_fixture_jsonl

    rows = [(r["text"], PostKind(r["label"])) for r in load_fixture_jsonl("papertable12.jsonl")]
    report = run_indomain(corpus_from(rows), SplitSpec(seed=0), cue_factory(ctx.classifier))
    assert report.macro_f1 == 1.0


def test_indomain_deterministic(ctx):
    corpus = corpus_from(
        [(f"need water {i}", N) for i in range(10)] + [(f"donating rice {i}", A) for i in range(10)]
    )
    r1 = run_indomain(corpus, SplitSpec(seed=7), linear_factory(Hyper(epochs=50)))
    r2 = run_indomain(corpus, SplitSpec(seed=7), linear_factory(Hyper(epochs=50)))
    assert r1.to_json() == r2.to_json()


def test_degenerate_corpus():
    with pytest.raises(DegenerateCorpus):
        run_indomain([], SplitSpec(), linear_factory())


def test_crossdomain_disjoint_vocab_equals_all_other_baseline():
    # Other is the training majority, so an all-OOV test set degenerates to
    # constant-Other predictions; the report must equal that baseline.
    train = corpus_from(
        [("alpha beta", N), ("gamma delta", A)] + [(f"epsilon zeta {i}", O) for i in range(4)]
    )
    test = corpus_from([("uno dos", N), ("tres quatro", A), ("cinco seis", O), ("siete ocho", O)])
    report = run_crossdomain(train, test, linear_factory(Hyper(epochs=200)), k=4)
    gold = [k for _, k in test]
    baseline = prf(gold, [O] * len(gold))
    assert report.macro_f1 == pytest.approx(baseline.macro_f1, abs=1e-12)
    assert report.macro_f1 == 0.0


def test_crossdomain_at_k_blocks_present(ctx):
    train = corpus_from([(f"need water {i}", N) for i in range(6)] + [(f"donating rice {i}", A) for i in range(6)])
    test = corpus_from([("need water now", N), ("donating rice today", A), ("hello world", O)])
    report = run_crossdomain(train, test, linear_factory(Hyper(epochs=100)), k=2)
    assert set(report.at_k) == {"need", "availability"}
    assert report.at_k["need"].k == 2


# -- extraction scoring --------------------------------------------------


GOLD_ANN = {
    "p1": {"resources": ["water", "tents"], "locations": ["kathmandu"], "quantities": {"tents": 2},
           "sources": [], "contacts": []},
    "p2": {"resources": ["rice"], "locations": [], "quantities": {}, "sources": ["India"],
           "contacts": ["98XXX-XXXXX"]},
}


def test_extraction_perfect():
    fields = score_extraction(GOLD_ANN, GOLD_ANN)
    for metrics in fields.values():
        assert metrics.f1 == 1.0


def test_extraction_missing_resource_halves_recall():
    pred = {
        "p1": {**GOLD_ANN["p1"], "resources": ["water"]},
        "p2": GOLD_ANN["p2"],
    }
    fields = score_extraction(GOLD_ANN, pred)
    # post p1 recall 0.5, post p2 recall 1.0 -> mean 0.75
    assert fields["resource"].recall == pytest.approx(0.75)
    assert fields["resource"].precision == pytest.approx(1.0)


def test_extraction_spurious_contact_penalizes_precision():
    pred = {
        "p1": {**GOLD_ANN["p1"], "contacts": ["1234567"]},
        "p2": GOLD_ANN["p2"],
    }
    fields = score_extraction(GOLD_ANN, pred)
    assert fields["contact"].precision == pytest.approx(0.5)  # p1 contributes 0
    assert fields["contact"].recall == pytest.approx(0.5)  # gold-empty + pred-nonempty -> 0


def test_extraction_alignment_error():
    with pytest.raises(AlignmentError):
        score_extraction(GOLD_ANN, {"p1": GOLD_ANN["p1"]})
