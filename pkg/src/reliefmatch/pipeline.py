"""End-to-end parse pipeline: preprocess -> classify -> extract -> geo.

A PipelineContext bundles the loaded knowledge files, the classifier
and the event bounds; `parse_text` is the single entry point used by
the REST /parse handler, the batch CLI and the test fixtures.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

from . import extract as ex
from . import geo
from .classify import Classifier, CueClassifier, LinearModel, ThresholdedLinearClassifier
from .lexicons import LexiconSet, data_path, load_default
from .model import ExtractionResult, PostKind
from .textprep import TokenizedText, preprocess


@dataclass
class PipelineContext:
    lexicons: LexiconSet
    gazetteer: geo.GazetteerSnapshot
    bounds: geo.EventBounds
    classifier: Classifier
    covert_tagger: ex.CovertTagger
    sim_threshold: float = ex.DEFAULT_SIM_THRESHOLD

    @classmethod
    def default(
        cls,
        event: str = "nepal",
        classifier: Classifier | None = None,
        model_path: Path | None = None,
        other_margin: float = 0.0,
    ) -> PipelineContext:
        lexicons = load_default()
        gazetteer = geo.load_gazetteer(data_path("gazetteer.csv"))
        bounds = geo.load_event_bounds(data_path(f"bounds_{event}.json"))
        if classifier is None:
            if model_path is not None:
                classifier = ThresholdedLinearClassifier(LinearModel.load(model_path), other_margin)
            else:
                classifier = CueClassifier(lexicons.cues)
        tagger = ex.CovertTagger.from_lexicons(lexicons.cues, lexicons.resources)
        return cls(lexicons, gazetteer, bounds, classifier, tagger)


@dataclass(frozen=True)
class ParseOutcome:
    kind: PostKind
    scores: dict[PostKind, float]
    extraction: ExtractionResult
    tokenized: TokenizedText


def extract_fields(text: TokenizedText, ctx: PipelineContext) -> ExtractionResult:
    lex = ctx.lexicons.resources
    cues = ctx.lexicons.cues
    cands = ex.candidate_resources(text, cues, lex, ctx.lexicons.stopwords)
    verified = ex.verify_resources(cands, lex, ctx.sim_threshold)
    resources = {phrase for phrase, _ in verified}
    classes = {rclass for _, rclass in verified} | ex.tag_covert(text, ctx.covert_tagger)

    quantities = ex.attach_quantities(text, resources, ctx.lexicons.numbers, lex)
    loc_cands = geo.candidate_locations(text, ctx.lexicons.wordlist)
    locations = geo.verify_locations(loc_cands, ctx.gazetteer, ctx.bounds)
    contacts = ex.extract_contacts(text.clean_text)
    sources = ex.extract_sources(
        text,
        locations={loc.surface for loc in locations} | {loc.canonical for loc in locations},
        resources=resources,
        lex=lex,
        cues=cues,
        stopwords=ctx.lexicons.stopwords,
    )
    return ExtractionResult(
        resources=frozenset(resources),
        resource_classes=frozenset(classes),
        quantities=quantities,
        locations=tuple(locations),
        sources=tuple(sources),
        contacts=tuple(contacts),
    )


def parse_text(text_raw: str, ctx: PipelineContext) -> ParseOutcome:
    tokenized = preprocess(text_raw)
    kind, scores = ctx.classifier.predict(tokenized)
    extraction = extract_fields(tokenized, ctx)
    return ParseOutcome(kind=kind, scores=scores, extraction=extraction, tokenized=tokenized)
