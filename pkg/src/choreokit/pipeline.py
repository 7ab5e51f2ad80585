"""End-to-end compilation: plan -> script -> segments -> selections -> timeline."""

from __future__ import annotations

from dataclasses import dataclass, field

from .align import align
from .checker import ValidationReport, validate_timeline
from .compose import ComposerClient, Selection, compose_all
from .config import Config
from .errors import ChoreokitError
from .model import AnnotatedScript, AssetLibrary, SpeechSegment, TourPlan
from .scripting import (
    NarrationTechniques,
    SpeechClient,
    TextGenClient,
    build_generation_request,
    generate_script,
    make_speech_client,
    make_text_gen_client,
    segment_script,
    synthesize,
)
from .timeline import Timeline


class CompileError(ChoreokitError):
    """A pipeline stage failed; carries the stage name."""

    def __init__(self, stage: str, cause: Exception):
        self.stage = stage
        self.cause = cause
        super().__init__(f"[{stage}] {cause}")


@dataclass
class CompiledVariant:
    label: str
    script: AnnotatedScript
    segments: list[SpeechSegment]
    selections: dict[str, Selection]
    timeline: Timeline
    warnings: list[str] = field(default_factory=list)
    report: ValidationReport | None = None

    def total_duration_ms(self) -> int:
        return self.timeline.end_ms()

    def device_durations_ms(self) -> dict[str, int]:
        """Per-device speech time including the pauses between segments."""
        totals: dict[str, int] = {}
        for event in self.timeline.speech:
            ms = (event.end_ms - event.start_ms) \
                + self.timeline.pauses.get(event.segment_id, 0)
            totals[event.device_id or "?"] = totals.get(event.device_id or "?", 0) + ms
        return totals


def compile_variants(
    library: AssetLibrary,
    plan: TourPlan,
    config: Config,
    text_client: TextGenClient | None = None,
    speech_client: SpeechClient | None = None,
    composer_client: ComposerClient | None = None,
    techniques: NarrationTechniques | None = None,
    n_variants: int | None = None,
) -> list[CompiledVariant]:
    """Compile every narration variant into its own validated timeline."""
    text_client = text_client or make_text_gen_client(config.text_gen_client)
    speech_client = speech_client or make_speech_client(
        config.speech_client, config.stub_speech_rate_chars_per_sec)
    wanted = n_variants or config.n_variants

    diagnostics: list[str] = []
    request = _stage("generate", build_generation_request, plan, library, techniques)
    scripts = _stage("generate", generate_script,
                     request, text_client, wanted, library, diagnostics)

    variants: list[CompiledVariant] = []
    for script in scripts:
        segments = _stage("segment", segment_script,
                          script, library, config.sentence_terminators)
        segments = _stage("synthesize", synthesize, segments, speech_client)
        selections = _stage("compose", compose_all,
                            segments, library, composer_client,
                            config.max_gestures_per_segment)
        warnings = list(diagnostics)
        timeline = _stage("align", align, segments, selections, config,
                          plan.tour_id, script.variant, warnings)
        report = validate_timeline(timeline, library)
        variants.append(CompiledVariant(
            label=script.variant,
            script=script,
            segments=segments,
            selections=selections,
            timeline=timeline,
            warnings=warnings,
            report=report,
        ))
    return variants


def pick_variant(variants: list[CompiledVariant], label: str | None) -> CompiledVariant:
    """The requested variant, or the first one when no label is given."""
    if label is None:
        return variants[0]
    for variant in variants:
        if variant.label == label:
            return variant
    raise CompileError("select", KeyError(f"no variant labelled {label!r}"))


def _stage(stage: str, fn, *args):
    try:
        return fn(*args)
    except ChoreokitError as exc:
        raise CompileError(stage, exc) from exc
    except ValueError as exc:
        raise CompileError(stage, exc) from exc
