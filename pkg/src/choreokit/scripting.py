"""Script generation, segmentation, and speech synthesis.

Text generation and speech synthesis are pluggable clients behind small
protocols.  The bundled stubs are fully deterministic so compiled tours are
reproducible byte for byte; HTTP clients speak the documented JSON schemas
(see README) for hooking up real services.
"""

from __future__ import annotations

import hashlib
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Protocol

import httpx

from .errors import (
    GenerationError,
    ScriptValidationError,
    SegmentationError,
    SynthesisError,
    UnknownIdError,
)
from .model import (
    AnnotatedScript,
    AssetLibrary,
    DeviceInfo,
    DeviceSection,
    LearningCategory,
    LearningPoint,
    ScriptBlock,
    SpeechSegment,
    TourPlan,
)

DEFAULT_TERMINATORS = ".!?。！？"

DEFAULT_TRANSITIONS = (
    "That covers this station; please follow me to the {next}.",
    "Let us move on: the {next} is right over here.",
    "Next we will visit the {next}; come along.",
)

CLOSING_LINES = (
    "This brings the tour to an end; I hope the explanations were helpful.",
    "That concludes our tour; feel free to revisit any station.",
)

LEAD_INS = {
    LearningCategory.HOW_IT_WORKS: (
        "Let me explain how the {name} works.",
        "First, a look at what makes the {name} tick.",
        "Here is the working principle of the {name}.",
    ),
    LearningCategory.OPERATION: (
        "Now for operating the {name}.",
        "Here is how you use the {name} in practice.",
        "Let me walk you through running the {name}.",
    ),
    LearningCategory.SAFETY: (
        "Before you work with the {name}, a word on safety.",
        "Keep these precautions in mind around the {name}.",
        "Safety matters at the {name}.",
    ),
}

ELABORATIONS = (
    "Keep this in mind whenever you work at this station.",
    "You will see this come up as soon as you try it yourself.",
    "Most beginners find this the key thing to remember.",
)


@dataclass(frozen=True)
class NarrationTechniques:
    """Directives steering narration style."""

    transition_phrases: tuple[str, ...] = DEFAULT_TRANSITIONS
    analogy_hints: tuple[str, ...] = ()
    target_minutes_per_device: tuple[float, float] = (4.0, 5.0)


@dataclass(frozen=True)
class GenerationRequest:
    plan: TourPlan
    devices: tuple[DeviceInfo, ...]
    learning_points: tuple[tuple[LearningPoint, ...], ...]
    techniques: NarrationTechniques = field(default_factory=NarrationTechniques)


def build_generation_request(
    plan: TourPlan,
    library: AssetLibrary,
    techniques: NarrationTechniques | None = None,
) -> GenerationRequest:
    devices = []
    points = []
    for device_id in plan.devices:
        if device_id not in library.devices:
            raise UnknownIdError(f"unknown device id {device_id!r}")
        devices.append(library.devices[device_id])
        points.append(tuple(library.learning_points_of(device_id)))
    return GenerationRequest(
        plan, tuple(devices), tuple(points), techniques or NarrationTechniques())


class TextGenClient(Protocol):
    def generate_scripts(
        self, request: GenerationRequest, n_variants: int
    ) -> list[AnnotatedScript]: ...


class SpeechClient(Protocol):
    def synthesize_text(self, text: str) -> tuple[str, int]:
        """Return (audio_ref, duration_ms) for the given text."""
        ...


# --- sentence splitting -----------------------------------------------------

def split_sentences(text: str, terminators: str = DEFAULT_TERMINATORS) -> list[tuple[int, str]]:
    """Split text at runs of terminator characters.

    Returns (start_offset, sentence) pairs; offsets index into the original
    string and each sentence keeps its terminators.  Trailing text without a
    terminator counts as a final sentence.
    """
    sentences: list[tuple[int, str]] = []
    term = set(terminators)
    i = 0
    n = len(text)
    while i < n:
        while i < n and text[i].isspace():
            i += 1
        if i >= n:
            break
        start = i
        while i < n and text[i] not in term:
            i += 1
        while i < n and text[i] in term:
            i += 1
        sentences.append((start, text[start:i]))
    return sentences


def normalize_text(text: str) -> str:
    """Collapse all whitespace runs to single spaces and strip the ends."""
    return " ".join(text.split())


# --- script validation ------------------------------------------------------

def script_problems(
    script: AnnotatedScript, plan: TourPlan, library: AssetLibrary
) -> list[str]:
    """All contract violations of a candidate script; empty means valid."""
    problems: list[str] = []
    order = tuple(section.device_id for section in script.sections)
    if order != plan.devices:
        problems.append(f"device order {order} does not match the tour plan {plan.devices}")
    for section in script.sections:
        marked: set[str] = set()
        for b, block in enumerate(section.blocks):
            where = f"{section.device_id} block {b}"
            if not block.text.strip():
                problems.append(f"{where}: empty text")
            if block.learning_point_id is None:
                if block.marker_offset is not None:
                    problems.append(f"{where}: marker offset without a learning point")
                continue
            lp = library.learning_points.get(block.learning_point_id)
            if lp is None:
                problems.append(f"{where}: unknown learning point {block.learning_point_id!r}")
                continue
            if lp.device_id != section.device_id:
                problems.append(
                    f"{where}: learning point {lp.id!r} belongs to device {lp.device_id!r}")
            if lp.id in marked:
                problems.append(f"{where}: learning point {lp.id!r} marked twice")
            marked.add(lp.id)
            if block.marker_offset is not None and not (
                    0 <= block.marker_offset < len(block.text)):
                problems.append(f"{where}: marker offset {block.marker_offset} out of range")
    return problems


# --- stub text generation ---------------------------------------------------

class StubTextGenClient:
    """Deterministic template narrator.

    Per device, emits one marked block per learning point (lead-in sentence,
    the point statement, one elaboration sentence) followed by one unmarked
    transition block.  Variant k rotates every phrase list by k, so variants
    differ in wording but cover identical learning points.
    """

    def generate_scripts(
        self, request: GenerationRequest, n_variants: int
    ) -> list[AnnotatedScript]:
        return [
            self._one_variant(request, v) for v in range(n_variants)
        ]

    def _one_variant(self, request: GenerationRequest, variant_index: int) -> AnnotatedScript:
        techniques = request.techniques
        sections = []
        for d, device in enumerate(request.devices):
            blocks = []
            for k, lp in enumerate(request.learning_points[d]):
                lead = _pick(LEAD_INS[lp.category], variant_index + k).format(name=device.name)
                statement = lp.text if lp.text[-1] in DEFAULT_TERMINATORS else lp.text + "."
                parts = [lead, statement, _pick(ELABORATIONS, variant_index + k)]
                if k == 0 and techniques.analogy_hints:
                    parts.append(
                        "Think of it like "
                        + _pick(techniques.analogy_hints, variant_index + d) + ".")
                text = " ".join(parts)
                blocks.append(ScriptBlock(
                    text, learning_point_id=lp.id, marker_offset=len(lead) + 1))
            if d + 1 < len(request.devices):
                transition = _pick(techniques.transition_phrases, variant_index + d).format(
                    next=request.devices[d + 1].name)
            else:
                transition = _pick(CLOSING_LINES, variant_index)
            blocks.append(ScriptBlock(transition))
            sections.append(DeviceSection(device.id, tuple(blocks)))
        return AnnotatedScript(tuple(sections), variant=f"v{variant_index + 1}")


def _pick(options: tuple[str, ...], index: int) -> str:
    return options[index % len(options)]


# --- operations ---------------------------------------------------------------

def generate_script(
    request: GenerationRequest,
    client: TextGenClient,
    n_variants: int,
    library: AssetLibrary,
    diagnostics: list[str] | None = None,
) -> list[AnnotatedScript]:
    """Generate candidate scripts and keep only those passing validation."""
    if n_variants < 1:
        raise ValueError("n_variants must be at least 1")
    try:
        candidates = client.generate_scripts(request, n_variants)
    except Exception as exc:
        raise GenerationError(f"text generation client failed: {exc}") from exc
    valid: list[AnnotatedScript] = []
    rejected: list[str] = []
    for i, candidate in enumerate(candidates[:n_variants]):
        problems = script_problems(candidate, request.plan, library)
        if problems:
            note = f"variant {candidate.variant or i}: " + "; ".join(problems)
            rejected.append(note)
            if diagnostics is not None:
                diagnostics.append(note)
        else:
            valid.append(candidate)
    if not valid:
        raise GenerationError(
            "no valid script variant: " + (" | ".join(rejected) or "client returned nothing"))
    return valid


def segment_script(
    script: AnnotatedScript,
    library: AssetLibrary,
    terminators: str = DEFAULT_TERMINATORS,
) -> list[SpeechSegment]:
    """Cut a script into speech segments at sentence boundaries.

    Unmarked prose yields one segment per sentence.  In a marked block, the
    sentences before the marker split off unmarked; the sentence carrying the
    marker and everything after it stay together as the single segment that
    owns the learning point.
    """
    if not script.sections or not script.full_text().strip():
        raise SegmentationError("script has no narration text")
    segments: list[SpeechSegment] = []
    for section in script.sections:
        order = 0
        for block in section.blocks:
            sentences = split_sentences(block.text, terminators)
            if not sentences:
                raise SegmentationError(
                    f"block without sentences in section {section.device_id!r}")
            pieces: list[tuple[str, str | None]] = []
            if block.learning_point_id is None:
                pieces = [(s, None) for _, s in sentences]
            else:
                offset = block.marker_offset or 0
                marked = 0
                for i, (start, _) in enumerate(sentences):
                    if start <= offset:
                        marked = i
                pieces = [(s, None) for _, s in sentences[:marked]]
                marked_text = block.text[sentences[marked][0]:].strip()
                pieces.append((marked_text, block.learning_point_id))
            for text, lp_id in pieces:
                segments.append(SpeechSegment(
                    id=f"{section.device_id}-s{order:03d}",
                    device_id=section.device_id,
                    order_index=order,
                    text=text,
                    learning_point_id=lp_id,
                ))
                order += 1
    return segments


def synthesize(
    segments: list[SpeechSegment],
    client: SpeechClient,
    max_workers: int = 1,
) -> list[SpeechSegment]:
    """Attach audio references and durations to every segment.

    Client calls may run concurrently; results are reassembled in input
    order, so the output does not depend on completion order.  Any failure
    aborts with the successfully synthesized prefix attached to the error.
    """
    for segment in segments:
        if not segment.text.strip():
            raise SynthesisError(f"segment {segment.id!r} has empty text")

    def run(segment: SpeechSegment) -> SpeechSegment:
        audio_ref, duration_ms = client.synthesize_text(segment.text)
        if not isinstance(duration_ms, int) or duration_ms <= 0:
            raise SynthesisError(
                f"segment {segment.id!r}: client returned invalid duration {duration_ms!r}")
        return SpeechSegment(
            id=segment.id, device_id=segment.device_id,
            order_index=segment.order_index, text=segment.text,
            learning_point_id=segment.learning_point_id,
            audio_ref=audio_ref, duration_ms=duration_ms)

    results: list[SpeechSegment | None] = [None] * len(segments)
    errors: list[str] = []
    if max_workers > 1:
        with ThreadPoolExecutor(max_workers=max_workers) as pool:
            futures = [pool.submit(run, s) for s in segments]
            for i, future in enumerate(futures):
                try:
                    results[i] = future.result()
                except Exception as exc:
                    errors.append(f"{segments[i].id}: {exc}")
    else:
        for i, segment in enumerate(segments):
            try:
                results[i] = run(segment)
            except Exception as exc:
                errors.append(f"{segment.id}: {exc}")
                break
    if errors:
        completed = [r for r in results if r is not None]
        raise SynthesisError(
            f"synthesis failed for {len(errors)} segment(s): {'; '.join(errors)}",
            completed=completed)
    return [r for r in results if r is not None]


# --- clients -----------------------------------------------------------------

class StubSpeechClient:
    """Duration model: duration_ms = ceil(chars / rate * 1000)."""

    def __init__(self, rate_chars_per_sec: float = 5.0):
        if rate_chars_per_sec <= 0:
            raise ValueError("rate must be positive")
        self.rate = rate_chars_per_sec

    def synthesize_text(self, text: str) -> tuple[str, int]:
        if not text:
            raise SynthesisError("cannot synthesize empty text")
        duration_ms = math.ceil(len(text) * 1000.0 / self.rate)
        digest = hashlib.sha1(text.encode("utf-8")).hexdigest()[:12]
        return f"audio/{digest}.wav", duration_ms


def script_to_dict(script: AnnotatedScript) -> dict:
    return {
        "variant": script.variant,
        "sections": [
            {
                "device_id": section.device_id,
                "blocks": [
                    {
                        "text": block.text,
                        "learning_point_id": block.learning_point_id,
                        "marker_offset": block.marker_offset,
                    }
                    for block in section.blocks
                ],
            }
            for section in script.sections
        ],
    }


def script_from_dict(raw: dict) -> AnnotatedScript:
    sections = []
    for section in raw.get("sections", []):
        blocks = tuple(
            ScriptBlock(
                text=block["text"],
                learning_point_id=block.get("learning_point_id"),
                marker_offset=block.get("marker_offset"),
            )
            for block in section.get("blocks", [])
        )
        sections.append(DeviceSection(section["device_id"], blocks))
    return AnnotatedScript(tuple(sections), variant=raw.get("variant", "v1"))


class HttpTextGenClient:
    """POSTs the generation request to a service returning script JSON."""

    def __init__(self, endpoint: str, client: httpx.Client | None = None):
        self.endpoint = endpoint
        self._client = client or httpx.Client(timeout=60.0)

    def generate_scripts(
        self, request: GenerationRequest, n_variants: int
    ) -> list[AnnotatedScript]:
        payload = {
            "n_variants": n_variants,
            "tour_id": request.plan.tour_id,
            "devices": [
                {
                    "id": device.id,
                    "name": device.name,
                    "description": device.description,
                    "learning_points": [
                        {"id": lp.id, "category": lp.category.value, "text": lp.text}
                        for lp in request.learning_points[d]
                    ],
                }
                for d, device in enumerate(request.devices)
            ],
            "techniques": {
                "transition_phrases": list(request.techniques.transition_phrases),
                "analogy_hints": list(request.techniques.analogy_hints),
                "target_minutes_per_device": list(request.techniques.target_minutes_per_device),
            },
        }
        response = self._client.post(self.endpoint, json=payload)
        response.raise_for_status()
        scripts = response.json().get("scripts", [])
        return [script_from_dict(s) for s in scripts]


class HttpSpeechClient:
    """POSTs {"text": ...} and expects {"audio_ref": ..., "duration_ms": ...}."""

    def __init__(self, endpoint: str, client: httpx.Client | None = None):
        self.endpoint = endpoint
        self._client = client or httpx.Client(timeout=60.0)

    def synthesize_text(self, text: str) -> tuple[str, int]:
        response = self._client.post(self.endpoint, json={"text": text})
        response.raise_for_status()
        body = response.json()
        return body["audio_ref"], int(body["duration_ms"])


def make_text_gen_client(target: str) -> TextGenClient:
    return StubTextGenClient() if target == "stub" else HttpTextGenClient(target)


def make_speech_client(target: str, stub_rate: float = 5.0) -> SpeechClient:
    return StubSpeechClient(stub_rate) if target == "stub" else HttpSpeechClient(target)


def validate_script(script: AnnotatedScript, plan: TourPlan, library: AssetLibrary) -> None:
    """Raise ScriptValidationError unless the script meets its contract."""
    problems = script_problems(script, plan, library)
    if problems:
        raise ScriptValidationError("; ".join(problems))
