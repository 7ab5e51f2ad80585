"""choreokit: compile, verify, simulate, and serve multimodal robot tour choreographies."""

from .align import align
from .checker import Finding, ValidationReport, validate_timeline
from .compose import ComposerClient, Selection, compose, compose_all
from .config import Config, PlacementConfig, load_config
from .errors import ChoreokitError
from .library import load_library, load_tour_plan
from .model import (
    AnnotatedScript,
    AssetLibrary,
    DeviceInfo,
    GestureKind,
    GestureUnit,
    LearningCategory,
    LearningPoint,
    SpeechSegment,
    Surface,
    TourPlan,
    VisualAsset,
    query_gestures,
    query_visuals,
)
from .pipeline import CompiledVariant, compile_variants, pick_variant
from .placement import (
    Learner,
    PlacementResult,
    Scene,
    gimbal_angles,
    load_scene,
    solve_placement,
)
from .scripting import (
    GenerationRequest,
    NarrationTechniques,
    StubSpeechClient,
    StubTextGenClient,
    build_generation_request,
    generate_script,
    segment_script,
    synthesize,
)
from .sim import ExecutionTrace, SimConfig, simulate, verify_trace
from .timeline import ChannelEvent, Timeline, emit, parse_timeline

__version__ = "0.1.0"

__all__ = [
    "AnnotatedScript",
    "AssetLibrary",
    "ChannelEvent",
    "ChoreokitError",
    "CompiledVariant",
    "ComposerClient",
    "Config",
    "DeviceInfo",
    "ExecutionTrace",
    "Finding",
    "GenerationRequest",
    "GestureKind",
    "GestureUnit",
    "Learner",
    "LearningCategory",
    "LearningPoint",
    "NarrationTechniques",
    "PlacementConfig",
    "PlacementResult",
    "Scene",
    "Selection",
    "SimConfig",
    "SpeechSegment",
    "StubSpeechClient",
    "StubTextGenClient",
    "Surface",
    "Timeline",
    "TourPlan",
    "ValidationReport",
    "VisualAsset",
    "align",
    "build_generation_request",
    "compile_variants",
    "compose",
    "compose_all",
    "emit",
    "generate_script",
    "gimbal_angles",
    "load_config",
    "load_library",
    "load_scene",
    "load_tour_plan",
    "parse_timeline",
    "pick_variant",
    "query_gestures",
    "query_visuals",
    "segment_script",
    "simulate",
    "solve_placement",
    "synthesize",
    "validate_timeline",
    "verify_trace",
]
