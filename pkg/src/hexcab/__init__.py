"""hexcab: taxi OD-trip analytics over a hexagonal city grid.

Pipeline: synthesize or collect GPS CSVs -> ingest into an immutable store ->
aggregate for the analyst views -> score candidate pick-up points -> serve
everything over HTTP.
"""

from .config import CleaningRules, EngineConfig
from .geo import GridConfig, HexIndex, LonLat, XY
from .ingest import GpsRecord, Trip, VacantSample, clean, extract_trips, ingest_dir
from .poi import CATEGORIES, Poi, PoiIndex, load_pois, nearest_poi, pois_within
from .scoring import Candidate, CandidateScore, ScoreParams, evaluate_region
from .store import Store, write_store
from .synth import SynthSpec, default_engine_config, generate

__version__ = "0.1.0"

__all__ = [
    "CATEGORIES",
    "Candidate",
    "CandidateScore",
    "CleaningRules",
    "EngineConfig",
    "GpsRecord",
    "GridConfig",
    "HexIndex",
    "LonLat",
    "Poi",
    "PoiIndex",
    "ScoreParams",
    "Store",
    "SynthSpec",
    "Trip",
    "VacantSample",
    "XY",
    "clean",
    "default_engine_config",
    "evaluate_region",
    "extract_trips",
    "generate",
    "ingest_dir",
    "load_pois",
    "nearest_poi",
    "pois_within",
    "write_store",
    "__version__",
]
