"""stylegap: embedding-space evaluation of prompt-level style control.

Library layout:

* ``emb1``       - EMB1 binary container for embedding matrices
* ``manifest``   - experiment manifest schema, validation, indexing
* ``prompts``    - descriptor bundles and prompt construction
* ``metrics``    - cosine / nearest-reference / Fréchet / delta metrics
* ``protocol``   - per-condition evaluation and aggregation
* ``synth``      - seeded synthetic populations and metric oracles
* ``scenarios``  - synthetic fixture manifests with known geometry
* ``report``     - canonical report documents (JSON/CSV)
* ``cli``        - ``stylegap`` command line entry point
"""

__version__ = "0.1.0"

from .conditions import ConditionKey
from .emb1 import EmbeddingMatrix, read_emb1, write_emb1
from .manifest import ClipRecord, Manifest, load_manifest
from .metrics import (
    DeltaStat,
    GaussianSummary,
    MinDistanceResult,
    centroid_similarity,
    cosine_distance,
    delta,
    estimate_gaussian,
    frechet_distance,
    min_distance,
    min_distance_condition,
)
from .prompts import DescriptorBundle, PromptSet, build_prompts, load_bundle, parse_bundle
from .protocol import (
    AggregateReport,
    ConditionMetrics,
    EvalConfig,
    aggregate,
    cross_artist_matrix,
    evaluate_condition,
    pair_by_seed,
)
from .synth import SynthSpec, analytic_fad, brute_force_dmin, sample_population

__all__ = [
    "__version__",
    "AggregateReport",
    "ClipRecord",
    "ConditionKey",
    "ConditionMetrics",
    "DeltaStat",
    "DescriptorBundle",
    "EmbeddingMatrix",
    "EvalConfig",
    "GaussianSummary",
    "Manifest",
    "MinDistanceResult",
    "PromptSet",
    "SynthSpec",
    "aggregate",
    "analytic_fad",
    "brute_force_dmin",
    "build_prompts",
    "centroid_similarity",
    "cosine_distance",
    "cross_artist_matrix",
    "delta",
    "estimate_gaussian",
    "evaluate_condition",
    "frechet_distance",
    "load_bundle",
    "load_manifest",
    "min_distance",
    "min_distance_condition",
    "pair_by_seed",
    "parse_bundle",
    "read_emb1",
    "sample_population",
    "write_emb1",
]
