"""Audio-side companion to the evaluation toolkit.

Turns WAV clips into EMB1 embedding files plus manifest fragments, and
renders seeded prompt-condition clips through a local generator
checkpoint. All coupling to the evaluation toolkit runs through files:
the EMB1 byte layout, the manifest JSON schema, and its CLI.
"""

__version__ = "0.1.0"

from .compose import compose_manifest, load_fragment
from .extract import ExtractionJob, extract
from .generate import condition_prompts, generate_conditions
from .models import load_embedder, load_generator, write_toy_checkpoint

__all__ = [
    "__version__",
    "ExtractionJob",
    "compose_manifest",
    "condition_prompts",
    "extract",
    "generate_conditions",
    "load_embedder",
    "load_fragment",
    "load_generator",
    "write_toy_checkpoint",
]
