"""Conditional VAE that generates tonal-tension feature curves from melodies."""

from .data import Normalizer, Sample, encode_batch, load_manifest, load_samples, split_samples
from .generate import (
    LatentDirection,
    apply_direction,
    bottom_dimensions,
    contrast_sets,
    generate_feature_file,
    latent_direction,
    reconstruct_feature_file,
    top_dimensions,
)
from .model import CurveGenerator, ModelConfig, loss_components, total_loss
from .train import evaluate, load_checkpoint, train

__version__ = "0.1.0"
