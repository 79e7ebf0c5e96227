"""Architecture manifests, the executable model, and its binary file format."""

from .manifest import (ArchitectureManifest, build_desk, build_profile, build_table1,
                       infer_shapes, manifest_from_text, manifest_to_text)
from .network import Model
from .serialize import FORMAT_VERSION, load_model, model_id, save_model

__all__ = [
    "ArchitectureManifest", "build_desk", "build_profile", "build_table1",
    "infer_shapes", "manifest_from_text", "manifest_to_text",
    "Model", "FORMAT_VERSION", "load_model", "model_id", "save_model",
]
