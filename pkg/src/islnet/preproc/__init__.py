"""Image preprocessing: grayscale, thresholding, Canny edges, staged pipeline."""

from .ops import (GradientField, binary_threshold, gradient_angle, gradient_magnitude,
                  resize, sobel_gradients, to_grayscale)
from .canny import canny, gaussian_kernel, hysteresis, non_maximum_suppression, quantize_direction
from .pipeline import (DEFAULT_STAGES, PipelineConfig, load_image, paper_literal_config,
                       run_pipeline, save_gray_png)

__all__ = [
    "GradientField", "binary_threshold", "gradient_angle", "gradient_magnitude",
    "resize", "sobel_gradients", "to_grayscale",
    "canny", "gaussian_kernel", "hysteresis", "non_maximum_suppression", "quantize_direction",
    "DEFAULT_STAGES", "PipelineConfig", "load_image", "paper_literal_config",
    "run_pipeline", "save_gray_png",
]
