"""Square-window morphology and kernel label generation."""
from textkernel.morphology.labels import KernelLabels, generate_labels
from textkernel.morphology.ops import (
    DilationSize,
    dilate,
    erode,
    scale_dilation_size,
    soft_dilate,
    soft_dilate_vjp,
)

__all__ = [
    "DilationSize",
    "KernelLabels",
    "dilate",
    "erode",
    "generate_labels",
    "scale_dilation_size",
    "soft_dilate",
    "soft_dilate_vjp",
]
