from textkernel.postprocess.pipeline import (
    Detection,
    PostprocessConfig,
    binarize,
    dilate_labels,
    reconstruct,
    reconstruct_text_lines,
    training_forward,
)

__all__ = [
    "Detection",
    "PostprocessConfig",
    "binarize",
    "dilate_labels",
    "reconstruct",
    "reconstruct_text_lines",
    "training_forward",
]
