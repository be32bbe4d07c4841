"""Connected components labeling."""
from textkernel.ccl.label_map import LabelMap
from textkernel.ccl.labeling import label_components, label_components_parallel

__all__ = ["LabelMap", "label_components", "label_components_parallel"]
