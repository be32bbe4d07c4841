"""Search space, reward and random search for the kernel detector backbone."""
from textkernel.nas.reward import FPS_TARGETS, ModelMetrics, RewardParams, reward
from textkernel.nas.search import random_search
from textkernel.nas.search_space import Architecture, CandidateOp, sample_architecture, search_space_size

__all__ = [
    "FPS_TARGETS",
    "Architecture",
    "CandidateOp",
    "ModelMetrics",
    "RewardParams",
    "random_search",
    "reward",
    "sample_architecture",
    "search_space_size",
]
