"""Dice loss, OHEM and their verification suite."""
from textkernel.losses.dice import (
    LossWeights,
    dice_loss,
    dice_loss_grad,
    ohem_select,
    supervision_gradient,
    total_loss,
)

__all__ = ["LossWeights", "dice_loss", "dice_loss_grad", "ohem_select", "supervision_gradient", "total_loss"]
