"""Pseudo-label synthesis from point/line weak annotations.

Grayscale slices plus sparse point/line annotations go in; binary
pseudo-label masks come out, produced by backbone-seeded region growing
constrained by Bezier-corrected annotation geometry.
"""

__version__ = "0.1.0"

from .pseudolabel import GrowConfig, generate_pseudo_label
from .weaklabel import parse_weak_labels, serialize_weak_labels
from .evaluation import dice, bce_dice_loss

__all__ = [
    "GrowConfig",
    "generate_pseudo_label",
    "parse_weak_labels",
    "serialize_weak_labels",
    "dice",
    "bce_dice_loss",
    "__version__",
]
