"""Metrics and dataset-level evaluation: Dice, BCE+Dice loss, manifest
evaluation, and the four-row ablation ladder."""

import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import imageio
from .errors import ContractError, ParameterError, WeakGrowError
from .pseudolabel import GrowConfig, generate_pseudo_label
from .weaklabel import parse_weak_labels

_LOG_FLOOR = 1e-7

ABLATION_STAGES = (
    ("center point growth", (False, False, False)),
    ("backbone growth", (True, False, False)),
    ("backbone growth + difficult area filling", (True, True, False)),
    ("backbone growth + difficult area filling + edge limiting", (True, True, True)),
)


def dice(x, y, union_denominator=False):
    """Dice overlap of two binary masks; both empty counts as 1.

    `union_denominator` switches to the literal 2|X∩Y|/|X∪Y| variant for
    auditing (which exceeds 1 for overlapping masks).
    """
    x = np.asarray(x, dtype=np.bool_)
    y = np.asarray(y, dtype=np.bool_)
    if x.shape != y.shape:
        raise ContractError(f"mask shapes differ: {x.shape} vs {y.shape}")
    inter = int(np.logical_and(x, y).sum())
    if union_denominator:
        denom = int(np.logical_or(x, y).sum())
    else:
        denom = int(x.sum()) + int(y.sum())
    if denom == 0:
        return 1.0
    return 2.0 * inter / denom


def _sample_loss(pred, target, full_bce):
    pred = np.asarray(pred, dtype=np.float64)
    target = np.asarray(target)
    if pred.shape != target.shape:
        raise ContractError(f"pred/target shapes differ: {pred.shape} vs {target.shape}")
    if pred.min() < 0.0 or pred.max() > 1.0:
        raise ParameterError("prediction values must lie in [0, 1]")
    y = target.astype(np.float64)
    # clip only the log arguments so an exact prediction yields exactly 0
    log_p = np.log(np.clip(pred, _LOG_FLOOR, 1.0))
    if full_bce:
        log_q = np.log(np.clip(1.0 - pred, _LOG_FLOOR, 1.0))
        bce = float(np.mean(-0.5 * (y * log_p + (1.0 - y) * log_q)))
    else:
        bce = float(np.mean(-0.5 * y * log_p))
    denom = float(y.sum() + pred.sum())
    dice_term = 0.0 if denom == 0.0 else 1.0 - 2.0 * float((y * pred).sum()) / denom
    return bce + dice_term


def bce_dice_loss(pred, target, full_bce=False):
    """BCE+Dice loss on one probability map / mask pair or a batch of pairs.

    The BCE half keeps only the positive-class term (with a `full_bce`
    switch for the standard two-term form); the Dice half is the soft-Dice
    complement. Batch loss is the mean of per-sample losses.
    """
    if isinstance(pred, (list, tuple)):
        if len(pred) != len(target) or not pred:
            raise ContractError("batch inputs must be non-empty and equally long")
        return float(np.mean([_sample_loss(p, t, full_bce) for p, t in zip(pred, target)]))
    return _sample_loss(pred, target, full_bce)


@dataclass(frozen=True)
class SliceResult:
    image: str
    dice: float


@dataclass(frozen=True)
class DatasetReport:
    per_slice: tuple
    skipped_no_truth: int = 0
    errors: tuple = field(default_factory=tuple)

    @property
    def mean_dice(self):
        if not self.per_slice:
            return None
        return float(np.mean([s.dice for s in self.per_slice]))


@dataclass(frozen=True)
class AblationRow:
    name: str
    mean_dice: float
    per_slice: tuple
    count: int


@dataclass(frozen=True)
class AblationReport:
    rows: tuple


def load_manifest(path):
    """Manifest: JSON array of {image, labels, ground_truth?} records with
    paths relative to the manifest file."""
    path = Path(path)
    try:
        entries = json.loads(path.read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise ParameterError(f"unreadable manifest {path}: {exc}") from exc
    if not isinstance(entries, list):
        raise ParameterError("manifest must be a JSON array")
    base = path.parent
    out = []
    for i, e in enumerate(entries):
        if not isinstance(e, dict) or "image" not in e or "labels" not in e:
            raise ParameterError(f"manifest entry {i} needs 'image' and 'labels' keys")
        out.append(
            {
                "image": base / e["image"],
                "labels": base / e["labels"],
                "ground_truth": base / e["ground_truth"] if e.get("ground_truth") else None,
            }
        )
    return out


def _entry_pairs(entries, cfg):
    """Yield (name, pseudo mask, truth mask) per evaluable entry."""
    for entry in entries:
        name = str(entry["image"])
        img = imageio.read_gray(entry["image"])
        labels = parse_weak_labels(Path(entry["labels"]).read_text())
        truth = imageio.read_mask(entry["ground_truth"])
        result = generate_pseudo_label(img, labels, cfg)
        yield name, result.mask, truth


def evaluate_dataset(entries, cfg=None):
    """Per-slice and mean Dice of generated pseudo-labels vs ground truth.

    Entries without ground truth are skipped and counted; unreadable
    entries are recorded as errors and evaluation continues.
    """
    cfg = cfg or GrowConfig()
    per_slice = []
    errors = []
    skipped = 0
    for entry in entries:
        if entry.get("ground_truth") is None:
            skipped += 1
            continue
        try:
            for name, mask, truth in _entry_pairs([entry], cfg):
                per_slice.append(SliceResult(image=name, dice=dice(mask, truth)))
        except (OSError, WeakGrowError) as exc:
            errors.append((str(entry["image"]), str(exc)))
    return DatasetReport(
        per_slice=tuple(per_slice), skipped_no_truth=skipped, errors=tuple(errors)
    )


def ablate(entries, cfg=None):
    """Run the cumulative stage ladder and report one row per stage set."""
    cfg = cfg or GrowConfig()
    rows = []
    for name, stages in ABLATION_STAGES:
        report = evaluate_dataset(entries, cfg.with_stages(*stages))
        rows.append(
            AblationRow(
                name=name,
                mean_dice=report.mean_dice if report.mean_dice is not None else float("nan"),
                per_slice=report.per_slice,
                count=len(report.per_slice),
            )
        )
    return AblationReport(rows=tuple(rows))


def dataset_report_json(report):
    return json.dumps(
        {
            "mean_dice": report.mean_dice,
            "slices": [{"image": s.image, "dice": s.dice} for s in report.per_slice],
            "skipped_no_truth": report.skipped_no_truth,
            "errors": [{"image": i, "error": e} for i, e in report.errors],
        },
        indent=2,
    )


def dataset_report_text(report):
    lines = []
    width = max([len(s.image) for s in report.per_slice], default=5)
    for s in report.per_slice:
        lines.append(f"{s.image:<{width}}  {s.dice:.4f}")
    if report.mean_dice is None:
        lines.append("mean Dice: undefined (no evaluable slices)")
    else:
        lines.append(f"{'mean':<{width}}  {report.mean_dice:.4f}")
    if report.skipped_no_truth:
        lines.append(f"skipped (no ground truth): {report.skipped_no_truth}")
    for image, err in report.errors:
        lines.append(f"error {image}: {err}")
    return "\n".join(lines)


def ablation_report_json(report):
    return json.dumps(
        {
            "rows": [
                {
                    "method": r.name,
                    "mean_dice": r.mean_dice,
                    "count": r.count,
                    "per_slice": [{"image": s.image, "dice": s.dice} for s in r.per_slice],
                }
                for r in report.rows
            ]
        },
        indent=2,
    )


def ablation_report_text(report):
    width = max(len(r.name) for r in report.rows)
    lines = [f"{'Method':<{width}}  Dice   n"]
    for r in report.rows:
        lines.append(f"{r.name:<{width}}  {r.mean_dice:.4f} {r.count}")
    return "\n".join(lines)
