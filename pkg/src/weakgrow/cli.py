"""Command-line entry point: generate / evaluate / ablate / phantom / serve."""

import json
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, replace
from pathlib import Path

import click

try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib

from . import __version__, imageio
from .errors import ParameterError, WeakGrowError
from .evaluation import (
    ablate,
    ablation_report_json,
    ablation_report_text,
    dataset_report_json,
    dataset_report_text,
    evaluate_dataset,
    load_manifest,
)
from .phantom import phantom_suite
from .pseudolabel import GrowConfig, generate_pseudo_label
from .weaklabel import parse_weak_labels, serialize_weak_labels

_STAGE_NAMES = ("backbone", "fill", "edge_limit")


def _load_config_file(path):
    path = Path(path)
    if path.suffix == ".toml":
        data = tomllib.loads(path.read_text())
    else:
        data = json.loads(path.read_text())
    if not isinstance(data, dict):
        raise ParameterError("config file must hold a table/object")
    stages = data.pop("stages", {})
    for name in _STAGE_NAMES:
        if name in stages:
            data[f"use_{name}"] = bool(stages[name])
    return data


def _parse_stages(value):
    value = value.strip()
    chosen = set()
    if value:
        for token in value.split(","):
            token = token.strip()
            if token not in _STAGE_NAMES:
                raise click.BadParameter(
                    f"unknown stage {token!r}; choose from {', '.join(_STAGE_NAMES)}"
                )
            chosen.add(token)
    return {f"use_{name}": name in chosen for name in _STAGE_NAMES}


def _build_config(config_path, **cli_values):
    fields = {}
    if config_path:
        fields.update(_load_config_file(config_path))
    stages = cli_values.pop("stages", None)
    for key, value in cli_values.items():
        if value is not None:
            fields[key] = value
    if stages is not None:
        fields.update(_parse_stages(stages))
    try:
        return GrowConfig(**fields)
    except (TypeError, ParameterError) as exc:
        raise click.UsageError(f"bad configuration: {exc}")


def _echo_config(cfg):
    click.echo("effective config: " + json.dumps(asdict(cfg), sort_keys=True))


def _grow_options(fn):
    opts = [
        click.option("--config", "config_path", type=click.Path(exists=True), default=None,
                     help="TOML or JSON config file (CLI flags win)."),
        click.option("--epsilon", type=float, default=None,
                     help="Intensity tolerance for growth (default 30)."),
        click.option("--smooth-kernel", type=int, default=None,
                     help="Mean-smoothing kernel side, odd (default 3)."),
        click.option("--close-kernel", type=int, default=None,
                     help="Closing kernel side, odd (default 3)."),
        click.option("--bezier-offset", type=float, default=None,
                     help="Bezier control distance from the chord midpoint (default 3)."),
        click.option("--connectivity", type=click.Choice(["4", "8"]), default=None,
                     help="Growth connectivity (default 8)."),
        click.option("--stages", type=str, default=None,
                     help="Comma list from {backbone,fill,edge_limit}; empty disables all "
                          "(default: all enabled)."),
    ]
    for opt in reversed(opts):
        fn = opt(fn)
    return fn


def _cfg_from_opts(config_path, epsilon, smooth_kernel, close_kernel, bezier_offset,
                   connectivity, stages):
    return _build_config(
        config_path,
        epsilon=epsilon,
        smooth_kernel=smooth_kernel,
        close_kernel=close_kernel,
        bezier_offset=bezier_offset,
        connectivity=int(connectivity) if connectivity is not None else None,
        stages=stages,
    )


@click.group()
@click.version_option(version=__version__)
def main():
    """Pseudo-label synthesis from point/line weak annotations."""


@main.command()
@click.option("--manifest", required=True, type=click.Path(exists=True))
@click.option("--out", required=True, type=click.Path(), help="Output directory for masks.")
@click.option("--jobs", type=int, default=1, show_default=True, help="Parallel slices.")
@_grow_options
def generate(manifest, out, jobs, config_path, epsilon, smooth_kernel, close_kernel,
             bezier_offset, connectivity, stages):
    """Generate one pseudo-label mask PNG per manifest slice."""
    cfg = _cfg_from_opts(config_path, epsilon, smooth_kernel, close_kernel,
                         bezier_offset, connectivity, stages)
    _echo_config(cfg)
    if jobs < 1:
        raise click.UsageError("--jobs must be >= 1")
    try:
        entries = load_manifest(manifest)
    except ParameterError as exc:
        click.echo(f"fatal: {exc}", err=True)
        sys.exit(1)
    out_dir = Path(out)
    try:
        out_dir.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        click.echo(f"fatal: cannot create output directory: {exc}", err=True)
        sys.exit(1)

    def run_one(entry):
        img = imageio.read_gray(entry["image"])
        labels = parse_weak_labels(Path(entry["labels"]).read_text())
        result = generate_pseudo_label(img, labels, cfg)
        target = out_dir / (Path(entry["image"]).stem + "_pseudo.png")
        imageio.write_mask(target, result.mask)
        return target

    t0 = time.perf_counter()
    failures = 0
    with ThreadPoolExecutor(max_workers=jobs) as pool:
        futures = [pool.submit(run_one, e) for e in entries]
        for entry, fut in zip(entries, futures):
            try:
                fut.result()
            except (OSError, WeakGrowError) as exc:
                failures += 1
                click.echo(f"error: {entry['image']}: {exc}", err=True)
    elapsed = time.perf_counter() - t0
    click.echo(f"generated {len(entries) - failures}/{len(entries)} masks in {elapsed:.2f}s")
    if failures:
        sys.exit(2)


@main.command()
@click.option("--manifest", required=True, type=click.Path(exists=True))
@click.option("--out", type=click.Path(), default=None, help="Optional JSON report file.")
@_grow_options
def evaluate(manifest, out, config_path, epsilon, smooth_kernel, close_kernel,
             bezier_offset, connectivity, stages):
    """Evaluate pseudo-labels against the manifest's ground-truth masks."""
    cfg = _cfg_from_opts(config_path, epsilon, smooth_kernel, close_kernel,
                         bezier_offset, connectivity, stages)
    _echo_config(cfg)
    try:
        entries = load_manifest(manifest)
    except ParameterError as exc:
        click.echo(f"fatal: {exc}", err=True)
        sys.exit(1)
    if not any(e["ground_truth"] for e in entries):
        click.echo("fatal: no manifest entry provides a ground_truth mask", err=True)
        sys.exit(1)
    report = evaluate_dataset(entries, cfg)
    click.echo(dataset_report_text(report))
    if out:
        Path(out).write_text(dataset_report_json(report))


@main.command("ablate")
@click.option("--manifest", required=True, type=click.Path(exists=True))
@click.option("--out", type=click.Path(), default=None, help="Optional JSON report file.")
@_grow_options
def ablate_cmd(manifest, out, config_path, epsilon, smooth_kernel, close_kernel,
               bezier_offset, connectivity, stages):
    """Run the four cumulative stage sets and report mean Dice per row."""
    cfg = _cfg_from_opts(config_path, epsilon, smooth_kernel, close_kernel,
                         bezier_offset, connectivity, stages)
    _echo_config(cfg)
    try:
        entries = load_manifest(manifest)
    except ParameterError as exc:
        click.echo(f"fatal: {exc}", err=True)
        sys.exit(1)
    if not any(e["ground_truth"] for e in entries):
        click.echo("fatal: no manifest entry provides a ground_truth mask", err=True)
        sys.exit(1)
    report = ablate(entries, cfg)
    click.echo(ablation_report_text(report))
    if out:
        Path(out).write_text(ablation_report_json(report))


@main.command()
@click.option("--count", type=int, default=10, show_default=True)
@click.option("--seed", type=int, required=True, help="Mandatory RNG seed (reproducible).")
@click.option("--out", required=True, type=click.Path(), help="Output directory.")
@click.option("--size", type=int, default=224, show_default=True)
@click.option("--noise-sigma", type=float, default=0.0, show_default=True)
@click.option("--blur-radius", type=int, default=0, show_default=True)
def phantom(count, seed, out, size, noise_sigma, blur_radius):
    """Write a synthetic phantom dataset (images, truths, labels, manifest)."""
    out_dir = Path(out)
    out_dir.mkdir(parents=True, exist_ok=True)
    try:
        suite = phantom_suite(count, seed, size=size, noise_sigma=noise_sigma,
                              blur_radius=blur_radius)
    except ParameterError as exc:
        click.echo(f"fatal: {exc}", err=True)
        sys.exit(1)
    manifest = []
    for i, ph in enumerate(suite):
        stem = f"phantom_{i:03d}"
        imageio.write_gray(out_dir / f"{stem}.png", ph.image)
        imageio.write_mask(out_dir / f"{stem}_truth.png", ph.truth)
        (out_dir / f"{stem}.labels.json").write_text(serialize_weak_labels(ph.labels))
        manifest.append(
            {
                "image": f"{stem}.png",
                "labels": f"{stem}.labels.json",
                "ground_truth": f"{stem}_truth.png",
            }
        )
    (out_dir / "manifest.json").write_text(json.dumps(manifest, indent=2) + "\n")
    click.echo(f"wrote {count} phantoms to {out_dir}")


@main.command()
@click.option("--port", type=int, default=8731, show_default=True)
@click.option("--host", type=str, default="127.0.0.1", show_default=True)
def serve(port, host):
    """Run the HTTP preview service."""
    import uvicorn

    from .service import create_app

    uvicorn.run(create_app(), host=host, port=port)


if __name__ == "__main__":
    main()
