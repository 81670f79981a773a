"""Compare the numba and pure-numpy kernel backends.

Usage: python benchmarks/bench_kernels.py [--size 224] [--repeat 20]

Times the three hot kernels (mean smoothing, morphology, region growing)
and the full pipeline on one phantom, for both backends. The numba backend
is compiled once before timing so JIT cost is excluded.
"""

import argparse
import statistics
import time

import numpy as np

from weakgrow import _kernels_numpy
from weakgrow.phantom import PhantomParams, make_phantom
from weakgrow.pseudolabel import generate_pseudo_label


def timeit(fn, repeat):
    fn()  # warm up (JIT compile / cache fill)
    durations = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        durations.append((time.perf_counter() - t0) * 1000.0)
    return statistics.median(durations)


def bench_backend(name, kernels, img, mask, passmask, init, repeat):
    padded_img = np.pad(img.astype(np.int64), 1, mode="edge")
    padded_mask = np.pad(mask, 1, constant_values=False)
    rows = [
        ("mean_smooth 3x3", lambda: kernels.mean_smooth_core(padded_img, 3)),
        ("dilate 3x3", lambda: kernels.dilate_core(padded_mask, 3)),
        ("erode 3x3", lambda: kernels.erode_core(padded_mask, 3)),
        ("grow (8-conn)", lambda: kernels.grow_core(passmask, init, True)),
    ]
    print(f"\n{name} backend")
    for label, fn in rows:
        print(f"  {label:<18} {timeit(fn, repeat):8.3f} ms")


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--size", type=int, default=224)
    parser.add_argument("--repeat", type=int, default=20)
    args = parser.parse_args()

    ph = make_phantom(PhantomParams(kind="horn", seed=3, size=args.size))
    img = ph.image
    mask = ph.truth
    passmask = np.abs(img.astype(np.float64) - 160.0) <= 30.0
    init = np.zeros(img.shape, dtype=np.bool_)
    init[img.shape[0] // 2, img.shape[1] // 2] = True

    print(f"image {img.shape[0]}x{img.shape[1]}, median of {args.repeat} runs")
    try:
        from weakgrow import _kernels_numba
    except ImportError:
        _kernels_numba = None
        print("\nnumba backend unavailable, skipping")
    if _kernels_numba is not None:
        bench_backend("numba", _kernels_numba, img, mask, passmask, init, args.repeat)
    bench_backend("numpy", _kernels_numpy, img, mask, passmask, init, args.repeat)

    print("\nfull pipeline (backend currently selected by WEAKGROW_NO_NUMBA)")
    median = timeit(lambda: generate_pseudo_label(ph.image, ph.labels), args.repeat)
    print(f"  generate_pseudo_label {median:8.3f} ms")


if __name__ == "__main__":
    main()
