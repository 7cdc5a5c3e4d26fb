"""Statistical security metrics for gray images.

GLCM convention: 8 gray levels (``level = v * 8 // 256``), right-neighbour
offset ``(0, +1)``, non-symmetric, normalised to probabilities.
"""

from __future__ import annotations

import csv
import math
import warnings
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import DimensionError
from .image import as_gray_image

GLCM_LEVELS = 8
DIRECTIONS = ("vertical", "horizontal", "diagonal")
_OFFSETS = {"vertical": (1, 0), "horizontal": (0, 1), "diagonal": (1, 1)}
CHI2_CRITICAL_255_05 = 293.25


class DegenerateCorrelationWarning(RuntimeWarning):
    """A correlation was requested on a zero-variance series; 0.0 was returned."""


def histogram(img) -> np.ndarray:
    img = as_gray_image(img)
    return np.bincount(img.ravel(), minlength=256).astype(np.int64)


def shannon_entropy(img) -> float:
    counts = histogram(img)
    p = counts[counts > 0] / counts.sum()
    return float(-(p * np.log2(p)).sum()) + 0.0


def chi_square_uniform(img) -> float:
    """Pearson chi-square of the 256-bin histogram against a flat one (255 dof)."""
    counts = histogram(img).astype(np.float64)
    expected = counts.sum() / 256.0
    return float(((counts - expected) ** 2).sum() / expected)


def glcm(img) -> np.ndarray:
    """8x8 co-occurrence probabilities of (pixel, right neighbour) levels."""
    img = as_gray_image(img)
    if img.shape[1] < 2:
        raise DimensionError("GLCM needs an image at least 2 pixels wide")
    levels = (img.astype(np.intp) * GLCM_LEVELS) // 256
    pairs = levels[:, :-1] * GLCM_LEVELS + levels[:, 1:]
    counts = np.bincount(pairs.ravel(), minlength=GLCM_LEVELS * GLCM_LEVELS)
    return (counts / counts.sum()).reshape(GLCM_LEVELS, GLCM_LEVELS)


@dataclass(frozen=True)
class GlcmMetrics:
    homogeneity: float
    contrast: float
    energy: float


def glcm_metrics(g) -> GlcmMetrics:
    g = np.asarray(g, dtype=np.float64)
    a, b = np.indices(g.shape)
    diff = np.abs(a - b)
    return GlcmMetrics(
        homogeneity=float((g / (1.0 + diff)).sum()),
        contrast=float((diff**2 * g).sum()),
        energy=float((g**2).sum()),
    )


def _pairs(a: np.ndarray, b: np.ndarray, direction: str) -> tuple[np.ndarray, np.ndarray]:
    try:
        di, dj = _OFFSETS[direction]
    except KeyError:
        raise ValueError(f"direction must be one of {DIRECTIONS}, got {direction!r}") from None
    h, w = a.shape
    if h - di < 1 or w - dj < 1 or (h - di) * (w - dj) < 2:
        raise DimensionError(f"image too small for {direction} pairs")
    return a[: h - di, : w - dj].ravel(), b[di:, dj:].ravel()


def _numeric(img) -> np.ndarray:
    arr = np.asarray(img)
    if arr.ndim != 2:
        raise DimensionError(f"expected a 2-D image, got shape {arr.shape}")
    return arr.astype(np.float64)


def pearson(x, y) -> tuple[float, bool]:
    """Correlation coefficient and a degenerate flag (zero variance -> 0.0, True)."""
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    dx = x - x.mean()
    dy = y - y.mean()
    denom = math.sqrt(float((dx * dx).sum()) * float((dy * dy).sum()))
    if denom == 0.0:
        return 0.0, True
    return float((dx * dy).sum() / denom), False


def _warn_degenerate() -> None:
    warnings.warn("zero-variance series; correlation reported as 0", DegenerateCorrelationWarning, stacklevel=3)


def adjacent_correlation(img, direction: str) -> float:
    """Pearson correlation over every adjacent pixel pair in ``direction``."""
    arr = _numeric(img)
    value, degenerate = pearson(*_pairs(arr, arr, direction))
    if degenerate:
        _warn_degenerate()
    return value


def cross_correlation(a, b, direction: str) -> float:
    """Correlation of ``a[i, j]`` with ``b`` at the directional neighbour of ``(i, j)``."""
    a = _numeric(a)
    b = _numeric(b)
    if a.shape != b.shape:
        raise DimensionError(f"shape mismatch {a.shape} vs {b.shape}")
    value, degenerate = pearson(*_pairs(a, b, direction))
    if degenerate:
        _warn_degenerate()
    return value


@dataclass(frozen=True)
class CorrelationReport:
    vertical: float
    horizontal: float
    diagonal: float
    sample_count: int
    degenerate: tuple[str, ...] = ()


def correlation_report(img, against=None) -> CorrelationReport:
    """All three directions, adjacent (``against=None``) or against a second image.

    With ``against``, pairs are ``(against[i, j], img[neighbour])``.
    """
    arr = _numeric(img)
    ref = arr if against is None else _numeric(against)
    if ref.shape != arr.shape:
        raise DimensionError(f"shape mismatch {ref.shape} vs {arr.shape}")
    values = {}
    degenerate = []
    count = 0
    for d in DIRECTIONS:
        x, y = _pairs(ref, arr, d)
        values[d], flag = pearson(x, y)
        count += x.size
        if flag:
            degenerate.append(d)
    return CorrelationReport(sample_count=count, degenerate=tuple(degenerate), **values)


def scatter_sample(img, direction: str, n: int, seed: int = 0) -> np.ndarray:
    """Reproducible sample of ``n`` distinct ``(v, neighbour)`` pairs, shape ``(n, 2)``."""
    img = as_gray_image(img)
    x, y = _pairs(img, img, direction)
    if n < 0 or n > x.size:
        raise ValueError(f"n must lie in 0..{x.size}, got {n}")
    idx = np.random.default_rng(seed).choice(x.size, size=n, replace=False)
    return np.column_stack([x[idx], y[idx]])


def _fmt(v) -> str:
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    return format(float(v), ".17g")


def write_csv(path: str | Path, header: tuple[str, ...], rows) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([v if isinstance(v, str) else _fmt(v) for v in row])


def analyze(img, against=None) -> dict:
    """Every metric in one pass; keys match the ``metric`` column of ``metrics.csv``."""
    img = as_gray_image(img)
    m = glcm_metrics(glcm(img))
    adj = correlation_report(img)
    out = {
        "entropy": shannon_entropy(img),
        "chi_square": chi_square_uniform(img),
        "homogeneity": m.homogeneity,
        "contrast": m.contrast,
        "energy": m.energy,
    }
    for d in DIRECTIONS:
        out[f"corr_{d}"] = getattr(adj, d)
    if against is not None:
        cross = correlation_report(img, against=as_gray_image(against))
        for d in DIRECTIONS:
            out[f"cross_corr_{d}"] = getattr(cross, d)
    return out


def write_analysis(img, out_dir: str | Path, against=None, scatter_n: int = 4096, scatter_seed: int = 0) -> dict:
    """Write ``histogram.csv``, ``metrics.csv`` and ``scatter_<direction>.csv``."""
    img = as_gray_image(img)
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    metrics = analyze(img, against=against)
    write_csv(out_dir / "histogram.csv", ("value", "count"), enumerate(histogram(img)))
    write_csv(out_dir / "metrics.csv", ("metric", "value"), metrics.items())
    for d in DIRECTIONS:
        x, y = _pairs(img, img, d)
        n = min(scatter_n, x.size)
        write_csv(out_dir / f"scatter_{d}.csv", ("v", "neighbor"), scatter_sample(img, d, n, scatter_seed))
    return metrics
