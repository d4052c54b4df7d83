"""Color features for infographic images.

An image is summarized by clustering its pixels (jointly in RGB and HSV
space) into five groups, recording each group's pixel density and mean
color, and quantizing those summaries into integer counts over a small
visual vocabulary so they can feed a topic model.
"""

import io
from dataclasses import dataclass, field

import numpy as np
from PIL import Image, UnidentifiedImageError

from .errors import DecodeError
from .rng import Stream, derive

CHANNELS = ("R", "G", "B", "H", "S", "V")
NUM_CLUSTERS = 5
DEFAULT_MAX_PIXELS = 50_000


@dataclass(frozen=True)
class PixelGrid:
    """Decoded image: row-major RGB pixels with 8-bit channels."""

    width: int
    height: int
    pixels: np.ndarray  # (width * height, 3) uint8

    def __post_init__(self):
        if self.width <= 0 or self.height <= 0:
            raise ValueError("image dimensions must be positive")
        if self.pixels.shape != (self.width * self.height, 3):
            raise ValueError("pixel buffer does not match width * height")


@dataclass(frozen=True)
class ClusterSummary:
    density: float
    mean_rgb: tuple[float, float, float]
    mean_hsv: tuple[float, float, float]  # hue scaled to [0, 1]


@dataclass(frozen=True)
class VisualDescriptor:
    """Five pixel clusters ordered by descending density.

    Densities sum to 1; images with fewer than five distinct colors are
    padded with zero-density entries that copy the dominant cluster's mean.
    """

    clusters: tuple[ClusterSummary, ...]

    def __post_init__(self):
        if len(self.clusters) != NUM_CLUSTERS:
            raise ValueError(f"descriptor must have {NUM_CLUSTERS} clusters")
        dens = [c.density for c in self.clusters]
        if abs(sum(dens) - 1.0) > 1e-9:
            raise ValueError("cluster densities must sum to 1")
        if any(dens[i] < dens[i + 1] for i in range(len(dens) - 1)):
            raise ValueError("clusters must be ordered by descending density")

    @property
    def densities(self) -> tuple[float, ...]:
        return tuple(c.density for c in self.clusters)


@dataclass(frozen=True)
class QuantizationConfig:
    """Controls how descriptors become integer word counts.

    Each of the six color channels is split into ``bins_per_channel`` equal
    bins, and each descriptor emits about ``tokens_per_channel`` pseudo-token
    counts per channel, apportioned by cluster density.
    """

    bins_per_channel: int = 8
    tokens_per_channel: int = 100

    def __post_init__(self):
        if self.bins_per_channel < 2:
            raise ValueError("bins_per_channel must be at least 2")
        if self.tokens_per_channel < 1:
            raise ValueError("tokens_per_channel must be at least 1")


def visual_vocabulary(cfg: QuantizationConfig) -> list[str]:
    """Fixed enumeration of visual words: one per (channel, bin) pair."""
    return [f"{c}{b}" for c in CHANNELS for b in range(cfg.bins_per_channel)]


def decode_image(data: bytes) -> PixelGrid:
    """Decode a PNG or JPEG byte stream to an RGB pixel grid.

    Transparency is composited over white before dropping the alpha channel.
    """
    try:
        img = Image.open(io.BytesIO(data))
        img.load()
    except (UnidentifiedImageError, OSError, ValueError) as exc:
        raise DecodeError(f"cannot decode image: {exc}") from exc
    if img.mode not in ("RGB", "RGBA"):
        img = img.convert("RGBA" if "transparency" in img.info or "A" in img.mode else "RGB")
    if img.mode == "RGBA":
        background = Image.new("RGBA", img.size, (255, 255, 255, 255))
        img = Image.alpha_composite(background, img).convert("RGB")
    arr = np.asarray(img, dtype=np.uint8).reshape(-1, 3)
    return PixelGrid(width=img.width, height=img.height, pixels=arr)


def rgb_to_hsv(r: float, g: float, b: float) -> tuple[float, float, float]:
    """Hexcone RGB -> HSV for 8-bit channels.

    Returns hue in degrees [0, 360), saturation and value in [0, 1].
    Achromatic inputs (max == min or black) get hue 0 by convention.
    """
    for name, c in (("r", r), ("g", g), ("b", b)):
        if not 0 <= c <= 255:
            raise ValueError(f"channel {name}={c} outside [0, 255]")
    rf, gf, bf = r / 255.0, g / 255.0, b / 255.0
    cmax = max(rf, gf, bf)
    cmin = min(rf, gf, bf)
    delta = cmax - cmin
    v = cmax
    s = 0.0 if cmax == 0.0 else delta / cmax
    if delta == 0.0:
        h = 0.0
    elif cmax == rf:
        h = 60.0 * (((gf - bf) / delta) % 6.0)
    elif cmax == gf:
        h = 60.0 * ((bf - rf) / delta + 2.0)
    else:
        h = 60.0 * ((rf - gf) / delta + 4.0)
    if h >= 360.0:
        h -= 360.0
    return h, s, v


def hsv_to_rgb(h: float, s: float, v: float) -> tuple[float, float, float]:
    """Inverse of rgb_to_hsv; returns channels in [0, 255]."""
    if not (0 <= s <= 1 and 0 <= v <= 1):
        raise ValueError("saturation and value must lie in [0, 1]")
    h = h % 360.0
    c = v * s
    x = c * (1 - abs((h / 60.0) % 2 - 1))
    m = v - c
    sector = int(h // 60) % 6
    rgb1 = [(c, x, 0), (x, c, 0), (0, c, x), (0, x, c), (x, 0, c), (c, 0, x)][sector]
    return tuple(255.0 * (u + m) for u in rgb1)


def _rgb_to_hsv_array(rgb01: np.ndarray) -> np.ndarray:
    """Vectorized hexcone conversion; input and hue output scaled to [0, 1]."""
    cmax = rgb01.max(axis=1)
    cmin = rgb01.min(axis=1)
    delta = cmax - cmin
    v = cmax
    with np.errstate(divide="ignore", invalid="ignore"):
        s = np.where(cmax > 0, delta / np.where(cmax > 0, cmax, 1.0), 0.0)
        safe = np.where(delta > 0, delta, 1.0)
        r, g, b = rgb01[:, 0], rgb01[:, 1], rgb01[:, 2]
        h = np.where(
            cmax == r,
            ((g - b) / safe) % 6.0,
            np.where(cmax == g, (b - r) / safe + 2.0, (r - g) / safe + 4.0),
        )
    h = np.where(delta > 0, h / 6.0, 0.0)
    h = np.where(h >= 1.0, h - 1.0, h)
    return np.column_stack([h, s, v])


@dataclass(frozen=True)
class KMeansResult:
    centers: np.ndarray      # (k, d)
    assignment: np.ndarray   # (n,) int64
    inertia: float
    inertia_history: tuple[float, ...] = field(default=())


def _squared_distances(points: np.ndarray, centers: np.ndarray) -> np.ndarray:
    diff = points[:, None, :] - centers[None, :, :]
    return np.einsum("nkd,nkd->nk", diff, diff)


def kmeans(points: np.ndarray, k: int, seed: int) -> KMeansResult:
    """Lloyd's algorithm from a seeded k-means++ initialization.

    Stops when the assignment is stable or after 100 iterations.  If fewer
    than k distinct points exist, the effective k shrinks to that count and
    only that many clusters are returned.  Empty clusters are re-seeded at
    the point currently farthest from its assigned center, which keeps the
    within-cluster sum of squares non-increasing across iterations.
    """
    points = np.asarray(points, dtype=np.float64)
    if points.ndim == 1:
        points = points[:, None]
    if points.size == 0:
        raise ValueError("kmeans requires at least one point")
    if k < 1:
        raise ValueError("k must be at least 1")
    n = points.shape[0]
    n_distinct = np.unique(points, axis=0).shape[0]
    k = min(k, n_distinct)

    stream = Stream(derive(seed, "kmeans"))
    centers = np.empty((k, points.shape[1]))
    centers[0] = points[stream.randint(n)]
    d2 = np.sum((points - centers[0]) ** 2, axis=1)
    for i in range(1, k):
        total = d2.sum()
        if total <= 0.0:
            # cannot happen while i < n_distinct, but keep a safe fallback
            centers[i] = points[stream.randint(n)]
            continue
        u = stream.uniform() * total
        idx = int(np.searchsorted(np.cumsum(d2), u, side="right"))
        idx = min(idx, n - 1)
        centers[i] = points[idx]
        d2 = np.minimum(d2, np.sum((points - centers[i]) ** 2, axis=1))

    assignment = np.full(n, -1, dtype=np.int64)
    history: list[float] = []
    for _ in range(100):
        dist = _squared_distances(points, centers)
        new_assignment = dist.argmin(axis=1)
        counts = np.bincount(new_assignment, minlength=k)
        for empty in np.flatnonzero(counts == 0):
            worst = int(np.argmax(dist[np.arange(n), new_assignment]))
            new_assignment[worst] = empty
            dist[worst, empty] = 0.0
            counts = np.bincount(new_assignment, minlength=k)
        for c in range(k):
            centers[c] = points[new_assignment == c].mean(axis=0)
        history.append(float(_squared_distances(points, centers)[np.arange(n), new_assignment].sum()))
        if np.array_equal(new_assignment, assignment):
            break
        assignment = new_assignment
    return KMeansResult(
        centers=centers,
        assignment=assignment,
        inertia=history[-1],
        inertia_history=tuple(history),
    )


def extract_visual_descriptor(
    grid: PixelGrid, seed: int, max_pixels: int = DEFAULT_MAX_PIXELS
) -> VisualDescriptor:
    """Cluster an image's pixels into five groups and summarize them.

    Pixels are embedded in a 6-dim unit cube (r, g, b, h/360, s, v); when the
    image has more than ``max_pixels`` pixels a seeded uniform subsample of
    that size is clustered instead.
    """
    rgb01 = grid.pixels.astype(np.float64) / 255.0
    n = rgb01.shape[0]
    if n > max_pixels:
        keep = Stream(derive(seed, "subsample")).shuffle_prefix(n, max_pixels)
        rgb01 = rgb01[np.asarray(keep, dtype=np.int64)]
    feats = np.hstack([rgb01, _rgb_to_hsv_array(rgb01)])

    result = kmeans(feats, NUM_CLUSTERS, seed=derive(seed, "pixel-clusters"))
    k_eff = result.centers.shape[0]
    counts = np.bincount(result.assignment, minlength=k_eff).astype(np.float64)
    densities = counts / counts.sum()
    order = np.argsort(-densities, kind="stable")

    clusters = []
    for idx in order:
        c = result.centers[idx]
        clusters.append(
            ClusterSummary(
                density=float(densities[idx]),
                mean_rgb=(float(c[0]), float(c[1]), float(c[2])),
                mean_hsv=(float(c[3]), float(c[4]), float(c[5])),
            )
        )
    while len(clusters) < NUM_CLUSTERS:
        top = clusters[0]
        clusters.append(ClusterSummary(density=0.0, mean_rgb=top.mean_rgb, mean_hsv=top.mean_hsv))
    return VisualDescriptor(clusters=tuple(clusters))


def quantize_to_visual_words(
    desc: VisualDescriptor, cfg: QuantizationConfig
) -> dict[str, int]:
    """Turn a descriptor into integer counts over the visual vocabulary.

    For every channel, each cluster contributes round(T * density) counts to
    the word for the bin its mean falls in, so each channel's total stays
    within rounding slack of T.
    """
    bins = cfg.bins_per_channel
    bag: dict[str, int] = {}
    for cluster in desc.clusters:
        tokens = int(np.floor(cfg.tokens_per_channel * cluster.density + 0.5))
        if tokens == 0:
            continue
        values = cluster.mean_rgb + cluster.mean_hsv
        for channel, value in zip(CHANNELS, values):
            b = min(int(value * bins), bins - 1)
            word = f"{channel}{b}"
            bag[word] = bag.get(word, 0) + tokens
    return bag
