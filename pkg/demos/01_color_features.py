"""Color features from a single image: pixel clusters and visual words."""

import io

import numpy as np
from PIL import Image

from viralens import (
    QuantizationConfig,
    decode_image,
    extract_visual_descriptor,
    quantize_to_visual_words,
    visual_vocabulary,
)


def make_png(blocks):
    # blocks: list of (rgb, n_rows); stacked top to bottom into a 60x60 image
    arr = np.zeros((60, 60, 3), dtype=np.uint8)
    row = 0
    for rgb, n in blocks:
        arr[row : row + n] = rgb
        row += n
    buf = io.BytesIO()
    Image.fromarray(arr).save(buf, format="PNG")
    return buf.getvalue()


# -- 1. a two-tone "infographic": 60% crimson background, 40% gold panels
png = make_png([((220, 30, 40), 36), ((250, 200, 60), 24)])
grid = decode_image(png)
print(f"decoded {grid.width}x{grid.height}, {grid.pixels.shape[0]} pixels")

# -- 2. cluster the pixels: five clusters ordered by share of the image
desc = extract_visual_descriptor(grid, seed=7)
for i, c in enumerate(desc.clusters):
    r, g, b = (round(255 * x) for x in c.mean_rgb)
    print(
        f"cluster {i}: density {c.density:.3f}  mean rgb ({r}, {g}, {b})"
        f"  mean hsv ({c.mean_hsv[0] * 360:.0f} deg, {c.mean_hsv[1]:.2f}, {c.mean_hsv[2]:.2f})"
    )

# -- 3. quantize to visual words: 6 channels x 8 bins, ~100 tokens per channel
cfg = QuantizationConfig()
bag = quantize_to_visual_words(desc, cfg)
print(f"\nvocabulary size {len(visual_vocabulary(cfg))}, words used {len(bag)}")
for word in sorted(bag):
    print(f"  {word}: {bag[word]}")

# -- 4. same seed, same answer: the whole feature path is deterministic
again = quantize_to_visual_words(extract_visual_descriptor(grid, seed=7), cfg)
print(f"\nrerun with the same seed identical: {again == bag}")
