"""Manifest to scored design: the whole pipeline on a generated dataset."""

import csv
import tempfile
from pathlib import Path

import numpy as np
from PIL import Image

from viralens import LdaHyperparams, load_corpus, save_corpus, score
from viralens.lda import select_k
from viralens.pipeline import ingest_corpus, train_archive

root = Path(tempfile.mkdtemp())
(root / "images").mkdir()

# -- 1. write 18 images in three visual families plus a manifest CSV
FAMILIES = [
    ((220, 30, 40), 2400, "market growth chart"),
    ((30, 90, 210), 900, "social media facts"),
    ((30, 160, 70), 1500, "health data guide"),
]
rng = np.random.default_rng(20240620)
rows = [["id", "image_path", "title"] + [f"shares_{p}" for p in ("facebook", "pinterest", "linkedin", "twitter")]]
for fam, (rgb, base, title) in enumerate(FAMILIES):
    for j in range(6):
        doc_id = f"fam{fam}-{j}"
        arr = np.zeros((48, 48, 3), dtype=np.uint8)
        arr[:, :] = rgb
        x, y = rng.integers(0, 32, size=2)
        arr[y : y + 14, x : x + 14] = (245, 245, 235)
        Image.fromarray(arr).save(root / "images" / f"{doc_id}.png")
        shares = [int(max(0, base + rng.normal(0, base * 0.3))) for _ in range(4)]
        rows.append([doc_id, f"images/{doc_id}.png", f"{title} {j}", *shares])
with open(root / "manifest.csv", "w", newline="") as fh:
    csv.writer(fh).writerows(rows)

# -- 2. ingest: decode, cluster pixels, quantize, assemble the matrix
bundle, warnings = ingest_corpus(root / "manifest.csv", seed=42)
m, v = bundle.matrix.counts.shape
print(f"ingested {m} documents x {v} words, warnings: {warnings or 'none'}")
save_corpus(bundle, root / "corpus.json")
bundle = load_corpus(root / "corpus.json")

# -- 3. pick the topic count by best point-estimate likelihood over restarts
template = LdaHyperparams(k=3, alpha=5.0, eta=0.1, sweeps=150, burn_in=50, seed=7)
best_k, table = select_k(bundle.matrix, [2, 3, 4], restarts=2, template=template)
for k in sorted(table):
    mark = "  <- selected" if k == best_k else ""
    print(f"  K={k}: best log likelihood {table[k]:.1f}{mark}")

# -- 4. train the archive at the chosen K and score a brand-new design
hp = LdaHyperparams(k=best_k, alpha=1.0, sweeps=300, burn_in=75, seed=42)
archive, theta = train_archive(bundle, hp)
print(f"\ncluster labels: {[lab or '(unlabeled)' for lab in archive.labels]}")
print(f"viral clusters: {sorted(archive.viral.clusters) or 'none'}")

candidate = root / "images" / "fam0-0.png"  # rescore a training-family image
report = score(archive, candidate.read_bytes())
print(f"\ncandidate theta: {tuple(round(t, 3) for t in report.theta)}")
print(f"expected activity: {report.expected_activity:.0f} total shares")
print(f"viral probability: {report.viral_probability:.3f}")
