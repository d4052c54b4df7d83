"""Record real scoring-service responses for the frontend test suite.

Trains a small deterministic archive, drives the actual service in-process,
and freezes the exact response bodies under tests/fixtures/.  The UI tests
then assert that rendered values equal these recorded API values, which is
the round-trip the interface promises: no model math in the browser.

Twelve color families, four images each; every topic cluster ends up with
exactly one family (training seed 1 is frozen for that property, verified by
the frequency assertion below).  Share noise is wide enough that only the
high-activity families win significant pairwise tests, so the viral badge
discriminates.  Variant A is drawn from a viral family, variant B from a
non-viral one.

Rerun after changing the service:  npm run fixtures
"""

import io
import json
import tempfile
from pathlib import Path

import numpy as np
from PIL import Image
from starlette.testclient import TestClient

from viralens import LdaHyperparams
from viralens.pipeline import ingest_corpus, train_archive
from viralens.service import create_app

FIXTURES = Path(__file__).resolve().parent.parent / "tests" / "fixtures"

PALETTES = [
    (210, 40, 40), (230, 140, 40), (225, 210, 55), (120, 200, 60),
    (45, 190, 150), (50, 150, 225), (90, 70, 220), (190, 60, 200),
    (245, 245, 245), (150, 150, 150), (70, 70, 70), (120, 40, 20),
]
TITLES = [
    "growth chart market", "sales funnel report", "science facts visual",
    "eco energy tips", "ocean travel map", "tech trends data",
    "finance guide layout", "brand style social", "minimal white design",
    "gray scale stats", "dark mode metrics", "earth tone history",
]
LEVELS = [2600, 420, 1900, 380, 640, 2200, 500, 460, 350, 400, 1500, 440]

VARIANT_A_FAMILY = 0   # viral cluster
VARIANT_B_FAMILY = 8   # non-viral cluster


def family_png(rng: np.random.Generator, base: tuple[int, int, int]) -> bytes:
    arr = np.clip(rng.normal(base, 14.0, size=(64, 64, 3)), 0, 255).astype(np.uint8)
    arr[26:38, 26:38] = 246
    buf = io.BytesIO()
    Image.fromarray(arr).save(buf, format="PNG")
    return buf.getvalue()


def build_archive(tmp: Path):
    rng = np.random.default_rng(20240701)
    rows = [
        "id,image_path,title,shares_facebook,shares_pinterest,shares_linkedin,shares_twitter"
    ]
    for fam in range(12):
        for j in range(4):
            name = f"doc-{fam}-{j}.png"
            (tmp / name).write_bytes(family_png(rng, PALETTES[fam]))
            total = LEVELS[fam] + int(rng.integers(0, 700))
            a, b, c = total // 3, total // 4, total // 5
            rows.append(
                f"doc-{fam}-{j},{name},{TITLES[fam]} {j},{a},{b},{c},{total - a - b - c}"
            )
    (tmp / "manifest.csv").write_text("\n".join(rows) + "\n")

    bundle, warnings = ingest_corpus(tmp / "manifest.csv", seed=42)
    assert not warnings
    hp = LdaHyperparams(k=12, alpha=0.1, eta=0.1, sweeps=600, burn_in=150, seed=1)
    archive, _ = train_archive(bundle, hp)
    freqs = [s.frequency for s in archive.cluster_stats]
    assert min(freqs) > 0, f"empty cluster in fixture archive: {freqs}"
    assert 2 <= len(archive.viral.clusters) <= 8, sorted(archive.viral.clusters)
    return archive, rng


def main() -> None:
    FIXTURES.mkdir(parents=True, exist_ok=True)
    with tempfile.TemporaryDirectory() as d:
        tmp = Path(d)
        archive, rng = build_archive(tmp)

        png_a = family_png(rng, PALETTES[VARIANT_A_FAMILY])
        png_b = family_png(rng, PALETTES[VARIANT_B_FAMILY])
        (FIXTURES / "variant_a.png").write_bytes(png_a)
        (FIXTURES / "variant_b.png").write_bytes(png_b)

        client = TestClient(create_app(archive, model_version="fixture-1"))

        recorded: dict[str, object] = {}
        recorded["healthz"] = client.get("/healthz").json()
        recorded["clusters"] = client.get("/api/clusters").json()

        score = client.post("/api/score", files={"image": ("a.png", png_a, "image/png")})
        repeat = client.post("/api/score", files={"image": ("a.png", png_a, "image/png")})
        assert score.status_code == 200, score.text
        assert score.content == repeat.content, "rescoring the same image must be identical"
        recorded["score_a"] = score.json()

        ab = client.post(
            "/api/compare",
            files={
                "image_a": ("a.png", png_a, "image/png"),
                "image_b": ("b.png", png_b, "image/png"),
            },
        )
        ba = client.post(
            "/api/compare",
            files={
                "image_a": ("b.png", png_b, "image/png"),
                "image_b": ("a.png", png_a, "image/png"),
            },
        )
        assert ab.status_code == 200 and ba.status_code == 200
        for x, y in zip(ab.json()["delta_theta"], ba.json()["delta_theta"]):
            assert abs(x + y) < 1e-12
        recorded["compare_ab"] = ab.json()
        recorded["compare_ba"] = ba.json()

        bad = client.post(
            "/api/score", files={"image": ("junk.txt", b"not an image", "text/plain")}
        )
        assert bad.status_code == 422
        recorded["error_422"] = {"status": 422, "body": bad.json()}

        empty = TestClient(create_app(None))
        down = empty.get("/api/clusters")
        assert down.status_code == 503
        recorded["error_503"] = {"status": 503, "body": down.json()}

        for name, body in recorded.items():
            path = FIXTURES / f"{name}.json"
            path.write_text(json.dumps(body, indent=1, sort_keys=True) + "\n")
            print(f"wrote {path.name}")


if __name__ == "__main__":
    main()
