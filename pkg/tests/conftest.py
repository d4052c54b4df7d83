"""Shared fixtures: a synthetic 24-image corpus and a trained archive.

Four color families, six images each; share counts and titles depend on the
family so cluster statistics and labels come out non-trivial.  Everything is
seeded, so the fixture corpus is identical across runs.
"""

import csv
from pathlib import Path

import numpy as np
import pytest
from PIL import Image

import viralens as v
from viralens import pipeline, text

FIXTURES = Path(__file__).parent / "fixtures"
DICTIONARY = FIXTURES / "english_words.txt"

# One (name, passed, detail) entry per acceptance criterion, echoed after the
# run so every criterion gets a visible pass/fail line with its numbers.
ACCEPTANCE_RESULTS: list[tuple[str, bool, str]] = []


@pytest.fixture
def criterion():
    def record(name: str, passed, detail: str):
        ACCEPTANCE_RESULTS.append((name, bool(passed), detail))
        assert passed, f"{name}: {detail}"

    return record


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if ACCEPTANCE_RESULTS:
        terminalreporter.section("acceptance criteria")
        for name, ok, detail in ACCEPTANCE_RESULTS:
            status = "PASS" if ok else "FAIL"
            terminalreporter.write_line(f"{status}  {name}: {detail}")

# (primary RGB, secondary RGB, base shares, title theme, sidecar tokens)
FAMILIES = {
    "crimson": (
        (220, 30, 40), (250, 200, 60), 2400,
        "marketing strategy growth chart",
        "market growth profit revenue Q3!! xq9z",
    ),
    "ocean": (
        (30, 90, 210), (200, 220, 250), 900,
        "social media network facts",
        "media network facts audience ~~ zzkw",
    ),
    "forest": (
        (30, 160, 70), (240, 240, 200), 1300,
        "health food data guide",
        "health food data guide energy q0x",
    ),
    "amber": (
        (240, 180, 40), (90, 60, 20), 1700,
        "mobile design process report",
        "mobile design process report layout 9fk2",
    ),
}


def _family_image(primary, secondary, seed: int) -> Image.Image:
    rng = np.random.default_rng(seed)
    arr = np.zeros((64, 64, 3), dtype=np.uint8)
    arr[:, :] = primary
    for _ in range(int(rng.integers(3, 6))):
        x, y = rng.integers(0, 48, size=2)
        w, h = rng.integers(8, 16, size=2)
        arr[y : y + h, x : x + w] = secondary
    arr[50:62, 6:58] = (250, 250, 250)
    return Image.fromarray(arr)


def build_fixture_corpus(root: Path) -> Path:
    """Write images, sidecars, and manifest under root; returns manifest path."""
    img_dir = root / "images"
    img_dir.mkdir(parents=True, exist_ok=True)
    side_dir = root / "sidecars"
    side_dir.mkdir(parents=True, exist_ok=True)
    rng = np.random.default_rng(20240601)
    rows = [
        [
            "id", "image_path", "title",
            "shares_facebook", "shares_pinterest", "shares_linkedin", "shares_twitter",
            "token_sidecar",
        ]
    ]
    for fam_idx, (fam, (prim, sec, base, title, tokens)) in enumerate(FAMILIES.items()):
        for j in range(6):
            doc_id = f"{fam}-{j}"
            _family_image(prim, sec, seed=1000 + fam_idx * 10 + j).save(
                img_dir / f"{doc_id}.png"
            )
            sidecar = ""
            if j % 2 == 0:  # half the documents carry OCR tokens
                (side_dir / f"{doc_id}.tokens.txt").write_text(
                    "\n".join(tokens.split()) + "\n", encoding="utf-8"
                )
                sidecar = f"sidecars/{doc_id}.tokens.txt"
            shares = [
                int(max(0, base + rng.normal(0, base * 0.25))) for _ in range(4)
            ]
            rows.append([doc_id, f"images/{doc_id}.png", f"{title} {j}", *shares, sidecar])
    manifest = root / "manifest.csv"
    with open(manifest, "w", newline="", encoding="utf-8") as fh:
        csv.writer(fh).writerows(rows)
    return manifest


def held_out_image(path: Path):
    """A 25th image from the crimson family, absent from the manifest."""
    prim, sec = FAMILIES["crimson"][0], FAMILIES["crimson"][1]
    _family_image(prim, sec, seed=4242).save(path)
    return path


@pytest.fixture(scope="session")
def corpus_dir(tmp_path_factory) -> Path:
    root = tmp_path_factory.mktemp("fixture-corpus")
    build_fixture_corpus(root)
    return root


@pytest.fixture(scope="session")
def fixture_bundle(corpus_dir) -> v.CorpusBundle:
    bundle, _ = pipeline.ingest_corpus(
        corpus_dir / "manifest.csv", seed=42, dictionary_path=DICTIONARY
    )
    return bundle


@pytest.fixture(scope="session")
def fixture_archive(fixture_bundle) -> v.ModelArchive:
    hp = v.LdaHyperparams(k=4, alpha=None, sweeps=300, burn_in=60, seed=42)
    archive, _ = pipeline.train_archive(fixture_bundle, hp)
    return archive


@pytest.fixture(scope="session")
def fixture_png(tmp_path_factory) -> bytes:
    path = tmp_path_factory.mktemp("held-out") / "candidate.png"
    held_out_image(path)
    return path.read_bytes()


@pytest.fixture(scope="session")
def dictionary() -> frozenset[str]:
    return text.load_dictionary(DICTIONARY)


@pytest.fixture(scope="session")
def dictionary_path() -> Path:
    return DICTIONARY
