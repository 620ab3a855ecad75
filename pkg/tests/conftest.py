import numpy as np
import pytest
import skimage.data

from mugiqa.images import synthesize_chessboard

# colour photographs shipped with scikit-image (no download needed)
PHOTO_NAMES = ("astronaut", "coffee", "chelsea", "rocket", "immunohistochemistry", "hubble_deep_field")
LADDER = (90, 70, 50, 30, 10)


@pytest.fixture(scope="session")
def photos():
    return {name: np.ascontiguousarray(getattr(skimage.data, name)()) for name in PHOTO_NAMES}


@pytest.fixture(scope="session")
def photo(photos):
    return photos["astronaut"]


@pytest.fixture(scope="session")
def chessboard():
    return synthesize_chessboard(1024, 128, 0, 255)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def pytest_terminal_summary(terminalreporter):
    lines = []
    for outcome in ("passed", "failed"):
        for report in terminalreporter.stats.get(outcome, []):
            if report.when != "call":
                continue
            for key, text in getattr(report, "user_properties", []):
                if key == "acceptance":
                    lines.append((text, outcome))
    for report in terminalreporter.stats.get("skipped", []):
        for key, text in getattr(report, "user_properties", []):
            if key == "acceptance":
                lines.append((text, "skipped"))
    if not lines:
        return
    terminalreporter.section("acceptance criteria")
    for text, outcome in sorted(lines, key=lambda t: int(t[0].split(".")[0])):
        mark = {"passed": "PASS", "failed": "FAIL", "skipped": "SKIP"}[outcome]
        terminalreporter.write_line(f"[{mark}] {text}")


@pytest.fixture(scope="session")
def ladder_dataset(tmp_path_factory, photos):
    """JPEG ladders of every photo on disk; MOS is the quality factor, one group per photo."""
    from mugiqa.images import encode_jpeg

    root = tmp_path_factory.mktemp("ladders")
    lines = ["path,mos,group"]
    for name, img in photos.items():
        for q in LADDER:
            rel = f"{name}_q{q:03d}.jpg"
            encode_jpeg(img, q).save(root / rel)
            lines.append(f"{rel},{q},{name}")
    manifest = root / "manifest.csv"
    manifest.write_text("\n".join(lines) + "\n")
    return manifest
