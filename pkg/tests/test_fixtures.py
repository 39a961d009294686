import filecmp

from trojanrisk.fixtures import CURVES, DATA_DIR, build
from trojanrisk.spectral import read_csv


def test_shipped_data_matches_builder(tmp_path):
    build(tmp_path)
    for sub in ("curves", "raw", "systems"):
        shipped = sorted(p.name for p in (DATA_DIR / sub).iterdir())
        rebuilt = sorted(p.name for p in (tmp_path / sub).iterdir())
        assert shipped == rebuilt
        _, mismatch, errors = filecmp.cmpfiles(DATA_DIR / sub, tmp_path / sub, rebuilt, shallow=False)
        assert mismatch == [] and errors == []


def test_anchors_are_exact():
    for fx in CURVES:
        c = read_csv(DATA_DIR / "curves" / f"{fx.name}.csv")
        for lam, value, _ in fx.anchors:
            assert c(lam) == value, (fx.name, lam)


def test_fixture_files_label_provenance():
    for fx in CURVES:
        text = (DATA_DIR / "curves" / f"{fx.name}.csv").read_text()
        assert text.startswith("#")
        assert "assumed" in text or "quoted" in text
