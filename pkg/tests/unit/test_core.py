from types import SimpleNamespace

from rotorwave.core import loader
from rotorwave.core.errors import DataFileError, SpectrumCoverageError, TruncationError


def test_plugins_load_and_failures_are_logged(monkeypatch, caplog):
    good = SimpleNamespace(name="good", value="pkg.good", load=lambda: None)

    def explode():
        raise ImportError("no such module")

    bad = SimpleNamespace(name="bad", value="pkg.bad", load=explode)
    monkeypatch.setattr(loader, "entry_points", lambda group: [good, bad])
    assert loader.load_plugins() == ["good"]
    assert "bad" in caplog.text


def test_error_messages():
    assert str(DataFileError("levels.txt", "bad energy", 7)) == "levels.txt:7: bad energy"
    assert SpectrumCoverageError([14, 12, 12]).missing == [12, 14]
    err = TruncationError(8, 3e-4, 1e-10)
    assert "l_max=8" in str(err)
