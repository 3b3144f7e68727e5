import pytest


@pytest.fixture(scope="session")
def small_season():
    from moveprint.synthgen import generate_season, scale_preset

    spec = scale_preset("clones", seed=3)
    spec.n_games = 4
    return generate_season(spec)


_CRITERIA: dict[int, tuple[bool, str]] = {}


@pytest.fixture()
def criterion():
    """Record and assert one acceptance criterion."""

    def record(number: int, ok: bool, detail: str) -> None:
        _CRITERIA[number] = (ok, detail)
        print(f"criterion {number:2d}: {'PASS' if ok else 'FAIL'} - {detail}")
        assert ok, detail

    return record


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_CRITERIA):
        ok, detail = _CRITERIA[number]
        terminalreporter.write_line(f"criterion {number:2d}: {'PASS' if ok else 'FAIL'} - {detail}")
