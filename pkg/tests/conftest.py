import pytest

_RESULTS: dict[int, tuple[str, bool, str]] = {}


class Criterion:
    """Records the outcome of one acceptance criterion for the terminal summary."""

    def __init__(self, number: int, title: str):
        self.number, self.title = number, title
        self.details: list[str] = []
        _RESULTS[number] = (title, False, "not finished")

    def check(self, ok: bool, detail: str) -> None:
        self.details.append(("" if ok else "FAILED: ") + detail)
        _RESULTS[self.number] = (self.title, all(not d.startswith("FAILED") for d in self.details),
                                 "; ".join(self.details))
        assert ok, detail


@pytest.fixture
def criterion():
    return Criterion


def pytest_terminal_summary(terminalreporter):
    if not _RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_RESULTS):
        title, ok, detail = _RESULTS[n]
        terminalreporter.write_line(f"[{'PASS' if ok else 'FAIL'}] {n:2d}. {title} -- {detail}")
