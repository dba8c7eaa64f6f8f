from __future__ import annotations

CRITERION_LINES: dict[int, str] = {}


def register_criterion(number: int, label: str, ok: bool, elapsed: float, budget: float) -> None:
    verdict = "pass" if ok else "FAIL"
    CRITERION_LINES[number] = (
        f"criterion {number:2d} {verdict}  {label}  ({elapsed:.2f}s, budget {budget:.0f}s)"
    )


def pytest_terminal_summary(terminalreporter):
    if not CRITERION_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(CRITERION_LINES):
        terminalreporter.write_line(CRITERION_LINES[number])
