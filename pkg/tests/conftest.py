from collections import defaultdict

import pytest

_PARTS: dict[int, list[tuple[bool, str]]] = defaultdict(list)


class CriterionReport:
    def record(self, criterion: int, passed: bool, message: str) -> None:
        _PARTS[criterion].append((bool(passed), message))
        print(f"criterion {criterion} part {'PASS' if passed else 'FAIL'}: {message}")


@pytest.fixture(scope="session")
def report() -> CriterionReport:
    return CriterionReport()


def criterion_lines() -> list[str]:
    lines = []
    for n in sorted(_PARTS):
        parts = _PARTS[n]
        status = "PASS" if all(ok for ok, _ in parts) else "FAIL"
        lines.append(f"criterion {n} {status}: " + "; ".join(msg if ok else f"[failed] {msg}" for ok, msg in parts))
    return lines


def pytest_terminal_summary(terminalreporter):
    lines = criterion_lines()
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
