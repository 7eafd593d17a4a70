import numpy as np
import pytest


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def gf2_recoverable(rows, size):
    """Ids whose unit vector lies in the GF(2) row space of `rows` (lists of ids)."""
    pivots = {}                     # pivot column -> row bitmask
    for r in rows:
        v = 0
        for s in r:
            v ^= 1 << s
        while v:
            top = v.bit_length() - 1
            if top in pivots:
                v ^= pivots[top]
            else:
                pivots[top] = v
                break
    # back-substitute to reduced form, then read off singleton rows
    cols = sorted(pivots)
    for c in cols:
        for other in cols:
            if other != c and pivots[other] >> c & 1:
                pivots[other] ^= pivots[c]
    return {c for c, v in pivots.items() if v == 1 << c}


def degree_one_closure(rows):
    """Naive fixed point: keep resolving any row with exactly one unknown id."""
    known = set()
    changed = True
    while changed:
        changed = False
        for r in rows:
            live = set(r) - known
            if len(live) == 1:
                known |= live
                changed = True
    return known


# one line per acceptance criterion, printed again at the end of the run
ACCEPTANCE: dict[int, str] = {}


def record_criterion(number: int, ok: bool, detail: str) -> bool:
    line = f"CRITERION {number:2d} {'PASS' if ok else 'FAIL'}: {detail}"
    ACCEPTANCE[number] = line
    print(line)
    return ok


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE):
        terminalreporter.write_line(ACCEPTANCE[n])
