import contextlib
import os
import tempfile

import pytest


def solve_lp_text(text):
    """Solve an exported LP with HiGHS; returns ({name: value}, objective) or None if infeasible."""
    highspy = pytest.importorskip("highspy")
    h = highspy.Highs()
    h.setOptionValue("output_flag", False)
    fd, path = tempfile.mkstemp(suffix=".lp")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        h.readModel(path)
    finally:
        os.unlink(path)
    h.run()
    status = h.modelStatusToString(h.getModelStatus())
    if status == "Infeasible":
        return None
    assert status == "Optimal", status
    lp = h.getLp()
    values = dict(zip(lp.col_names_, h.getSolution().col_value))
    # a MIP solution is integral up to the solver's feasibility tolerance
    values = {k: round(v) if abs(v - round(v)) < 1e-6 else v for k, v in values.items()}
    return values, h.getInfo().objective_function_value


@pytest.fixture
def highs_solve():
    pytest.importorskip("highspy")
    return solve_lp_text


# criterion number -> list of (part, passed, detail)
ACCEPTANCE: dict[int, list] = {}
CRITERIA = 8


class _Outcome:
    detail = ""


@contextlib.contextmanager
def record(number, title, part=None):
    """Record whether the enclosed acceptance check passed; failures still raise."""
    out = _Outcome()
    entry = ACCEPTANCE.setdefault(number, [])
    try:
        yield out
    except BaseException as e:
        msg = str(e).splitlines()[0] if str(e) else type(e).__name__
        entry.append((title, part, False, f"{out.detail} -- {msg}".strip(" -")))
        raise
    entry.append((title, part, True, out.detail))


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    tr = terminalreporter
    tr.section("acceptance criteria")
    for n in range(1, CRITERIA + 1):
        entries = ACCEPTANCE.get(n)
        if not entries:
            tr.write_line(f"criterion {n}: SKIP (not run)")
            continue
        title = entries[0][0]
        ok = all(e[2] for e in entries)
        if len(entries) == 1:
            tr.write_line(f"criterion {n}: {'PASS' if ok else 'FAIL'} {title} -- {entries[0][3]}")
            continue
        good = sum(e[2] for e in entries)
        tr.write_line(f"criterion {n}: {'PASS' if ok else 'FAIL'} {title} -- {good}/{len(entries)} passed")
        for _, part, passed, detail in entries:
            tr.write_line(f"    {'ok  ' if passed else 'FAIL'} {part}: {detail}")
