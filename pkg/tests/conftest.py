import pytest
from hypothesis import settings

settings.register_profile("default", deadline=None)
settings.load_profile("default")


@pytest.fixture(scope="session")
def full_run():
    """One end-to-end pipeline run shared by every acceptance check."""
    from skyrmecert import proof_pipeline as pp

    ctx = pp.ProofContext()
    lines = []
    store = pp.run_pipeline(["all"], ctx, lines.append)
    return ctx, store, lines


# criterion number -> (passed, detail); filled by test_acceptance.py
ACCEPTANCE: dict = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE):
        ok, detail = ACCEPTANCE[n]
        terminalreporter.write_line(f"criterion {n}: {'PASS' if ok else 'FAIL'}  {detail}")
