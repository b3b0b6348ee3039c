import atexit
import os
import shutil
import tempfile

from hypothesis import HealthCheck, settings

# Keep coefficient caches written during the tests out of the home directory.
if "RESONANCE_CACHE_DIR" not in os.environ:
    _cache = tempfile.mkdtemp(prefix="resonance-cache-")
    os.environ["RESONANCE_CACHE_DIR"] = _cache
    atexit.register(shutil.rmtree, _cache, ignore_errors=True)

settings.register_profile(
    "default",
    max_examples=40,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("default")

# Acceptance outcomes, filled by tests/test_acceptance.py: number -> list of (part, passed, detail).
ACCEPTANCE: dict = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(ACCEPTANCE):
        parts = ACCEPTANCE[number]
        ok = all(p[1] for p in parts)
        detail = "; ".join(f"{name}: {'ok' if passed else 'FAILED'} ({info})" for name, passed, info in parts)
        terminalreporter.write_line(f"criterion {number:2d}: {'PASS' if ok else 'FAIL'}  {detail}")
