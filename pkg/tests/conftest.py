import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from planted import write_tree  # noqa: E402
from smellscope.config import default_config  # noqa: E402
from smellscope.pipeline import build_context  # noqa: E402


@pytest.fixture
def project(tmp_path):
    """Write a file mapping under a fresh root and return its analysis context."""
    counter = iter(range(1_000_000))

    def make(files, config=None):
        root = tmp_path / f"p{next(counter)}"
        write_tree(root, files)
        return build_context(root, config or default_config())

    return make


def pytest_terminal_summary(terminalreporter):
    acceptance = sys.modules.get("test_acceptance")
    results = getattr(acceptance, "RESULTS", None)
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(results):
        terminalreporter.write_line(results[number])
