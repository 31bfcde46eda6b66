import os
import pathlib
import shutil

import pytest

ROOT = pathlib.Path(__file__).resolve().parents[2]


@pytest.fixture(scope="session")
def cli():
    path = os.environ.get("TENSORLEV_CLI") or shutil.which("tensorlev")
    if not path:
        candidate = ROOT / "build" / "tools" / "tensorlev"
        path = str(candidate) if candidate.exists() else None
    if not path:
        pytest.skip("tensorlev executable not found; set TENSORLEV_CLI")
    return path


@pytest.fixture(scope="session")
def report_schema():
    import json

    return json.loads((ROOT / "docs" / "report.schema.json").read_text())
