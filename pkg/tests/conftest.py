import importlib.util
import sys
from pathlib import Path

import numpy as np
import pytest

SRC_ROOT = Path(__file__).resolve().parents[1] / "src"

# src/ is the plasmon_qrng package (see package-dir in pyproject.toml)
if "plasmon_qrng" not in sys.modules:
    spec = importlib.util.spec_from_file_location(
        "plasmon_qrng", SRC_ROOT / "__init__.py", submodule_search_locations=[str(SRC_ROOT)]
    )
    if spec is None or spec.loader is None:
        raise RuntimeError("failed to load the plasmon_qrng package from src/")
    module = importlib.util.module_from_spec(spec)
    sys.modules["plasmon_qrng"] = module
    spec.loader.exec_module(module)


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(20240601))


@pytest.fixture(autouse=True)
def _clean_env(monkeypatch) -> None:
    for key in ("QRNG_LOG_LEVEL", "QRNG_WORKERS", "QRNG_MASTER_SEED", "QRNG_PROFILE"):
        monkeypatch.delenv(key, raising=False)
