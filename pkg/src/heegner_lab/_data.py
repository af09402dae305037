"""Location of bundled data files (modular polynomials, group tables)."""

import os
from pathlib import Path

DATA_ENV = "HEEGNER_LAB_DATA"


def data_dir(override=None):
    """override, else $HEEGNER_LAB_DATA, else the package's data directory."""
    if override:
        return Path(override)
    env = os.environ.get(DATA_ENV)
    if env:
        return Path(env)
    return Path(__file__).resolve().parent / "data"
