"""Locating the optional official data file."""

import os
from pathlib import Path

OFFICIAL_ENV = "KDD_10_PERCENT"


def official_path():
    """Location of the official 10% file, if the machine has it."""
    candidates = [os.environ.get(OFFICIAL_ENV, "")]
    root = Path(__file__).resolve().parents[1] / "data"
    candidates += [str(root / n) for n in ("kddcup.data_10_percent", "kddcup.data_10_percent.gz")]
    for c in candidates:
        if c and Path(c).is_file():
            return c
    return None
