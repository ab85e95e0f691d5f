"""Python bindings for the sgflab C++ core."""

import json as _json

from ._core import *  # noqa: F401,F403
from ._core import __version__, run_study as _run_study


def run_study(config, workers=1):
    """Run a study from config text; `summary` is returned parsed."""
    out = _run_study(config, workers)
    out["summary"] = _json.loads(out["summary"])
    return out
