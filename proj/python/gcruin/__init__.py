"""Random walks and ruin probabilities under generalized convolutions."""

from ._core import *  # noqa: F401,F403
from ._core import __version__, run_cli  # noqa: F401


def cli(*args):
    """Run the command-line tool in-process; raises on a nonzero exit code."""
    code, out, err = run_cli([str(a) for a in args])
    if code != 0:
        raise RuntimeError(f"gcruin exited with {code}: {err.strip()}")
    return out
