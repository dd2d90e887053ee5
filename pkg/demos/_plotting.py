"""Optional figure output shared by the demos (needs matplotlib)."""
import sys


def maybe_figure(name):
    """Return (plt, path) when the script was started with --plot, else (None, None)."""
    if "--plot" not in sys.argv:
        return None, None
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    return plt, f"{name}.png"
