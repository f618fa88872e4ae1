import numpy as np


def loglog_slope(xs, ys):
    """Least-squares slope of ``log y`` against ``log x`` (points sorted by ``x``)."""
    xs = np.asarray(xs, dtype=np.float64)
    ys = np.asarray(ys, dtype=np.float64)
    if xs.size < 3:
        raise ValueError("a slope fit needs at least 3 points")
    order = np.argsort(xs, kind="stable")
    if np.any(xs <= 0) or np.any(ys <= 0):
        raise ValueError("log-log fit needs positive data")
    return float(np.polyfit(np.log(xs[order]), np.log(ys[order]), 1)[0])
