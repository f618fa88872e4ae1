"""Closed-form test profiles, vectorized over ``x``."""

import numpy as np


def standard_gaussian(x):
    return np.exp(-0.5 * np.asarray(x, dtype=np.float64) ** 2) / np.sqrt(2.0 * np.pi)


def triangle_bump(a, b, area=1.0):
    """Tent supported on ``[a, b]`` with peak at the midpoint and the given area."""
    if not b > a:
        raise ValueError("need a < b")
    mid = 0.5 * (a + b)
    half = 0.5 * (b - a)
    height = area / half

    def f(x):
        x = np.asarray(x, dtype=np.float64)
        return height * np.maximum(1.0 - np.abs(x - mid) / half, 0.0)

    return f


def smooth_bump(center=0.0, radius=1.0, height=1.0):
    """C-infinity bump ``height * exp(1 - 1/(1 - r^2))`` on ``|x - center| < radius``."""

    def f(x):
        r2 = ((np.asarray(x, dtype=np.float64) - center) / radius) ** 2
        out = np.zeros_like(r2)
        inside = r2 < 1.0
        out[inside] = height * np.exp(1.0 - 1.0 / (1.0 - r2[inside]))
        return out

    return f


def parabolic_bump(center=0.0, radius=1.0, height=1.0):
    def f(x):
        r = (np.asarray(x, dtype=np.float64) - center) / radius
        return height * np.maximum(1.0 - r * r, 0.0)

    return f


def random_positive_battery(rng, count, span=8.0, width=(0.5, 3.0)):
    """Positive, compactly supported profiles: sums of 1-3 random bumps."""
    out = []
    for _ in range(count):
        pieces = []
        for _ in range(int(rng.integers(1, 4))):
            c = float(rng.uniform(-span, span))
            r = float(rng.uniform(*width))
            hgt = float(rng.uniform(0.2, 2.0))
            if rng.random() < 0.5:
                pieces.append(smooth_bump(c, r, hgt))
            else:
                pieces.append(triangle_bump(c - r, c + r, area=hgt * r))
        out.append(lambda x, ps=tuple(pieces): sum(p(x) for p in ps))
    return out


def random_signed_battery(rng, count, span=8.0, width=(0.5, 3.0)):
    """Sign-changing profiles: a positive battery member minus another."""
    pos = random_positive_battery(rng, 2 * count, span, width)
    return [lambda x, a=pos[2 * i], b=pos[2 * i + 1]: a(x) - b(x) for i in range(count)]
