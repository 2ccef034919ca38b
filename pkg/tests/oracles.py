"""Independent numerical oracles.

Nothing here uses the closed forms from the package: integrals are done by
brute-force midpoint quadrature or seeded Monte Carlo in floating point, so an
agreement with the exact values is a genuine cross-check.
"""
import math
import random


def disc_integral(f, nr=800, nt=64):
    """Normalized area integral over the unit disc: (1/pi) int f(z) dA."""
    total = 0.0
    for i in range(nr):
        r = (i + 0.5) / nr
        for k in range(nt):
            th = 2 * math.pi * (k + 0.5) / nt
            total += f(complex(r * math.cos(th), r * math.sin(th))) * r
    return total * (1.0 / nr) * (2 * math.pi / nt) / math.pi


def ball2_radial_integral(g, n=500):
    """Normalized volume integral over B_2 of g(|z1|, |z2|).

    dV = (2/pi^2) dLeb; after the two angular integrals this is
    8 r1 r2 dr1 dr2 on the quarter disc r1^2 + r2^2 < 1.
    """
    total = 0.0
    h = 1.0 / n
    for i in range(n):
        r1 = (i + 0.5) * h
        for j in range(n):
            r2 = (j + 0.5) * h
            if r1 * r1 + r2 * r2 < 1:
                total += g(r1, r2) * 8 * r1 * r2
    return total * h * h


def sphere_mc(g, dim, samples=200_000, seed=1):
    """Monte Carlo mean of g over the unit sphere in C^dim."""
    rng = random.Random(seed)
    acc = 0.0
    for _ in range(samples):
        v = [complex(rng.gauss(0, 1), rng.gauss(0, 1)) for _ in range(dim)]
        s = math.sqrt(sum(abs(x) ** 2 for x in v))
        acc += g([x / s for x in v])
    return acc / samples


def interval_integral(f, n=200_000):
    """Midpoint rule on (0, 1)."""
    h = 1.0 / n
    return sum(f((i + 0.5) * h) for i in range(n)) * h
