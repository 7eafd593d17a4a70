"""Log-space binomial and hypergeometric helpers.

Binomial coefficients such as C(20000, 50) overflow fixed-width integers and
lose everything to cancellation in naive floating point, so every ratio here
is formed from log-gamma values and exponentiated at the end.
"""
import numpy as np
from scipy.special import gammaln

TRUNCATE = 1e-14


def log_binom(n, r):
    """log C(n, r) for real n >= r >= 0 (vectorized)."""
    n = np.asarray(n, dtype=float)
    r = np.asarray(r, dtype=float)
    return gammaln(n + 1.0) - gammaln(r + 1.0) - gammaln(n - r + 1.0)


def hypergeom_pmf(draws, unknown, known, d):
    """P(exactly d of `draws` distinct picks land in the `unknown` pool).

    The population is unknown + known items; picks are uniform without
    replacement.  Values of d outside the support give 0.
    """
    total = unknown + known
    w = draws - d
    if d < 0 or w < 0 or d > unknown or w > known or draws > total:
        return 0.0
    return float(np.exp(log_binom(unknown, d) + log_binom(known, w)
                        - log_binom(total, draws)))


def hypergeom_matrix(total, known, max_degree):
    """Row D', column d: probability a degree-D' symbol keeps d unknown edges.

    Rows cover D' = 0..max_degree and columns d = 0..max_degree.  A degree
    larger than the population is clamped to the population size, which is
    what the encoder does when the union it draws from is small.  Entries
    below TRUNCATE of their row maximum are dropped.
    """
    total = int(total)
    known = int(known)
    if not 0 <= known <= total:
        raise ValueError(f"known={known} outside [0, total={total}]")
    unknown = total - known
    D = int(max_degree)
    out = np.zeros((D + 1, D + 1))
    out[0, 0] = 1.0
    d = np.arange(D + 1)
    for deg in range(1, D + 1):
        draws = min(deg, total)
        w = draws - d
        ok = (d <= unknown) & (w >= 0) & (w <= known)
        if not ok.any():
            continue
        row = np.zeros(D + 1)
        row[ok] = np.exp(log_binom(unknown, d[ok]) + log_binom(known, w[ok])
                         - log_binom(total, draws))
        row[row < TRUNCATE * row.max()] = 0.0
        out[deg] = row
    return out
