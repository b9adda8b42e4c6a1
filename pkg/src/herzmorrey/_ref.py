"""Pure-NumPy reference kernels (fallback when the compiled core is absent).

The centered maximal scan on a 1-d midpoint grid is exact: because every
evaluation point is a cell midpoint, every candidate radius r = (t + 1/2) h
places both ends of the window on cell edges, so the windowed integral is a
pure prefix-sum lookup.  The normalized average is piecewise (a + b r) r^-sigma
in r, whose supremum over each linear piece sits at an endpoint (sigma = 1) or
at one interior stationary point (0 < sigma < 1), all of which are enumerated.
"""

from __future__ import annotations

import numpy as np

BACKEND = "python"


def maximal_scan_1d(edge_cum, absvals, h, sigma, scale):
    """Exact discrete supremum of scale * r^-sigma * int_{B(x,r)} |f| per midpoint.

    edge_cum has length m+1 (cumulative integral at cell edges), absvals
    length m.  Returns an array of length m with the supremum at each cell
    midpoint.  sigma in (0, 1] is the radius exponent n - beta for n = 1.
    """
    edge_cum = np.asarray(edge_cum, dtype=float)
    absvals = np.asarray(absvals, dtype=float)
    m = absvals.size
    idx = np.arange(m)
    out = np.zeros(m)
    include_stationary = sigma < 1.0

    rp = scale * ((np.arange(m + 1) + 0.5) * h) ** -sigma

    for t in range(m + 1):
        right = np.clip(idx + t + 1, 0, m)
        left = np.clip(idx - t, 0, m)
        g = edge_cum[right] - edge_cum[left]
        r = (t + 0.5) * h
        np.maximum(out, g * rp[t], out=out)

        if include_stationary and t < m:
            # slope of g on the next piece (r_t, r_{t+1}); clamped ends add 0
            ri = idx + t + 1
            li = idx - t - 1
            b = np.where(ri <= m - 1, absvals[np.clip(ri, 0, m - 1)], 0.0) + np.where(
                li >= 0, absvals[np.clip(li, 0, m - 1)], 0.0
            )
            a = g - b * r
            r_next = (t + 1.5) * h
            with np.errstate(divide="ignore", invalid="ignore"):
                r_star = sigma * a / (b * (1.0 - sigma))
                valid = (b > 0.0) & (a > 0.0) & (r_star > r) & (r_star < r_next)
                phi = np.where(valid, scale * (a + b * r_star) * r_star**-sigma, 0.0)
            np.maximum(out, phi, out=out)
    return out
