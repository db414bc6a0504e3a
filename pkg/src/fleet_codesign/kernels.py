"""Hot numeric kernels: trajectory sampling, disk rasterization, exposure.

Every kernel ships in two versions: a ``@njit`` scalar loop (default) and a
vectorised pure-NumPy fallback.  ``CODESIGN_NUMBA=0`` selects the fallback
(see :mod:`fleet_codesign._jit`).  Both paths evaluate the same arithmetic;
``benchmarks/bench_kernels.py`` times them against each other.
"""

from __future__ import annotations

import math

import numpy as np

from ._jit import NUMBA_ENABLED, njit

USING_NUMBA = NUMBA_ENABLED


# ---------------------------------------------------------------------------
# trajectory sampling
#
# A planned motion is flattened into phase arrays (piecewise-constant
# longitudinal acceleration over time) and segment arrays (piecewise
# straight/arc geometry over arclength).  Sampling maps query times to
# (x, y, heading, signed velocity, signed acceleration).
# ---------------------------------------------------------------------------

@njit(cache=True)
def _sample_states_njit(ts, ph_t0, ph_v0, ph_a, ph_s0,
                        seg_s0, seg_kind, seg_dir, seg_len, seg_r,
                        seg_x0, seg_y0, seg_th0,
                        out_x, out_y, out_th, out_v, out_a):
    n_ph = ph_t0.shape[0]
    n_seg = seg_s0.shape[0]
    total_s = seg_s0[n_seg - 1] + seg_len[n_seg - 1]
    for k in range(ts.shape[0]):
        t = ts[k]
        # locate phase
        p = np.searchsorted(ph_t0, t, side="right") - 1
        if p < 0:
            p = 0
        if p > n_ph - 1:
            p = n_ph - 1
        tau = t - ph_t0[p]
        speed = ph_v0[p] + ph_a[p] * tau
        if speed < 0.0:
            speed = 0.0
        s = ph_s0[p] + ph_v0[p] * tau + 0.5 * ph_a[p] * tau * tau
        if s > total_s:
            s = total_s
        if s < 0.0:
            s = 0.0
        # locate segment
        g = np.searchsorted(seg_s0, s, side="right") - 1
        if g < 0:
            g = 0
        if g > n_seg - 1:
            g = n_seg - 1
        u = s - seg_s0[g]
        if u > seg_len[g]:
            u = seg_len[g]
        d = seg_dir[g]
        th0 = seg_th0[g]
        if seg_kind[g] == 0:
            x = seg_x0[g] + d * u * math.cos(th0)
            y = seg_y0[g] + d * u * math.sin(th0)
            th = th0
        elif seg_kind[g] == 1:  # left arc
            r = seg_r[g]
            cx = seg_x0[g] - r * math.sin(th0)
            cy = seg_y0[g] + r * math.cos(th0)
            th = th0 + d * u / r
            x = cx + r * math.sin(th)
            y = cy - r * math.cos(th)
        else:  # right arc
            r = seg_r[g]
            cx = seg_x0[g] + r * math.sin(th0)
            cy = seg_y0[g] - r * math.cos(th0)
            th = th0 - d * u / r
            x = cx - r * math.sin(th)
            y = cy + r * math.cos(th)
        out_x[k] = x
        out_y[k] = y
        out_th[k] = th
        out_v[k] = d * speed
        out_a[k] = d * ph_a[p]


def _sample_states_numpy(ts, ph_t0, ph_v0, ph_a, ph_s0,
                         seg_s0, seg_kind, seg_dir, seg_len, seg_r,
                         seg_x0, seg_y0, seg_th0,
                         out_x, out_y, out_th, out_v, out_a):
    n_ph = ph_t0.shape[0]
    n_seg = seg_s0.shape[0]
    total_s = seg_s0[-1] + seg_len[-1]

    p = np.clip(np.searchsorted(ph_t0, ts, side="right") - 1, 0, n_ph - 1)
    tau = ts - ph_t0[p]
    speed = np.maximum(ph_v0[p] + ph_a[p] * tau, 0.0)
    s = np.clip(ph_s0[p] + ph_v0[p] * tau + 0.5 * ph_a[p] * tau * tau, 0.0, total_s)

    g = np.clip(np.searchsorted(seg_s0, s, side="right") - 1, 0, n_seg - 1)
    u = np.minimum(s - seg_s0[g], seg_len[g])
    d = seg_dir[g]
    th0 = seg_th0[g]
    kind = seg_kind[g]

    x = np.empty_like(ts)
    y = np.empty_like(ts)
    th = np.empty_like(ts)

    straight = kind == 0
    if np.any(straight):
        m = straight
        x[m] = seg_x0[g[m]] + d[m] * u[m] * np.cos(th0[m])
        y[m] = seg_y0[g[m]] + d[m] * u[m] * np.sin(th0[m])
        th[m] = th0[m]
    left = kind == 1
    if np.any(left):
        m = left
        r = seg_r[g[m]]
        cx = seg_x0[g[m]] - r * np.sin(th0[m])
        cy = seg_y0[g[m]] + r * np.cos(th0[m])
        th[m] = th0[m] + d[m] * u[m] / r
        x[m] = cx + r * np.sin(th[m])
        y[m] = cy - r * np.cos(th[m])
    right = kind == 2
    if np.any(right):
        m = right
        r = seg_r[g[m]]
        cx = seg_x0[g[m]] + r * np.sin(th0[m])
        cy = seg_y0[g[m]] - r * np.cos(th0[m])
        th[m] = th0[m] - d[m] * u[m] / r
        x[m] = cx - r * np.sin(th[m])
        y[m] = cy + r * np.cos(th[m])

    out_x[:] = x
    out_y[:] = y
    out_th[:] = th
    out_v[:] = d * speed
    out_a[:] = d * ph_a[p]


def sample_states(ts, phases, segments):
    """Evaluate trajectory state at times ``ts``.

    ``phases``: (t0, v0, a, s0) float arrays; ``segments``: (s0, kind, dir,
    length, radius, x0, y0, th0) arrays.  Returns x, y, heading, v, a arrays.
    """
    ts = np.ascontiguousarray(ts, dtype=np.float64)
    n = ts.shape[0]
    out = tuple(np.empty(n, dtype=np.float64) for _ in range(5))
    fn = _sample_states_njit if USING_NUMBA else _sample_states_numpy
    fn(ts, *phases, *segments, *out)
    return out


# ---------------------------------------------------------------------------
# coverage rasterization
# ---------------------------------------------------------------------------

@njit(cache=True)
def _mark_covered_njit(xs, ys, radius, ox, oy, cw, ch, nx, ny, covered):
    r2 = radius * radius
    for k in range(xs.shape[0]):
        x = xs[k]
        y = ys[k]
        i_lo = int(math.floor((x - radius - ox) / cw - 0.5))
        i_hi = int(math.ceil((x + radius - ox) / cw - 0.5))
        j_lo = int(math.floor((y - radius - oy) / ch - 0.5))
        j_hi = int(math.ceil((y + radius - oy) / ch - 0.5))
        if i_lo < 0:
            i_lo = 0
        if j_lo < 0:
            j_lo = 0
        if i_hi > nx - 1:
            i_hi = nx - 1
        if j_hi > ny - 1:
            j_hi = ny - 1
        for j in range(j_lo, j_hi + 1):
            cy = oy + (j + 0.5) * ch
            dy = cy - y
            for i in range(i_lo, i_hi + 1):
                if covered[j, i]:
                    continue
                cx = ox + (i + 0.5) * cw
                dx = cx - x
                if dx * dx + dy * dy <= r2:
                    covered[j, i] = True


def _mark_covered_numpy(xs, ys, radius, ox, oy, cw, ch, nx, ny, covered):
    r2 = radius * radius
    cx = ox + (np.arange(nx) + 0.5) * cw
    cy = oy + (np.arange(ny) + 0.5) * ch
    chunk = max(1, int(2e6 // (nx * ny + 1)))
    for k0 in range(0, xs.shape[0], chunk):
        x = xs[k0:k0 + chunk]
        y = ys[k0:k0 + chunk]
        dx2 = (cx[None, :] - x[:, None]) ** 2            # (chunk, nx)
        dy2 = (cy[None, :] - y[:, None]) ** 2            # (chunk, ny)
        hit = dx2[:, None, :] + dy2[:, :, None] <= r2    # (chunk, ny, nx)
        covered |= hit.any(axis=0)


def mark_covered(xs, ys, radius, ox, oy, cw, ch, nx, ny, covered):
    """Mark grid cells whose center lies within ``radius`` of any sample."""
    xs = np.ascontiguousarray(xs, dtype=np.float64)
    ys = np.ascontiguousarray(ys, dtype=np.float64)
    fn = _mark_covered_njit if USING_NUMBA else _mark_covered_numpy
    fn(xs, ys, float(radius), float(ox), float(oy), float(cw), float(ch),
       int(nx), int(ny), covered)
    return covered


# ---------------------------------------------------------------------------
# exposure integral
# ---------------------------------------------------------------------------

@njit(cache=True)
def _exposure_njit(xs, ys, vs, ts, tx, ty, lam, sigma, beta, radius):
    r2 = radius * radius
    inv = 1.0 / (2.0 * sigma * sigma)
    total = 0.0
    for k in range(ts.shape[0] - 1):
        dx = xs[k] - tx
        dy = ys[k] - ty
        d2 = dx * dx + dy * dy
        if d2 <= r2:
            rate = lam * math.exp(-d2 * inv) * math.exp(-beta * abs(vs[k]))
            total += rate * (ts[k + 1] - ts[k])
    return total


def _exposure_numpy(xs, ys, vs, ts, tx, ty, lam, sigma, beta, radius):
    if ts.shape[0] < 2:
        return 0.0
    d2 = (xs[:-1] - tx) ** 2 + (ys[:-1] - ty) ** 2
    rate = lam * np.exp(-d2 / (2.0 * sigma * sigma)) * np.exp(-beta * np.abs(vs[:-1]))
    rate = np.where(d2 <= radius * radius, rate, 0.0)
    return float(np.sum(rate * np.diff(ts)))


def exposure_sum(xs, ys, vs, ts, tx, ty, lam, sigma, beta, radius):
    """Left-Riemann exposure of a target to one robot's sampled trajectory."""
    xs = np.ascontiguousarray(xs, dtype=np.float64)
    ys = np.ascontiguousarray(ys, dtype=np.float64)
    vs = np.ascontiguousarray(vs, dtype=np.float64)
    ts = np.ascontiguousarray(ts, dtype=np.float64)
    if ts.shape[0] < 2:
        return 0.0
    fn = _exposure_njit if USING_NUMBA else _exposure_numpy
    return float(fn(xs, ys, vs, ts, float(tx), float(ty), float(lam),
                    float(sigma), float(beta), float(radius)))
