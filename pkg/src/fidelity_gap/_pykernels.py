"""Vectorised numpy kernels: the fallback used when the compiled extension
is unavailable.  Must stay numerically interchangeable with ``_ckernels``.
"""

import numpy as np

NAME = "python"
PHYS_TOL = 1e-12


def _f(a):
    return np.ascontiguousarray(a, dtype=np.float64)


def bloch(rx, ry, rz, target):
    rx, ry, rz = _f(rx), _f(ry), _f(rz)
    tx, ty, tz = (float(v) for v in target)
    norm2 = rx * rx + ry * ry + rz * rz
    tnorm2 = tx * tx + ty * ty + tz * tz
    mixed = np.sqrt(np.clip(1.0 - norm2, 0.0, None) * max(1.0 - tnorm2, 0.0))
    fid = np.clip(0.5 * (1.0 + rx * tx + ry * ty + rz * tz + mixed), 0.0, 1.0)
    phys = norm2 <= 1.0 + PHYS_TOL
    fid = np.where(phys, fid, np.nan)
    purity = np.where(phys, 0.5 * (1.0 + norm2), np.nan)
    return {"fidelity": fid, "purity": purity, "physical": phys}


def _pd_lams(c1, c2, c3):
    return (
        0.25 * (1.0 - c1 - c2 - c3),
        0.25 * (1.0 - c1 + c2 + c3),
        0.25 * (1.0 + c1 - c2 + c3),
        0.25 * (1.0 + c1 + c2 - c3),
    )


def _xlog2x(x):
    pos = x > 0.0
    return np.where(pos, x * np.log2(np.where(pos, x, 1.0)), 0.0)


def pauli_diagonal(c1, c2, c3, target):
    c1, c2, c3 = _f(c1), _f(c2), _f(c3)
    lam = _pd_lams(c1, c2, c3)
    tlam = _pd_lams(*(float(v) for v in target))
    lmin = np.minimum(np.minimum(lam[0], lam[1]), np.minimum(lam[2], lam[3]))
    phys = lmin >= -PHYS_TOL
    s = np.zeros_like(c1)
    for l, t in zip(lam, tlam):
        s = s + np.sqrt(np.clip(l, 0.0, None) * max(t, 0.0))
    fid = np.minimum(s * s, 1.0)
    neg = np.zeros_like(c1)
    for l in _pd_lams(c1, -c2, c3):
        neg = neg + np.minimum(l, 0.0)
    neg = 0.0 - 2.0 * neg
    mutual = 2.0 + sum(_xlog2x(np.clip(l, 0.0, None)) for l in lam)
    cmax = np.minimum(np.maximum(np.maximum(np.abs(c1), np.abs(c2)), np.abs(c3)), 1.0)
    classical = 0.5 * _xlog2x(1.0 - cmax) + 0.5 * _xlog2x(1.0 + cmax)
    disc = np.maximum(mutual - classical, 0.0)
    nan = np.nan
    return {
        "fidelity": np.where(phys, fid, nan),
        "lambda_min": lmin,
        "negativity": np.where(phys, neg, nan),
        "discord": np.where(phys, disc, nan),
        "physical": phys,
    }


def sts1(s, mu, x, target):
    """Displaced squeezed thermal states; ``target = (s, mu, x)``."""
    s, mu, x = _f(s), _f(mu), _f(x)
    ts, tmu, tx = (float(v) for v in target)
    phys = (s > 0.0) & (mu > 0.0) & (mu <= 1.0)
    s_ = np.where(phys, s, 1.0)
    mu_ = np.where(phys, mu, 1.0)
    vx = 0.5 / (s_ * mu_)
    vp = 0.5 * s_ / mu_
    tvx = 0.5 / (ts * tmu)
    tvp = 0.5 * ts / tmu
    u = vx + tvx
    v = vp + tvp
    big = u * v
    small = np.clip((1.0 / (mu_ * mu_) - 1.0) * (1.0 / (tmu * tmu) - 1.0) * 0.25, 0.0, None)
    f0 = (np.sqrt(big + small) + np.sqrt(small)) / big
    dx = x - tx
    fid = np.minimum(np.exp(-dx * dx / u) * f0, 1.0)
    mean_n = np.clip(0.5 * (vx + vp - 1.0) + x * x, 0.0, None)
    var_n = np.clip(0.5 * (vx * vx + vp * vp - 0.5) + 2.0 * x * x * vx, 0.0, None)
    nan = np.nan
    return {
        "fidelity": np.where(phys, fid, nan),
        "mean_n": np.where(phys, mean_n, nan),
        "var_n": np.where(phys, var_n, nan),
        "physical": phys,
    }


def _coeffs(n, beta, gamma):
    bn = beta * n
    denom = 1.0 + bn
    sq = bn * (1.0 + n)
    a = 1.0 + (2.0 * gamma * (1.0 - beta) * n + sq) / denom
    b = 1.0 + (2.0 * (1.0 - gamma) * (1.0 - beta) * n + sq) / denom
    c = (1.0 + n) * np.sqrt(bn * (2.0 + bn)) / denom
    return a, b, c


def _pair(delta, det, root):
    hi = 0.5 * (delta + root)
    lo = np.where(hi > 0.0, det / np.where(hi > 0.0, hi, 1.0), 0.5 * (delta - root))
    return np.sqrt(np.clip(lo, 0.0, None)), np.sqrt(np.clip(hi, 0.0, None))


def _h(x):
    up = x + 0.5
    lo = x - 0.5
    pos = lo > 0.0
    return up * np.log(up) - np.where(pos, lo * np.log(np.where(pos, lo, 1.0)), 0.0)


def sts2(n, beta, gamma, target):
    n, beta, gamma = _f(n), _f(beta), _f(gamma)
    phys = (n >= 0.0) & (beta >= 0.0) & (beta <= 1.0) & (gamma >= 0.0) & (gamma <= 1.0)
    n_ = np.where(phys, n, 0.0)
    b_ = np.where(phys, beta, 0.0)
    g_ = np.where(phys, gamma, 0.0)
    a1, b1, c1 = _coeffs(n_, b_, g_)
    a2, b2, c2 = (float(v) for v in _coeffs(*(np.float64(v) for v in target)))
    det = ((a1 * b1 - c1 * c1) / 4.0) ** 2
    root = np.abs(a1 - b1) * np.sqrt(np.clip(a1 + b1 - 2.0 * c1, 0.0, None) * (a1 + b1 + 2.0 * c1)) / 4.0
    root_t = np.sqrt((a1 - b1) ** 2 + 4.0 * c1 * c1) * (a1 + b1) / 4.0
    dm, dp = _pair((a1 * a1 + b1 * b1 - 2.0 * c1 * c1) / 4.0, det, root)
    tm, _ = _pair((a1 * a1 + b1 * b1 + 2.0 * c1 * c1) / 4.0, det, root_t)
    phys = phys & (dm >= 0.5 - PHYS_TOL)

    ha, hb, hc = 0.5 * a1, 0.5 * b1, 0.5 * c1
    cond = np.maximum(ha - hc * hc / (hb + 0.5), 0.5)
    disc = np.maximum(
        _h(hb) - _h(np.maximum(dm, 0.5)) - _h(np.maximum(dp, 0.5)) + _h(cond), 0.0
    )

    p1 = a1 * b1 - c1 * c1
    p2 = a2 * b2 - c2 * c2
    ssum = p1 + p2 + a1 * b2 + a2 * b1 - 2.0 * c1 * c2
    q1 = np.clip(p1 * p1 + 1.0 - (a1 * a1 + b1 * b1 - 2.0 * c1 * c1), 0.0, None)
    q2 = max(p2 * p2 + 1.0 - (a2 * a2 + b2 * b2 - 2.0 * c2 * c2), 0.0)
    excess = ((1.0 - p1) * (1.0 - p2) + (a1 - b1) * (a2 - b2) + np.sqrt(q1 * q2)) / (2.0 * ssum)
    excess = np.clip(excess, 0.0, None)
    root = np.sqrt(1.0 + excess) + np.sqrt(excess)
    fid = np.minimum(4.0 * root * root / ssum, 1.0)
    nan = np.nan
    return {
        "fidelity": np.where(phys, fid, nan),
        "d_minus": np.where(phys, dm, nan),
        "d_plus": np.where(phys, dp, nan),
        "dt_minus": np.where(phys, tm, nan),
        "discord": np.where(phys, disc, nan),
        "physical": phys,
    }
