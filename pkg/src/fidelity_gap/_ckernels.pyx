# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled per-point kernels for the region scanner.

Same call signatures and outputs as ``_pykernels``; loops run without the
GIL so the scanner's worker threads evaluate chunks in parallel.
"""

import numpy as np
cimport numpy as cnp
from libc.math cimport sqrt, log, log2, exp, fabs, NAN

cnp.import_array()

NAME = "cython"
cdef double TOL = 1e-12
PHYS_TOL = TOL

cdef inline double dmin(double a, double b) noexcept nogil:
    return a if a < b else b

cdef inline double dmax(double a, double b) noexcept nogil:
    return a if a > b else b

cdef inline double xlog2x(double x) noexcept nogil:
    return x * log2(x) if x > 0.0 else 0.0

cdef inline double hfun(double x) noexcept nogil:
    cdef double up = x + 0.5
    cdef double lo = x - 0.5
    return up * log(up) - (lo * log(lo) if lo > 0.0 else 0.0)


def _vec(a):
    return np.ascontiguousarray(a, dtype=np.float64).ravel()


def bloch(rx, ry, rz, target):
    cdef double[::1] x = _vec(rx)
    cdef double[::1] y = _vec(ry)
    cdef double[::1] z = _vec(rz)
    cdef double tx = float(target[0]), ty = float(target[1]), tz = float(target[2])
    cdef Py_ssize_t n = x.shape[0], i
    fid_a = np.empty(n)
    pur_a = np.empty(n)
    phys_a = np.empty(n, dtype=np.uint8)
    cdef double[::1] fid = fid_a
    cdef double[::1] pur = pur_a
    cdef unsigned char[::1] phys = phys_a
    cdef double tmix = dmax(1.0 - (tx * tx + ty * ty + tz * tz), 0.0)
    cdef double n2, f
    with nogil:
        for i in range(n):
            n2 = x[i] * x[i] + y[i] * y[i] + z[i] * z[i]
            if n2 <= 1.0 + TOL:
                phys[i] = 1
                f = 0.5 * (1.0 + x[i] * tx + y[i] * ty + z[i] * tz + sqrt(dmax(1.0 - n2, 0.0) * tmix))
                fid[i] = dmin(dmax(f, 0.0), 1.0)
                pur[i] = 0.5 * (1.0 + n2)
            else:
                phys[i] = 0
                fid[i] = NAN
                pur[i] = NAN
    return {"fidelity": fid_a, "purity": pur_a, "physical": phys_a.view(np.bool_)}


def pauli_diagonal(c1, c2, c3, target):
    cdef double[::1] a = _vec(c1)
    cdef double[::1] b = _vec(c2)
    cdef double[::1] c = _vec(c3)
    cdef double t1 = float(target[0]), t2 = float(target[1]), t3 = float(target[2])
    cdef double tl[4]
    tl[0] = dmax(0.25 * (1.0 - t1 - t2 - t3), 0.0)
    tl[1] = dmax(0.25 * (1.0 - t1 + t2 + t3), 0.0)
    tl[2] = dmax(0.25 * (1.0 + t1 - t2 + t3), 0.0)
    tl[3] = dmax(0.25 * (1.0 + t1 + t2 - t3), 0.0)
    cdef Py_ssize_t n = a.shape[0], i, k
    fid_a = np.empty(n)
    lmin_a = np.empty(n)
    neg_a = np.empty(n)
    disc_a = np.empty(n)
    phys_a = np.empty(n, dtype=np.uint8)
    cdef double[::1] fid = fid_a
    cdef double[::1] lmin = lmin_a
    cdef double[::1] neg = neg_a
    cdef double[::1] disc = disc_a
    cdef unsigned char[::1] phys = phys_a
    cdef double l[4]
    cdef double pt[4]
    cdef double s, lo, nsum, mutual, cmax, classical
    with nogil:
        for i in range(n):
            l[0] = 0.25 * (1.0 - a[i] - b[i] - c[i])
            l[1] = 0.25 * (1.0 - a[i] + b[i] + c[i])
            l[2] = 0.25 * (1.0 + a[i] - b[i] + c[i])
            l[3] = 0.25 * (1.0 + a[i] + b[i] - c[i])
            lo = dmin(dmin(l[0], l[1]), dmin(l[2], l[3]))
            lmin[i] = lo
            if lo < -TOL:
                phys[i] = 0
                fid[i] = NAN
                neg[i] = NAN
                disc[i] = NAN
                continue
            phys[i] = 1
            s = 0.0
            for k in range(4):
                s = s + sqrt(dmax(l[k], 0.0) * tl[k])
            fid[i] = dmin(s * s, 1.0)
            pt[0] = 0.25 * (1.0 - a[i] + b[i] - c[i])
            pt[1] = 0.25 * (1.0 - a[i] - b[i] + c[i])
            pt[2] = 0.25 * (1.0 + a[i] + b[i] + c[i])
            pt[3] = 0.25 * (1.0 + a[i] - b[i] - c[i])
            nsum = 0.0
            for k in range(4):
                nsum = nsum + dmin(pt[k], 0.0)
            neg[i] = 0.0 - 2.0 * nsum
            mutual = 2.0
            for k in range(4):
                mutual = mutual + xlog2x(dmax(l[k], 0.0))
            cmax = dmin(dmax(dmax(fabs(a[i]), fabs(b[i])), fabs(c[i])), 1.0)
            classical = 0.5 * xlog2x(1.0 - cmax) + 0.5 * xlog2x(1.0 + cmax)
            disc[i] = dmax(mutual - classical, 0.0)
    return {
        "fidelity": fid_a,
        "lambda_min": lmin_a,
        "negativity": neg_a,
        "discord": disc_a,
        "physical": phys_a.view(np.bool_),
    }


def sts1(s, mu, x, target):
    cdef double[::1] sv = _vec(s)
    cdef double[::1] mv = _vec(mu)
    cdef double[::1] xv = _vec(x)
    cdef double ts = float(target[0]), tmu = float(target[1]), tx = float(target[2])
    cdef double tvx = 0.5 / (ts * tmu)
    cdef double tvp = 0.5 * ts / tmu
    cdef double tsmall = 1.0 / (tmu * tmu) - 1.0
    cdef Py_ssize_t n = sv.shape[0], i
    fid_a = np.empty(n)
    mean_a = np.empty(n)
    var_a = np.empty(n)
    phys_a = np.empty(n, dtype=np.uint8)
    cdef double[::1] fid = fid_a
    cdef double[::1] mean = mean_a
    cdef double[::1] var = var_a
    cdef unsigned char[::1] phys = phys_a
    cdef double si, mi, xi, vx, vp, u, v, big, small, f0, dx
    with nogil:
        for i in range(n):
            si = sv[i]
            mi = mv[i]
            xi = xv[i]
            if not (si > 0.0 and mi > 0.0 and mi <= 1.0):
                phys[i] = 0
                fid[i] = NAN
                mean[i] = NAN
                var[i] = NAN
                continue
            phys[i] = 1
            vx = 0.5 / (si * mi)
            vp = 0.5 * si / mi
            u = vx + tvx
            v = vp + tvp
            big = u * v
            small = dmax((1.0 / (mi * mi) - 1.0) * tsmall * 0.25, 0.0)
            f0 = (sqrt(big + small) + sqrt(small)) / big
            dx = xi - tx
            fid[i] = dmin(exp(-dx * dx / u) * f0, 1.0)
            mean[i] = dmax(0.5 * (vx + vp - 1.0) + xi * xi, 0.0)
            var[i] = dmax(0.5 * (vx * vx + vp * vp - 0.5) + 2.0 * xi * xi * vx, 0.0)
    return {"fidelity": fid_a, "mean_n": mean_a, "var_n": var_a, "physical": phys_a.view(np.bool_)}


cdef inline void coeffs(double n, double beta, double gamma, double* a, double* b, double* c) noexcept nogil:
    cdef double bn = beta * n
    cdef double denom = 1.0 + bn
    cdef double sq = bn * (1.0 + n)
    a[0] = 1.0 + (2.0 * gamma * (1.0 - beta) * n + sq) / denom
    b[0] = 1.0 + (2.0 * (1.0 - gamma) * (1.0 - beta) * n + sq) / denom
    c[0] = (1.0 + n) * sqrt(bn * (2.0 + bn)) / denom


cdef inline void spectrum_pair(double delta, double det, double root, double* lo, double* hi) noexcept nogil:
    cdef double h = 0.5 * (delta + root)
    cdef double l
    if h > 0.0:
        l = det / h
    else:
        l = 0.5 * (delta - root)
    lo[0] = sqrt(dmax(l, 0.0))
    hi[0] = sqrt(dmax(h, 0.0))


def sts2(n, beta, gamma, target):
    cdef double[::1] nv = _vec(n)
    cdef double[::1] bv = _vec(beta)
    cdef double[::1] gv = _vec(gamma)
    cdef double a2, b2, c2
    coeffs(float(target[0]), float(target[1]), float(target[2]), &a2, &b2, &c2)
    cdef double p2 = a2 * b2 - c2 * c2
    cdef double q2 = dmax(p2 * p2 + 1.0 - (a2 * a2 + b2 * b2 - 2.0 * c2 * c2), 0.0)
    cdef Py_ssize_t m = nv.shape[0], i
    fid_a = np.empty(m)
    dm_a = np.empty(m)
    dp_a = np.empty(m)
    tm_a = np.empty(m)
    disc_a = np.empty(m)
    phys_a = np.empty(m, dtype=np.uint8)
    cdef double[::1] fid = fid_a
    cdef double[::1] dmv = dm_a
    cdef double[::1] dpv = dp_a
    cdef double[::1] tmv = tm_a
    cdef double[::1] disc = disc_a
    cdef unsigned char[::1] phys = phys_a
    cdef double ni, bi, gi, a1, b1, c1, det, dm, dp, tm, tp, ha, hb, hc, cond
    cdef double p1, q1, ssum, excess, root
    with nogil:
        for i in range(m):
            ni = nv[i]
            bi = bv[i]
            gi = gv[i]
            if not (ni >= 0.0 and bi >= 0.0 and bi <= 1.0 and gi >= 0.0 and gi <= 1.0):
                phys[i] = 0
                fid[i] = NAN
                dmv[i] = NAN
                dpv[i] = NAN
                tmv[i] = NAN
                disc[i] = NAN
                continue
            coeffs(ni, bi, gi, &a1, &b1, &c1)
            det = ((a1 * b1 - c1 * c1) / 4.0) * ((a1 * b1 - c1 * c1) / 4.0)
            root = fabs(a1 - b1) * sqrt(dmax(a1 + b1 - 2.0 * c1, 0.0) * (a1 + b1 + 2.0 * c1)) / 4.0
            spectrum_pair((a1 * a1 + b1 * b1 - 2.0 * c1 * c1) / 4.0, det, root, &dm, &dp)
            root = sqrt((a1 - b1) * (a1 - b1) + 4.0 * c1 * c1) * (a1 + b1) / 4.0
            spectrum_pair((a1 * a1 + b1 * b1 + 2.0 * c1 * c1) / 4.0, det, root, &tm, &tp)
            if dm < 0.5 - TOL:
                phys[i] = 0
                fid[i] = NAN
                dmv[i] = NAN
                dpv[i] = NAN
                tmv[i] = NAN
                disc[i] = NAN
                continue
            phys[i] = 1
            dmv[i] = dm
            dpv[i] = dp
            tmv[i] = tm
            ha = 0.5 * a1
            hb = 0.5 * b1
            hc = 0.5 * c1
            cond = dmax(ha - hc * hc / (hb + 0.5), 0.5)
            disc[i] = dmax(hfun(hb) - hfun(dmax(dm, 0.5)) - hfun(dmax(dp, 0.5)) + hfun(cond), 0.0)
            p1 = a1 * b1 - c1 * c1
            ssum = p1 + p2 + a1 * b2 + a2 * b1 - 2.0 * c1 * c2
            q1 = dmax(p1 * p1 + 1.0 - (a1 * a1 + b1 * b1 - 2.0 * c1 * c1), 0.0)
            excess = dmax(((1.0 - p1) * (1.0 - p2) + (a1 - b1) * (a2 - b2) + sqrt(q1 * q2)) / (2.0 * ssum), 0.0)
            root = sqrt(1.0 + excess) + sqrt(excess)
            fid[i] = dmin(4.0 * root * root / ssum, 1.0)
    return {
        "fidelity": fid_a,
        "d_minus": dm_a,
        "d_plus": dp_a,
        "dt_minus": tm_a,
        "discord": disc_a,
        "physical": phys_a.view(np.bool_),
    }
