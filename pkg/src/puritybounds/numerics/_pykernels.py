"""Pure-Python/numpy versions of the compiled kernels.

Same algorithms and conventions as ``_ckernels``; selected automatically when
the extension is not built.
"""
import math
import sys

import numpy as np

_EPS = sys.float_info.epsilon


def tridiagonalize(a):
    n = a.shape[0]
    q = np.eye(n, dtype=complex)
    sub = np.zeros(max(n - 1, 0), dtype=complex)
    for k in range(n - 2):
        x = a[k + 1:, k]
        xnorm = np.linalg.norm(x)
        if xnorm == 0.0:
            continue
        ph = x[0] / abs(x[0]) if x[0] != 0 else 1.0
        alpha = -ph * xnorm
        v = x.copy()
        v[0] -= alpha
        v /= np.linalg.norm(v)
        t = a[k + 1:, k + 1:]
        p = t @ v
        w = p - np.vdot(v, p).real * v
        t -= 2.0 * np.outer(v, w.conj()) + 2.0 * np.outer(w, v.conj())
        sub[k] = alpha
        qs = q[:, k + 1:]
        qs -= 2.0 * np.outer(qs @ v, v.conj())
    if n >= 2:
        sub[n - 2] = a[n - 1, n - 2]
    d = a.diagonal().real.copy()
    e = np.zeros(n)
    e[:n - 1] = np.abs(sub)
    phase = np.ones(n, dtype=complex)
    for k in range(n - 1):
        phase[k + 1] = phase[k] * (sub[k] / e[k] if e[k] > 0 else 1.0)
    q *= phase[None, :]
    return d, e, q


def tql(d, e, zt):
    n = d.shape[0]
    if n == 0:
        return
    e[n - 1] = 0.0
    floor = _EPS * float(np.max(np.abs(d) + np.abs(e)))
    for l in range(n):
        it = 0
        while True:
            m = l
            while m < n - 1:
                if abs(e[m]) <= _EPS * (abs(d[m]) + abs(d[m + 1])) or abs(e[m]) <= floor:
                    break
                m += 1
            if m == l:
                break
            it += 1
            if it > 60:
                raise ArithmeticError("QL iteration failed to converge")
            g = (d[l + 1] - d[l]) / (2.0 * e[l])
            r = math.hypot(g, 1.0)
            g = d[m] - d[l] + e[l] / (g + math.copysign(r, g))
            s = c = 1.0
            p = 0.0
            underflow = False
            for i in range(m - 1, l - 1, -1):
                f = s * e[i]
                b = c * e[i]
                r = math.hypot(f, g)
                e[i + 1] = r
                if r == 0.0:
                    d[i + 1] -= p
                    e[m] = 0.0
                    underflow = True
                    break
                s = f / r
                c = g / r
                g = d[i + 1] - p
                r = (d[i] - g) * s + 2.0 * c * b
                p = s * r
                d[i + 1] = g + p
                g = c * r - b
                zi = zt[i].copy()
                zt[i] = c * zi - s * zt[i + 1]
                zt[i + 1] = s * zi + c * zt[i + 1]
            if underflow:
                continue
            d[l] -= p
            e[l] = g
            e[m] = 0.0


def lu_det(a):
    n = a.shape[0]
    det = 1.0 + 0.0j
    for k in range(n):
        piv = k + int(np.argmax(np.abs(a[k:, k])))
        if a[piv, k] == 0:
            return 0j
        if piv != k:
            a[[k, piv]] = a[[piv, k]]
            det = -det
        det *= a[k, k]
        f = a[k + 1:, k] / a[k, k]
        a[k + 1:, k + 1:] -= np.outer(f, a[k, k + 1:])
    return complex(det)
