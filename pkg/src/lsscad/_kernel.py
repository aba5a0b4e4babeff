"""Compiled inner loop of the MM solver.

Operates on the Gram quantities ``X'X``, ``X'y`` and ``y'y`` only, so each
iteration costs O(p^3) regardless of n.
"""

import math

import numpy as np
from numba import njit

# status codes returned by mm_iterate
NOT_CONVERGED = 0
CONVERGED = 1
SINGULAR = -1

RCOND_FLOOR = 1e-12


@njit(cache=True)
def _dpen(t, lam, a):
    v = (a * lam - t) / (a - 1.0)
    if v < 0.0:
        v = 0.0
    return lam if v > lam else v


@njit(cache=True)
def _perturbed_pen(t, lam, a, xi):
    u1 = t if t < lam else lam
    u2 = t
    if u2 < lam:
        u2 = lam
    elif u2 > a * lam:
        u2 = a * lam
    pen = lam * u1 + (a * lam * (u2 - lam) - 0.5 * (u2 * u2 - lam * lam)) / (a - 1.0)
    integral = lam * math.log1p(u1 / xi) + (
        (a * lam + xi) * math.log((xi + u2) / (xi + lam)) - (u2 - lam)) / (a - 1.0)
    return pen - xi * integral


@njit(cache=True)
def _objective(XtX, Xty, yty, n, b, lam, a, xi):
    p = b.shape[0]
    quad = 0.0
    lin = 0.0
    pen = 0.0
    for i in range(p):
        lin += b[i] * Xty[i]
        row = 0.0
        for j in range(p):
            row += XtX[i, j] * b[j]
        quad += b[i] * row
        pen += _perturbed_pen(abs(b[i]), lam, a, xi)
    rss = yty - 2.0 * lin + quad
    if rss < 0.0:
        rss = 0.0
    return rss + n * pen


@njit(cache=True)
def _solve(XtX, Xty, w, n, L, s, out):
    # equilibrated Cholesky solve of (X'X + n diag(w)) out = X'y; False if singular
    p = Xty.shape[0]
    for i in range(p):
        s[i] = 1.0 / math.sqrt(XtX[i, i] + n * w[i])
    lmin = np.inf
    lmax = 0.0
    for j in range(p):
        acc = (XtX[j, j] + n * w[j]) * s[j] * s[j]
        for k in range(j):
            acc -= L[j, k] * L[j, k]
        if not acc > 0.0:
            return False
        ljj = math.sqrt(acc)
        L[j, j] = ljj
        lmin = min(lmin, ljj)
        lmax = max(lmax, ljj)
        for i in range(j + 1, p):
            acc = XtX[i, j] * s[i] * s[j]
            for k in range(j):
                acc -= L[i, k] * L[j, k]
            L[i, j] = acc / ljj
    if (lmin / lmax) ** 2 < RCOND_FLOOR:
        return False
    for i in range(p):
        acc = Xty[i] * s[i]
        for k in range(i):
            acc -= L[i, k] * out[k]
        out[i] = acc / L[i, i]
    for i in range(p - 1, -1, -1):
        acc = out[i]
        for k in range(i + 1, p):
            acc -= L[k, i] * out[k]
        out[i] = acc / L[i, i]
    for i in range(p):
        out[i] *= s[i]
    return True


@njit(cache=True)
def mm_iterate(XtX, Xty, yty, n, b0, xi, lam, a, tau, max_iter, trace):
    """Run MM steps from ``b0``; returns ``(b, iterations, status)``.

    ``trace[k]`` receives the perturbed objective after k steps.
    """
    p = b0.shape[0]
    b = b0.copy()
    nxt = np.empty(p)
    w = np.empty(p)
    L = np.zeros((p, p))
    s = np.empty(p)
    half_tau = 0.5 * tau
    trace[0] = _objective(XtX, Xty, yty, n, b, lam, a, xi)
    for it in range(1, max_iter + 1):
        for j in range(p):
            t = abs(b[j])
            w[j] = 0.5 * _dpen(t, lam, a) / (xi + t)
        if not _solve(XtX, Xty, w, n, L, s, nxt):
            return b, it, SINGULAR
        for j in range(p):
            b[j] = nxt[j]
        trace[it] = _objective(XtX, Xty, yty, n, b, lam, a, xi)
        done = True
        for j in range(p):
            g = 0.0
            for k in range(p):
                g += XtX[j, k] * b[k]
            t = abs(b[j])
            g = -2.0 * (Xty[j] - g) + n * b[j] * _dpen(t, lam, a) / (xi + t)
            if not abs(g) < half_tau:
                done = False
                break
        if done:
            return b, it, CONVERGED
    return b, max_iter, NOT_CONVERGED
