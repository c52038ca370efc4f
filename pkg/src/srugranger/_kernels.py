"""Compiled forward/backward recurrence kernels.

Private module: the public API lives in :mod:`srugranger.model`.  Kernels are
written as explicit scalar loops and compiled with numba's default strict
IEEE semantics (no fastmath), so the arithmetic matches a naive Python
re-implementation bit for bit, with dot-product accumulation in ascending
index order starting from 0.0.

Conventions shared by both kernels:

- ``x`` is the (T, n) input segment; step ``s`` (0-based, s = 0..T-2)
  consumes row ``x[s]`` and predicts row ``x[s+1]``.
- ``U`` is (T, m*d_phi), scale-major: entry ``j*d_phi + i`` is summary scale
  j of recurrent statistic i.  ``U[0]`` is the zero initial state and
  ``U[s+1]`` the state after step s.
- The feedback chain is one structure for both cell kinds: an optional fixed
  linear projection ``D`` followed by ``L`` dense layers ``fb_W/fb_b`` with
  the cell activation after each.  The plain cell is L = 1 with no
  projection; the economy cell is L >= 1 with the random projection.
- ``fb_dims`` has length L+1: input width of layer 0, then each layer's
  output width (the last equals the feedback width d_r).
- ``fb_lag`` = 0 feeds step s from ``U[s]``; 1 adds one extra delay.
"""

from __future__ import annotations

import math

import numpy as np
from numba import njit


@njit(cache=True)
def _act(kind, alpha, x):
    if x > 0.0:
        return x
    if kind == 0:  # relu
        return 0.0
    return alpha * math.expm1(x)


@njit(cache=True)
def _dact(kind, alpha, x):
    # Right-derivative convention: value 1 at x == 0 for both kinds.
    if x >= 0.0:
        return 1.0
    if kind == 0:
        return 0.0
    return alpha * math.exp(x)


@njit(cache=True)
def forward(x, W_in, b_in, W_f, use_proj, D, fb_W, fb_b, fb_dims,
            W_o, b_o, w_y, b_y, alphas, act_kind, act_alpha, fb_lag):
    T, n = x.shape
    steps = T - 1
    d_phi = W_in.shape[0]
    m = alphas.shape[0]
    d_u = m * d_phi
    d_o = W_o.shape[0]
    L = fb_W.shape[0]
    d_v = fb_dims[0]
    d_r = fb_dims[L]
    maxd = 0
    for l in range(L + 1):
        if fb_dims[l] > maxd:
            maxd = fb_dims[l]

    U = np.zeros((T, d_u))
    V = np.zeros((steps, d_v))
    FBp = np.zeros((L, steps, maxd))
    FBo = np.zeros((L, steps, maxd))
    Ap = np.zeros((steps, d_phi))
    PHI = np.zeros((steps, d_phi))
    Cp = np.zeros((steps, d_o))
    O = np.zeros((steps, d_o))
    preds = np.zeros(steps)
    z = np.zeros(maxd)
    bad_step = np.int64(-1)

    # Input transform for every step: xin[s, i] = sum_j W_in[i, j] x[s, j].
    xin = np.zeros((steps, d_phi))
    for s in range(steps):
        for i in range(d_phi):
            acc = 0.0
            for j in range(n):
                acc += W_in[i, j] * x[s, j]
            xin[s, i] = acc

    for s in range(steps):
        idx = s - fb_lag
        if idx < 0:
            idx = 0  # U[0] is the zero state
        # Feedback input: projected or raw summary state.
        if use_proj:
            for k in range(d_v):
                acc = 0.0
                for j in range(d_u):
                    acc += D[k, j] * U[idx, j]
                V[s, k] = acc
        else:
            for j in range(d_u):
                V[s, j] = U[idx, j]
        for j in range(d_v):
            z[j] = V[s, j]
        # Feedback layers.
        for l in range(L):
            in_d = fb_dims[l]
            out_d = fb_dims[l + 1]
            for i in range(out_d):
                acc = 0.0
                for j in range(in_d):
                    acc += fb_W[l, i, j] * z[j]
                acc += fb_b[l, i]
                FBp[l, s, i] = acc
                FBo[l, s, i] = _act(act_kind, act_alpha, acc)
            for i in range(out_d):
                z[i] = FBo[l, s, i]
        # Recurrent statistics.
        for i in range(d_phi):
            acc = xin[s, i]
            for k in range(d_r):
                acc += W_f[i, k] * z[k]
            acc += b_in[i]
            Ap[s, i] = acc
            ph = _act(act_kind, act_alpha, acc)
            PHI[s, i] = ph
            if bad_step < 0 and not np.isfinite(ph):
                bad_step = s
        # Summary statistics, one EWMA per scale.
        for j in range(m):
            a = alphas[j]
            oma = 1.0 - a
            base = j * d_phi
            for i in range(d_phi):
                U[s + 1, base + i] = oma * U[s, base + i] + a * PHI[s, i]

    # Output features and predictions (independent across steps).
    for s in range(steps):
        for i in range(d_o):
            acc = 0.0
            for j in range(d_u):
                acc += W_o[i, j] * U[s + 1, j]
            acc += b_o[i]
            Cp[s, i] = acc
            O[s, i] = _act(act_kind, act_alpha, acc)
        acc = 0.0
        for i in range(d_o):
            acc += w_y[i] * O[s, i]
        acc += b_y
        preds[s] = acc
        if bad_step < 0 and not np.isfinite(acc):
            bad_step = s

    return preds, V, FBp, FBo, Ap, PHI, U, Cp, O, bad_step


@njit(cache=True)
def backward(x, res, W_in, W_f, use_proj, D, fb_W, fb_b, fb_dims,
             W_o, w_y, alphas, act_kind, act_alpha, fb_lag, train_D,
             V, FBp, FBo, Ap, U, Cp, O):
    steps = res.shape[0]
    n = x.shape[1]
    d_phi = W_in.shape[0]
    m = alphas.shape[0]
    d_u = m * d_phi
    d_o = W_o.shape[0]
    L = fb_W.shape[0]
    d_v = fb_dims[0]
    d_r = fb_dims[L]
    maxd = 0
    for l in range(L + 1):
        if fb_dims[l] > maxd:
            maxd = fb_dims[l]

    gWin = np.zeros(W_in.shape)
    gWf = np.zeros(W_f.shape)
    gbin = np.zeros(d_phi)
    gD = np.zeros(D.shape)
    gfbW = np.zeros(fb_W.shape)
    gfbb = np.zeros(fb_b.shape)
    gWo = np.zeros(W_o.shape)
    gbo = np.zeros(d_o)
    gwy = np.zeros(d_o)
    gby = 0.0

    dC = np.zeros((steps, d_o))
    dA = np.zeros((steps, d_phi))
    dFBp = np.zeros((L, steps, maxd))
    dU = np.zeros((steps + 1, d_u))
    dz = np.zeros(maxd)
    dz2 = np.zeros(maxd)

    # Output path, independent across steps.  Loss is the mean of squared
    # residuals, so d loss / d pred[s] = 2 res[s] / steps.
    for s in range(steps):
        g = 2.0 * res[s] / steps
        gby += g
        for i in range(d_o):
            gwy[i] += g * O[s, i]
            dc = g * w_y[i] * _dact(act_kind, act_alpha, Cp[s, i])
            dC[s, i] = dc
            gbo[i] += dc
        for j in range(d_u):
            acc = 0.0
            for i in range(d_o):
                acc += W_o[i, j] * dC[s, i]
            dU[s + 1, j] = acc

    # Recurrence, walked backwards.  dU[s] collects: the output-path term
    # (above), the EWMA carry from step s, and the feedback-path term from
    # the step that consumed U[s].
    for s in range(steps - 1, -1, -1):
        for i in range(d_phi):
            acc = 0.0
            for j in range(m):
                acc += alphas[j] * dU[s + 1, j * d_phi + i]
            dA[s, i] = acc * _dact(act_kind, act_alpha, Ap[s, i])
        for j in range(m):
            oma = 1.0 - alphas[j]
            base = j * d_phi
            for i in range(d_phi):
                dU[s, base + i] += oma * dU[s + 1, base + i]
        # Back through the feedback chain: r -> layers -> (projection).
        for k in range(d_r):
            acc = 0.0
            for i in range(d_phi):
                acc += W_f[i, k] * dA[s, i]
            dz[k] = acc
        for l in range(L - 1, -1, -1):
            in_d = fb_dims[l]
            out_d = fb_dims[l + 1]
            for i in range(out_d):
                dFBp[l, s, i] = dz[i] * _dact(act_kind, act_alpha, FBp[l, s, i])
            for j in range(in_d):
                acc = 0.0
                for i in range(out_d):
                    acc += fb_W[l, i, j] * dFBp[l, s, i]
                dz2[j] = acc
            for j in range(in_d):
                dz[j] = dz2[j]
        idx = s - fb_lag
        if idx >= 0:
            if use_proj:
                for j in range(d_u):
                    acc = 0.0
                    for k in range(d_v):
                        acc += D[k, j] * dz[k]
                    dU[idx, j] += acc
                if train_D:
                    for k in range(d_v):
                        for j in range(d_u):
                            gD[k, j] += dz[k] * U[idx, j]
            else:
                for j in range(d_u):
                    dU[idx, j] += dz[j]

    # Weight gradients, accumulated over steps in forward order.
    for i in range(d_phi):
        for j in range(n):
            acc = 0.0
            for s in range(steps):
                acc += dA[s, i] * x[s, j]
            gWin[i, j] = acc
        for k in range(d_r):
            acc = 0.0
            for s in range(steps):
                acc += dA[s, i] * FBo[L - 1, s, k]
            gWf[i, k] = acc
        acc = 0.0
        for s in range(steps):
            acc += dA[s, i]
        gbin[i] = acc
    for l in range(L):
        in_d = fb_dims[l]
        out_d = fb_dims[l + 1]
        for i in range(out_d):
            for j in range(in_d):
                acc = 0.0
                if l == 0:
                    for s in range(steps):
                        acc += dFBp[l, s, i] * V[s, j]
                else:
                    for s in range(steps):
                        acc += dFBp[l, s, i] * FBo[l - 1, s, j]
                gfbW[l, i, j] = acc
            acc = 0.0
            for s in range(steps):
                acc += dFBp[l, s, i]
            gfbb[l, i] = acc
    for i in range(d_o):
        for j in range(d_u):
            acc = 0.0
            for s in range(steps):
                acc += dC[s, i] * U[s + 1, j]
            gWo[i, j] = acc

    return gWin, gWf, gbin, gD, gfbW, gfbb, gWo, gbo, gwy, gby
