"""Compiled hot path for the decomposition-roof search.

Everything here is numba-jitted: the Givens-ladder isometry builder, the
ensemble objective (probability-weighted member entropy), and a lean
Nelder-Mead simplex loop that calls the objective directly.  The Python
layer in ``measures`` owns seeding, restart scheduling, and witness
construction.

Regime codes: 0 generic, 1 Renyi limit, 2 Tsallis value, 3 von Neumann.
"""

import numpy as np
from numba import njit

EIG_CUTOFF = 1e-15
MEMBER_CUTOFF = 1e-14   # members below this probability contribute nothing

REGIME_GENERIC = 0
REGIME_RENYI = 1
REGIME_TSALLIS = 2
REGIME_VON_NEUMANN = 3


def givens_layout(m: int, r: int):
    """Row-pair application order and parameter count for an m x r isometry.

    The ladder applies adjacent-row rotations, one (angle, phase) pair each,
    to the first r columns of the identity followed by r column phases;
    every isometry is reachable.  Parameter vector layout:
    [theta_0, phi_0, ..., theta_{T-1}, phi_{T-1}, gamma_0, ..., gamma_{r-1}].
    """
    pairs = []
    for k in range(r - 1, -1, -1):
        for j in range(k + 1, m):
            pairs.append((j - 1, j))
    n_rot = len(pairs)
    if n_rot == 0:
        pairs_arr = np.zeros((0, 2), dtype=np.int64)
    else:
        pairs_arr = np.array(pairs, dtype=np.int64)
    return pairs_arr, 2 * n_rot + r


@njit(cache=True)
def build_isometry(x, pairs, m, r):
    """m x r isometry from the Givens-ladder parameter vector."""
    n_rot = pairs.shape[0]
    v = np.zeros((m, r), dtype=np.complex128)
    for k in range(r):
        v[k, k] = np.exp(1j * x[2 * n_rot + k])
    for t in range(n_rot):
        a = pairs[t, 0]
        b = pairs[t, 1]
        c = np.cos(x[2 * t])
        sn = np.sin(x[2 * t])
        ph = np.exp(1j * x[2 * t + 1])
        phc = np.conj(ph)
        for kk in range(r):
            va = v[a, kk]
            vb = v[b, kk]
            v[a, kk] = c * va - sn * phc * vb
            v[b, kk] = sn * ph * va + c * vb
    return v


@njit(cache=True)
def _trace_power(mu, q):
    if q == 0.0:
        cnt = 0.0
        for i in range(mu.shape[0]):
            if mu[i] > EIG_CUTOFF:
                cnt += 1.0
        return cnt
    total = 0.0
    for i in range(mu.shape[0]):
        if mu[i] > EIG_CUTOFF:
            total += mu[i] ** q
    return total


@njit(cache=True)
def _spectrum_entropy(mu, q, s, regime):
    if regime == REGIME_VON_NEUMANN:
        total = 0.0
        for i in range(mu.shape[0]):
            if mu[i] > EIG_CUTOFF:
                total -= mu[i] * np.log(mu[i])
        return total
    trq = _trace_power(mu, q)
    if regime == REGIME_RENYI:
        return np.log(trq) / (1.0 - q)
    if regime == REGIME_TSALLIS:
        return (trq - 1.0) / (1.0 - q)
    return (trq ** s - 1.0) / ((1.0 - q) * s)


@njit(cache=True)
def objective(x, pairs, m, r, ws, d_a, d_b, q, s, regime, sign):
    """sign * sum_i p_i S(member_i marginal on side A).

    ``ws`` is (r, d) with rows sqrt(lambda_k) <v_k|, columns permuted so the
    flat index is a * d_b + b with a the side-A basis index.  Row i of
    V @ ws is the subnormalized member, its norm^2 the probability.
    """
    v = build_isometry(x, pairs, m, r)
    psi = np.dot(v, ws)
    total = 0.0
    mu2 = np.empty(2, dtype=np.float64)
    for i in range(m):
        if d_a == 2:
            g00 = 0.0
            g11 = 0.0
            g01 = 0.0j
            for b in range(d_b):
                u = psi[i, b]
                w = psi[i, d_b + b]
                g00 += u.real * u.real + u.imag * u.imag
                g11 += w.real * w.real + w.imag * w.imag
                g01 += u * np.conj(w)
            p = g00 + g11
            if p < MEMBER_CUTOFF:
                continue
            diff = g00 - g11
            disc2 = diff * diff + 4.0 * (g01.real * g01.real + g01.imag * g01.imag)
            disc = np.sqrt(disc2) if disc2 > 0.0 else 0.0
            hi = (p + disc) / (2.0 * p)
            lo = (p - disc) / (2.0 * p)
            if hi > 1.0:
                hi = 1.0
            if lo < 0.0:
                lo = 0.0
            mu2[0] = hi
            mu2[1] = lo
            total += p * _spectrum_entropy(mu2, q, s, regime)
        else:
            gram = np.zeros((d_a, d_a), dtype=np.complex128)
            for a1 in range(d_a):
                for a2 in range(a1, d_a):
                    acc = 0.0j
                    for b in range(d_b):
                        acc += psi[i, a1 * d_b + b] * np.conj(psi[i, a2 * d_b + b])
                    gram[a1, a2] = acc
                    gram[a2, a1] = np.conj(acc)
            p = 0.0
            for a1 in range(d_a):
                p += gram[a1, a1].real
            if p < MEMBER_CUTOFF:
                continue
            mu = np.linalg.eigvalsh(gram) / p
            for k in range(mu.shape[0]):
                if mu[k] < 0.0:
                    mu[k] = 0.0
            total += p * _spectrum_entropy(mu, q, s, regime)
    return sign * total


@njit(cache=True)
def nelder_mead(x0, step, max_iter, fatol,
                pairs, m, r, ws, d_a, d_b, q, s, regime, sign):
    """Simplex minimization of ``objective``; returns (x_best, f_best, converged).

    Single-pass best/worst bookkeeping instead of a per-iteration sort.
    Convergence is declared on the function spread alone: the objective has
    flat phase directions along which the simplex never needs to collapse.
    """
    d = x0.shape[0]
    npt = d + 1
    sim = np.empty((npt, d), dtype=np.float64)
    fsim = np.empty(npt, dtype=np.float64)
    for j in range(d):
        sim[0, j] = x0[j]
    fsim[0] = objective(x0, pairs, m, r, ws, d_a, d_b, q, s, regime, sign)
    for i in range(d):
        for j in range(d):
            sim[i + 1, j] = x0[j]
        sim[i + 1, i] += step
        fsim[i + 1] = objective(sim[i + 1], pairs, m, r, ws, d_a, d_b, q, s, regime, sign)

    converged = False
    xbar = np.empty(d, dtype=np.float64)
    xr = np.empty(d, dtype=np.float64)
    xc = np.empty(d, dtype=np.float64)

    for _ in range(max_iter):
        ilo = 0
        ihi = 0
        for i in range(1, npt):
            if fsim[i] < fsim[ilo]:
                ilo = i
            if fsim[i] > fsim[ihi]:
                ihi = i
        inhi = ilo
        for i in range(npt):
            if i != ihi and fsim[i] > fsim[inhi]:
                inhi = i

        if fsim[ihi] - fsim[ilo] <= fatol:
            converged = True
            break

        for j in range(d):
            acc = 0.0
            for i in range(npt):
                acc += sim[i, j]
            xbar[j] = (acc - sim[ihi, j]) / d

        for j in range(d):
            xr[j] = 2.0 * xbar[j] - sim[ihi, j]
        fr = objective(xr, pairs, m, r, ws, d_a, d_b, q, s, regime, sign)

        if fr < fsim[ilo]:
            for j in range(d):
                xc[j] = xbar[j] + 2.0 * (xbar[j] - sim[ihi, j])
            fe = objective(xc, pairs, m, r, ws, d_a, d_b, q, s, regime, sign)
            if fe < fr:
                for j in range(d):
                    sim[ihi, j] = xc[j]
                fsim[ihi] = fe
            else:
                for j in range(d):
                    sim[ihi, j] = xr[j]
                fsim[ihi] = fr
        elif fr < fsim[inhi]:
            for j in range(d):
                sim[ihi, j] = xr[j]
            fsim[ihi] = fr
        else:
            shrink = False
            if fr < fsim[ihi]:
                for j in range(d):
                    xc[j] = xbar[j] + 0.5 * (xr[j] - xbar[j])
                fc = objective(xc, pairs, m, r, ws, d_a, d_b, q, s, regime, sign)
                if fc <= fr:
                    for j in range(d):
                        sim[ihi, j] = xc[j]
                    fsim[ihi] = fc
                else:
                    shrink = True
            else:
                for j in range(d):
                    xc[j] = xbar[j] + 0.5 * (sim[ihi, j] - xbar[j])
                fc = objective(xc, pairs, m, r, ws, d_a, d_b, q, s, regime, sign)
                if fc < fsim[ihi]:
                    for j in range(d):
                        sim[ihi, j] = xc[j]
                    fsim[ihi] = fc
                else:
                    shrink = True
            if shrink:
                for i in range(npt):
                    if i == ilo:
                        continue
                    for j in range(d):
                        sim[i, j] = sim[ilo, j] + 0.5 * (sim[i, j] - sim[ilo, j])
                    fsim[i] = objective(sim[i], pairs, m, r, ws, d_a, d_b, q, s, regime, sign)

    ilo = 0
    for i in range(1, npt):
        if fsim[i] < fsim[ilo]:
            ilo = i
    return sim[ilo].copy(), fsim[ilo], converged
