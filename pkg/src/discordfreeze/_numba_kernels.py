"""Loop kernels compiled with numba.

Every function here has a twin with the same signature in
``_numpy_kernels``; the two are checked against each other in the tests.
"""
import math

import numpy as np
from numba import njit


@njit(cache=True)
def jacobi_eigvalsh(a, tol, max_sweeps):
    """Cyclic Jacobi on a complex Hermitian matrix.

    Returns ``(diagonal, sweeps)``; ``sweeps == -1`` signals that the largest
    off-diagonal magnitude was still >= tol after ``max_sweeps`` sweeps.
    """
    n = a.shape[0]
    m = a.astype(np.complex128)
    out = np.empty(n)
    for sweep in range(max_sweeps + 1):
        off = 0.0
        for p in range(n):
            for q in range(p + 1, n):
                v = abs(m[p, q])
                if v > off:
                    off = v
        if off < tol:
            for i in range(n):
                out[i] = m[i, i].real
            return out, sweep
        if sweep == max_sweeps:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                g = abs(m[p, q])
                if g == 0.0:
                    continue
                ph = m[p, q] / g
                app = m[p, p].real
                aqq = m[q, q].real
                tau = (aqq - app) / (2.0 * g)
                if tau == 0.0:
                    t = 1.0
                else:
                    t = math.copysign(1.0, tau) / (abs(tau) + math.sqrt(1.0 + tau * tau))
                c = 1.0 / math.sqrt(1.0 + t * t)
                s = t * c
                phc = ph.conjugate()
                for k in range(n):
                    if k == p or k == q:
                        continue
                    kp = m[k, p]
                    kq = m[k, q] * phc
                    new_p = c * kp - s * kq
                    new_q = c * kq + s * kp
                    m[k, p] = new_p
                    m[k, q] = new_q
                    m[p, k] = new_p.conjugate()
                    m[q, k] = new_q.conjugate()
                m[p, p] = app - t * g
                m[q, q] = aqq + t * g
                m[p, q] = 0.0
                m[q, p] = 0.0
    for i in range(n):
        out[i] = m[i, i].real
    return out, -1


@njit(cache=True)
def _outcome_entropy(rho, sign, nx, ny, nz):
    # unnormalised conditional state of B for outcome `sign` of n.sigma on A,
    # returned as p * S(rho_B|outcome)
    p00 = 0.5 * (1.0 + sign * nz)
    p11 = 0.5 * (1.0 - sign * nz)
    p01 = 0.5 * sign * complex(nx, -ny)
    p10 = p01.conjugate()
    m00 = 0j
    m01 = 0j
    m11 = 0j
    # M[b, d] = sum_{a,c} P[a, c] rho[2c + b, 2a + d]
    for a in range(2):
        for cc in range(2):
            if a == 0 and cc == 0:
                w = p00 + 0j
            elif a == 0:
                w = p01
            elif cc == 0:
                w = p10
            else:
                w = p11 + 0j
            m00 += w * rho[2 * cc, 2 * a]
            m01 += w * rho[2 * cc, 2 * a + 1]
            m11 += w * rho[2 * cc + 1, 2 * a + 1]
    tr = m00.real + m11.real
    if tr <= 1e-300:
        return 0.0
    dd = m00.real - m11.real
    disc = math.sqrt(dd * dd + 4.0 * (m01.real * m01.real + m01.imag * m01.imag))
    h = 0.0
    e1 = 0.5 * (tr + disc)
    e2 = 0.5 * (tr - disc)
    if e1 > 0.0:
        h -= e1 * math.log2(e1 / tr)
    if e2 > 0.0:
        h -= e2 * math.log2(e2 / tr)
    return h


@njit(cache=True)
def conditional_entropy(rho, theta, phi):
    """sum_k p_k S(rho_B|k) after measuring A along (theta, phi)."""
    st = math.sin(theta)
    nx = st * math.cos(phi)
    ny = st * math.sin(phi)
    nz = math.cos(theta)
    return _outcome_entropy(rho, 1.0, nx, ny, nz) + _outcome_entropy(rho, -1.0, nx, ny, nz)


@njit(cache=True)
def conditional_entropy_grid(rho, thetas, phis):
    out = np.empty((thetas.shape[0], phis.shape[0]))
    for i in range(thetas.shape[0]):
        for j in range(phis.shape[0]):
            out[i, j] = conditional_entropy(rho, thetas[i], phis[j])
    return out
