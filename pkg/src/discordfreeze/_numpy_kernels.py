"""Pure-numpy twins of the kernels in ``_numba_kernels``."""
import numpy as np


def jacobi_eigvalsh(a, tol, max_sweeps):
    m = np.array(a, dtype=np.complex128)
    n = m.shape[0]
    iu = np.triu_indices(n, 1)
    for sweep in range(max_sweeps + 1):
        if np.max(np.abs(m[iu]), initial=0.0) < tol:
            return m.diagonal().real.copy(), sweep
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
                t = 1.0 if tau == 0.0 else np.copysign(1.0, tau) / (abs(tau) + np.sqrt(1.0 + tau * tau))
                c = 1.0 / np.sqrt(1.0 + t * t)
                s = t * c
                col_p = m[:, p].copy()
                col_q = m[:, q] * np.conj(ph)
                new_p = c * col_p - s * col_q
                new_q = c * col_q + s * col_p
                m[:, p] = new_p
                m[:, q] = new_q
                m[p, :] = np.conj(new_p)
                m[q, :] = np.conj(new_q)
                m[p, p] = app - t * g
                m[q, q] = aqq + t * g
                m[p, q] = 0.0
                m[q, p] = 0.0
    return m.diagonal().real.copy(), -1


def _projectors(theta, phi, sign):
    theta = np.asarray(theta, dtype=float)
    phi = np.asarray(phi, dtype=float)
    nx = np.sin(theta) * np.cos(phi)
    ny = np.sin(theta) * np.sin(phi)
    nz = np.cos(theta)
    proj = np.empty(theta.shape + (2, 2), dtype=np.complex128)
    proj[..., 0, 0] = 0.5 * (1 + sign * nz)
    proj[..., 1, 1] = 0.5 * (1 - sign * nz)
    proj[..., 0, 1] = 0.5 * sign * (nx - 1j * ny)
    proj[..., 1, 0] = 0.5 * sign * (nx + 1j * ny)
    return proj


def _conditional_entropy_many(rho, theta, phi):
    r = np.asarray(rho, dtype=np.complex128).reshape(2, 2, 2, 2)
    total = np.zeros(np.shape(theta))
    for sign in (1.0, -1.0):
        proj = _projectors(theta, phi, sign)
        m = np.einsum("...ac,cbad->...bd", proj, r)
        tr = m[..., 0, 0].real + m[..., 1, 1].real
        dd = m[..., 0, 0].real - m[..., 1, 1].real
        disc = np.sqrt(dd * dd + 4.0 * np.abs(m[..., 0, 1]) ** 2)
        safe_tr = np.where(tr > 1e-300, tr, 1.0)
        for e in (0.5 * (tr + disc), 0.5 * (tr - disc)):
            pos = (e > 0.0) & (tr > 1e-300)
            ratio = np.where(pos, e / safe_tr, 1.0)
            total -= np.where(pos, e * np.log2(ratio), 0.0)
    return total


def conditional_entropy(rho, theta, phi):
    return float(_conditional_entropy_many(rho, theta, phi))


def conditional_entropy_grid(rho, thetas, phis):
    tt, pp = np.meshgrid(thetas, phis, indexing="ij")
    return _conditional_entropy_many(rho, tt, pp)
