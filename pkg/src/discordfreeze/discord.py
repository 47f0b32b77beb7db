"""Quantum discord of dephased Bell-diagonal states.

Two independent routes are provided:

* closed forms in terms of the evolved Bell-basis spectrum and the largest
  absolute correlation ``c_M`` (``discord_analytic`` and friends);
* ``discord_bruteforce``, which works on any two-qubit density matrix and
  maximises the post-measurement mutual information over projective
  measurements on A.

The discord rate dQ/dq on the branches where ``c_M`` is |c1| or |c2| is a
difference of two relative entropies; its sign follows from joint
convexity, which ``convexity_gap`` exposes directly.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from . import kernels
from .channels import _check_q, apply_local_dephasing_extended, evolve_spectrum, evolve_spectrum_array
from .errors import NotApplicableError, NotHermitianError, UnphysicalStateError
from .qmath import (
    _xlog2x,
    as_matrix,
    binary_entropy,
    hermitian_eigenvalues,
    is_hermitian,
    partial_trace,
    relative_entropy,
    shannon_entropy,
)
from .states import (
    AnyBellState,
    BellDiagonal,
    ExtendedBellDiagonal,
    extended_eigensystem,
    lambdas_from_c,
    standard_equivalent,
)

TIE_TOL = 1e-12
RATE_Q_LIMIT = 1.0 - 1e-9
EDGE_TOL = 1e-12


class Branch(str, enum.Enum):
    """Which correlation attains c_M: |c1(q)|, |c2(q)| or |c3|."""

    B1 = "B1"
    B2 = "B2"
    B3 = "B3"

    def __str__(self) -> str:
        return self.value


class BranchInfo(NamedTuple):
    branch: Branch
    c_max: float
    x_max: float


def _evolved(s: AnyBellState, q: float) -> tuple[tuple[float, float, float, float], tuple[float, float, float]]:
    """Bell-basis spectrum at q and the absolute correlations (|c1|, |c2|, |c3|) at q."""
    q = _check_q(q)
    if isinstance(s, BellDiagonal):
        lams = evolve_spectrum(lambdas_from_c(s), q).as_tuple()
        d = abs(1.0 - q)
        return lams, (d * abs(s.c1), d * abs(s.c2), abs(s.c3))
    if isinstance(s, ExtendedBellDiagonal):
        sq = apply_local_dephasing_extended(s, q)
        sp, _, _ = extended_eigensystem(sq)
        a1, a2 = sq.singular_correlations()
        return sp.as_tuple(), (a1, a2, abs(sq.c33))
    raise TypeError(f"not a Bell-diagonal state: {s!r}")


def _tied(abs_c: tuple[float, float, float]) -> list[Branch]:
    c_max = max(abs_c)
    return [b for b, a in zip((Branch.B1, Branch.B2, Branch.B3), abs_c) if a >= c_max - TIE_TOL]


def _select(abs_c: tuple[float, float, float]) -> Branch:
    tied = _tied(abs_c)
    for b in (Branch.B3, Branch.B1, Branch.B2):
        if b in tied:
            return b
    raise AssertionError("unreachable")


def c_max_branch(s: AnyBellState, q: float = 0.0) -> BranchInfo:
    """Active branch, c_M and x_M = (1 + c_M)/2. Ties resolve B3 > B1 > B2."""
    _, abs_c = _evolved(s, q)
    c_max = max(abs_c)
    return BranchInfo(_select(abs_c), c_max, 0.5 * (1.0 + c_max))


def _discord_from(lams, x_max: float) -> float:
    return 1.0 + sum(_xlog2x(l) for l in lams) + binary_entropy(x_max)


def discord_analytic(s: AnyBellState, q: float = 0.0) -> float:
    lams, abs_c = _evolved(s, q)
    return _discord_from(lams, 0.5 * (1.0 + max(abs_c)))


def classical_correlation_analytic(s: AnyBellState, q: float = 0.0) -> float:
    _, abs_c = _evolved(s, q)
    return 1.0 - binary_entropy(0.5 * (1.0 + max(abs_c)))


def mutual_information(s: AnyBellState, q: float = 0.0) -> float:
    """2 - S(rho_AB(q)); both marginals of these families are maximally mixed."""
    lams, _ = _evolved(s, q)
    return 2.0 - shannon_entropy(lams)


def footnote_x_max(lams, c_signed: float, branch: Branch) -> float:
    """x_M written as a sum of two Bell-basis eigenvalues.

    For a non-negative active correlation the pairs are (l1+l2), (l2+l3),
    (l1+l3) for B1, B2, B3. A negative correlation selects the
    complementary pair instead.
    """
    l1, l2, l3, l4 = lams
    pair, rest = {
        Branch.B1: (l1 + l2, l3 + l4),
        Branch.B2: (l2 + l3, l1 + l4),
        Branch.B3: (l1 + l3, l2 + l4),
    }[branch]
    return pair if c_signed >= 0 else rest


def discord_branch_formula(s: BellDiagonal, q: float, branch: Branch) -> float:
    """Discord evaluated with the x_M eigenvalue-pair of ``branch`` regardless of which is active."""
    lams = evolve_spectrum(lambdas_from_c(s), q).as_tuple()
    d = 1.0 - q
    c_signed = {Branch.B1: d * s.c1, Branch.B2: d * s.c2, Branch.B3: s.c3}[branch]
    return _discord_from(lams, footnote_x_max(lams, c_signed, branch))


# -- vectorised curves ---------------------------------------------------------


def _curve_inputs(s: AnyBellState, qs: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    d = 1.0 - qs
    if isinstance(s, BellDiagonal):
        lams = evolve_spectrum_array(lambdas_from_c(s).as_array(), qs)
        c_max = np.maximum(np.abs(d) * max(abs(s.c1), abs(s.c2)), abs(s.c3))
        return lams, c_max
    if isinstance(s, ExtendedBellDiagonal):
        c11, c12, c21, c22 = (d * c for c in (s.c11, s.c12, s.c21, s.c22))
        rp = np.hypot(c11 - c22, c12 + c21)
        rm = np.hypot(c11 + c22, c12 - c21)
        lams = np.stack([(1 + rp + s.c33) / 4, (1 + rm - s.c33) / 4, (1 - rp + s.c33) / 4, (1 - rm - s.c33) / 4], axis=-1)
        c_max = np.maximum(0.5 * (rp + rm), abs(s.c33))
        return np.clip(lams, 0.0, None), c_max
    raise TypeError(f"not a Bell-diagonal state: {s!r}")


def _xlog2x_array(x: np.ndarray) -> np.ndarray:
    pos = x > 0
    return np.where(pos, x * np.log2(np.where(pos, x, 1.0)), 0.0)


def _h2_array(x: np.ndarray) -> np.ndarray:
    return -_xlog2x_array(x) - _xlog2x_array(1.0 - x)


def discord_curve(s: AnyBellState, qs) -> np.ndarray:
    """discord_analytic over an array of q values."""
    qs = np.atleast_1d(np.asarray(qs, dtype=float))
    if np.any((qs < 0) | (qs > 2)):
        raise ValueError("q values must lie in [0, 2]")
    lams, c_max = _curve_inputs(s, qs)
    return 1.0 + _xlog2x_array(lams).sum(axis=-1) + _h2_array(0.5 * (1.0 + c_max))


def correlation_curves(s: AnyBellState, qs) -> dict[str, np.ndarray]:
    """Q, I_c and I over a q grid."""
    qs = np.atleast_1d(np.asarray(qs, dtype=float))
    lams, c_max = _curve_inputs(s, qs)
    neg_s = _xlog2x_array(lams).sum(axis=-1)
    h = _h2_array(0.5 * (1.0 + c_max))
    return {"Q": 1.0 + neg_s + h, "I_c": 1.0 - h, "I": 2.0 + neg_s}


# -- rates and the relative-entropy decomposition ----------------------------


def _as_standard(s: AnyBellState) -> BellDiagonal:
    return standard_equivalent(s) if isinstance(s, ExtendedBellDiagonal) else s


def _xi_eta(lams, branch: Branch):
    l1, l2, l3, l4 = lams
    if branch is Branch.B2:
        # roles of l1 and l3 exchanged
        l1, l3 = l3, l1
    return (l1, l2, l3, l4), (l3, l4, l1, l2)


def _mu_nu(x_max: float):
    return (x_max, 1.0 - x_max), (1.0 - x_max, x_max)


def _branch_mu_nu(lams, branch: Branch):
    """mu, nu for a transverse branch, with 1 - x_M taken from the smaller
    eigenvalue pair so that it keeps full precision when |c| is near 1."""
    l1, l2, l3, l4 = lams
    a, b = (l1 + l2, l3 + l4) if branch is Branch.B1 else (l2 + l3, l1 + l4)
    small = min(a, b)
    return (1.0 - small, small), (small, 1.0 - small)


def _branch_rate(lams, branch: Branch, q: float) -> float:
    xi, eta = _xi_eta(lams, branch)
    h4 = relative_entropy(xi, eta)
    pref = 1.0 / (2.0 * (1.0 - q))
    if branch is Branch.B3:
        return -pref * h4
    mu, nu = _branch_mu_nu(lams, branch)
    return pref * (relative_entropy(mu, nu) - h4)


@dataclass(frozen=True)
class DiscordRate:
    """dQ/dq at a point.

    ``rate`` is None when branches tie (see ``branch_rates`` for the
    one-sided values), when q is within 1e-9 of 1, or when the value is an
    indeterminate inf - inf.
    """

    branch: Branch
    rate: float | None
    branch_rates: dict = field(default_factory=dict)
    note: str = ""


def discord_rate(s: AnyBellState, q: float) -> DiscordRate:
    s = _as_standard(s)
    q = _check_q(q)
    lams, abs_c = _evolved(s, q)
    branch = _select(abs_c)
    if q > RATE_Q_LIMIT:
        return DiscordRate(branch, None, {}, "limit-unavailable")
    tied = _tied(abs_c)
    rates = {b: _branch_rate(lams, b, q) for b in tied}
    if len(tied) > 1:
        return DiscordRate(branch, None, rates, "tie")
    rate = rates[branch]
    if math.isnan(rate):
        return DiscordRate(branch, None, rates, "singular")
    return DiscordRate(branch, rate, rates)


class ConvexityTerms(NamedTuple):
    mixed: float  # H2(mu || nu)
    weighted: float  # alpha H2(xi1 || eta1) + beta H2(xi2 || eta2)
    full: float  # H4(xi || eta)


def _transverse_branch(abs_c) -> Branch:
    tied = _tied(abs_c)
    for b in (Branch.B1, Branch.B2):
        if b in tied:
            return b
    raise NotApplicableError("the |c3| branch is strictly active; the convexity decomposition does not apply")


def convexity_terms(s: AnyBellState, q: float = 0.0) -> ConvexityTerms:
    """The three sides of the joint-convexity inequality on the active transverse branch.

    Applicable whenever |c1(q)| or |c2(q)| attains c_M, including ties with
    |c3|.
    """
    s = _as_standard(s)
    lams, abs_c = _evolved(s, q)
    branch = _transverse_branch(abs_c)
    xi, eta = _xi_eta(lams, branch)
    mu, nu = _branch_mu_nu(lams, branch)
    alpha = xi[0] + xi[2]
    beta = xi[1] + xi[3]
    weighted = 0.0
    if alpha > 0:
        weighted += alpha * relative_entropy((xi[0] / alpha, xi[2] / alpha), (xi[2] / alpha, xi[0] / alpha))
    if beta > 0:
        weighted += beta * relative_entropy((xi[1] / beta, xi[3] / beta), (xi[3] / beta, xi[1] / beta))
    return ConvexityTerms(relative_entropy(mu, nu), weighted, relative_entropy(xi, eta))


def convexity_gap(s: AnyBellState, q: float = 0.0) -> float:
    """H4(xi || eta) - H2(mu || nu); zero exactly on the freezing surface."""
    t = convexity_terms(s, q)
    if math.isinf(t.full):
        # |c_active| = 1 forces l3 = l4 = 0 (or the B2 analogue), so both
        # sides diverge; such states sit on the surface where the gap is 0.
        _, abs_c = _evolved(_as_standard(s), q)
        if max(abs_c[0], abs_c[1]) >= 1.0 - EDGE_TOL:
            return 0.0
        return math.inf
    return t.full - t.mixed


def mixing_reformulation_check(s: AnyBellState, q: float = 0.0) -> tuple[float, float]:
    """H2(mu || nu) and the same quantity as a four-outcome divergence of the mixed pair."""
    s = _as_standard(s)
    lams, abs_c = _evolved(s, q)
    if Branch.B1 not in _tied(abs_c):
        raise NotApplicableError("mixing reformulation is stated for the |c1| branch")
    x = 0.5 * (1.0 + abs_c[0])
    mu, nu = _mu_nu(x)
    xi_mixed = (x / 2, x / 2, (1 - x) / 2, (1 - x) / 2)
    eta_mixed = ((1 - x) / 2, (1 - x) / 2, x / 2, x / 2)
    return relative_entropy(mu, nu), relative_entropy(xi_mixed, eta_mixed)


# -- brute force --------------------------------------------------------------

DENSITY_TOL = 1e-10
REFINE_CANDIDATES = 4


def _check_density(rho) -> np.ndarray:
    a = as_matrix(rho, (4,))
    if not is_hermitian(a):
        raise NotHermitianError("density matrix is not Hermitian")
    tr = np.trace(a).real
    if abs(tr - 1.0) > DENSITY_TOL:
        raise UnphysicalStateError(f"density matrix has trace {tr!r}")
    ev = hermitian_eigenvalues(a)
    if ev[-1] < -DENSITY_TOL:
        raise UnphysicalStateError(f"density matrix has negative eigenvalue {ev[-1]!r}")
    return np.ascontiguousarray(a)


def _vn_entropy(m) -> float:
    ev = np.clip(hermitian_eigenvalues(m), 0.0, None)
    return shannon_entropy(ev / ev.sum())


def _pattern_search(rho, theta, phi, h, step_theta, step_phi, tol):
    while max(step_theta, step_phi) >= tol:
        moved = False
        for dt, dp in ((step_theta, 0.0), (-step_theta, 0.0), (0.0, step_phi), (0.0, -step_phi)):
            v = kernels.conditional_entropy(rho, theta + dt, phi + dp)
            if v < h:
                theta, phi, h = theta + dt, phi + dp, v
                moved = True
        if not moved:
            step_theta *= 0.5
            step_phi *= 0.5
    return theta, phi, h


@dataclass(frozen=True)
class MeasurementOptimum:
    classical_correlation: float
    theta: float
    phi: float
    conditional_entropy: float


def optimize_measurement(rho, grid_n: int = 48, tol: float = 1e-6) -> MeasurementOptimum:
    """Maximise the classical correlation over projective measurements on A.

    A grid_n x grid_n grid on the upper hemisphere (theta in [0, pi/2],
    phi in [0, 2 pi)) seeds a pattern search that halves its step until
    the step is below ``tol``. Grid ties go to smaller theta, then smaller
    phi.
    """
    if grid_n < 2:
        raise ValueError("grid_n must be >= 2")
    rho = _check_density(rho)
    thetas = np.linspace(0.0, 0.5 * math.pi, grid_n)
    phis = 2.0 * math.pi * np.arange(grid_n) / grid_n
    grid = kernels.conditional_entropy_grid(rho, thetas, phis)
    order = np.argsort(grid, axis=None, kind="stable")[:REFINE_CANDIDATES]
    step_theta = thetas[1] - thetas[0]
    step_phi = phis[1] - phis[0]
    best = None
    for flat in order:
        i, j = divmod(int(flat), grid_n)
        cand = _pattern_search(rho, thetas[i], phis[j], grid[i, j], step_theta, step_phi, tol)
        if best is None or cand[2] < best[2]:
            best = cand
    theta, phi, h = best
    s_b = _vn_entropy(partial_trace(rho, "B"))
    return MeasurementOptimum(s_b - h, float(theta), float(phi), float(h))


def mutual_information_matrix(rho) -> float:
    rho = _check_density(rho)
    return _vn_entropy(partial_trace(rho, "A")) + _vn_entropy(partial_trace(rho, "B")) - _vn_entropy(rho)


def discord_bruteforce(rho, grid_n: int = 48, tol: float = 1e-6) -> float:
    """I(rho) - max over projective measurements on A of I(Pi_A(rho))."""
    opt = optimize_measurement(rho, grid_n, tol)
    return mutual_information_matrix(rho) - opt.classical_correlation
