"""Freezing of discord under phase damping.

A Bell-diagonal state freezes (dQ/dq = 0 on an initial interval) iff its
spectrum satisfies one of

    CondA:  l1 l4 = l2 l3  and  (l1 - l4)(l2 - l3) > 0
    CondB:  l1 l2 = l3 l4  and  (l1 - l2)(l4 - l3) > 0

CondA freezes on the |c1| branch, CondB on the |c2| branch. Both relations
are preserved by the dephasing flow, so the plateau lasts until the active
correlation falls to |c3|.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .channels import RandomTelegraph, coherence_factor, evolve_spectrum, q_of_t
from .discord import discord_analytic
from .errors import NotApplicableError, NotFrozenError
from .qmath import binary_entropy, relative_entropy
from .states import (
    AnyBellState,
    BellDiagonal,
    ExtendedBellDiagonal,
    Spectrum,
    c_from_lambdas,
    lambdas_from_c,
    standard_equivalent,
)

DEFAULT_TOL = 1e-10


class Condition(str, enum.Enum):
    COND_A = "CondA"
    COND_B = "CondB"
    NONE = "None"

    def __str__(self) -> str:
        return self.value


# descending orderings compatible with each condition's inequality
ORDERINGS = {
    Condition.COND_A: ("l1>l2>l3>l4", "l4>l3>l2>l1", "l3>l4>l1>l2", "l2>l1>l4>l3"),
    Condition.COND_B: ("l1>l4>l3>l2", "l2>l3>l4>l1", "l3>l2>l1>l4", "l4>l1>l2>l3"),
}


@dataclass(frozen=True)
class FreezeReport:
    condition: Condition
    order_class: str
    boundary: bool = False
    frozen_value: float | None = None
    q_transition: float | None = None
    sudden_rate: float | None = None

    @property
    def frozen(self) -> bool:
        return self.condition is not Condition.NONE


def ordering(sp: Spectrum, tol: float = 1e-12) -> str:
    """Descending order of the labelled eigenvalues, '=' joining values within ``tol``."""
    vals = sp.as_tuple()
    idx = sorted(range(4), key=lambda i: (-vals[i], i))
    out = f"l{idx[0] + 1}"
    for prev, cur in zip(idx, idx[1:]):
        out += ("=" if vals[prev] - vals[cur] <= tol else ">") + f"l{cur + 1}"
    return out


def _products(l1, l2, l3, l4):
    # (equality lhs, rhs, inequality) for each condition
    return {
        Condition.COND_A: (l1 * l4, l2 * l3, (l1 - l4) * (l2 - l3)),
        Condition.COND_B: (l1 * l2, l3 * l4, (l1 - l2) * (l4 - l3)),
    }


def check_condition(sp: Spectrum, tol: float = DEFAULT_TOL) -> FreezeReport:
    """Classify a spectrum against CondA / CondB.

    The product equality is tested relative to the larger product; the
    ordering inequality must exceed ``tol``. Spectra that satisfy an
    equality with the inequality in [0, tol] come back as ``NONE`` with
    ``boundary=True``.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    boundary = False
    for cond, (lhs, rhs, ineq) in _products(*sp.as_tuple()).items():
        if abs(lhs - rhs) <= tol * max(lhs, rhs, tol):
            if ineq > tol:
                return FreezeReport(cond, ordering(sp))
            if ineq >= 0.0:
                boundary = True
    return FreezeReport(Condition.NONE, ordering(sp), boundary=boundary)


def condition_mask(lams: np.ndarray, cond: Condition, tol: float = DEFAULT_TOL) -> np.ndarray:
    """Vectorised ``check_condition(...).condition == cond`` over rows of ``lams``."""
    l1, l2, l3, l4 = (lams[..., i] for i in range(4))
    lhs, rhs, ineq = _products(l1, l2, l3, l4)[cond]
    scale = np.maximum(np.maximum(lhs, rhs), tol)
    ok = (np.abs(lhs - rhs) <= tol * scale) & (ineq > tol)
    if cond is Condition.COND_B:
        # CondA takes precedence in check_condition
        ok &= ~condition_mask(lams, Condition.COND_A, tol)
    return ok


def _spectrum(s) -> Spectrum:
    if isinstance(s, Spectrum):
        return s
    if isinstance(s, (BellDiagonal, ExtendedBellDiagonal)):
        return s.spectrum
    raise TypeError(f"expected a state or Spectrum, got {s!r}")


def _require(s, tol: float) -> tuple[Condition, BellDiagonal]:
    rep = check_condition(_spectrum(s), tol)
    if not rep.frozen:
        raise NotFrozenError(f"state does not satisfy a freezing condition ({rep.order_class})")
    if isinstance(s, ExtendedBellDiagonal):
        return rep.condition, standard_equivalent(s)
    if isinstance(s, Spectrum):
        return rep.condition, c_from_lambdas(s)
    return rep.condition, s


def frozen_value(sp, tol: float = DEFAULT_TOL) -> float:
    """Plateau value 1 - h2(l1 + l3)."""
    sp = _spectrum(sp)
    _require(sp, tol)
    return 1.0 - binary_entropy(sp.l1 + sp.l3)


def _active_c(cond: Condition, s: BellDiagonal) -> float:
    return s.c1 if cond is Condition.COND_A else s.c2


def transition_q(s: AnyBellState, tol: float = DEFAULT_TOL) -> float:
    """q at which the active |c1(q)| (CondA) or |c2(q)| (CondB) falls to |c3|."""
    cond, std = _require(s, tol)
    ca = abs(_active_c(cond, std))
    return (ca - abs(std.c3)) / ca


def sudden_change_rate(s: AnyBellState, tol: float = DEFAULT_TOL) -> float:
    """dQ/dq just after the transition: -H4(xi(q_T) || eta(q_T)) / (2 (1 - q_T))."""
    cond, std = _require(s, tol)
    q_t = transition_q(std, tol)
    if q_t >= 1.0:
        raise NotApplicableError("c3 = 0: the plateau lasts until complete dephasing")
    l1, l2, l3, l4 = evolve_spectrum(lambdas_from_c(std), q_t).as_tuple()
    h4 = relative_entropy((l1, l2, l3, l4), (l3, l4, l1, l2))
    return -h4 / (2.0 * (1.0 - q_t))


def analyze(s: AnyBellState, tol: float = DEFAULT_TOL) -> FreezeReport:
    """Full report: condition, ordering, plateau value, q_T and post-transition rate."""
    rep = check_condition(_spectrum(s), tol)
    if not rep.frozen:
        return rep
    q_t = transition_q(s, tol)
    rate = sudden_change_rate(s, tol) if q_t < 1.0 else None
    return FreezeReport(rep.condition, rep.order_class, False, frozen_value(_spectrum(s), tol), q_t, rate)


# -- geometry of the freezing set --------------------------------------------


def surface_spectra(condition: Condition, n: int, tol: float = DEFAULT_TOL) -> np.ndarray:
    """Spectra on the freezing surface of ``condition`` from an n x n grid.

    CondA is parametrised by (l1, l2) with l3 = l1 (1 - l1 - l2) / (l1 + l2);
    CondB by (l1, l3) with l2 = l3 (1 - l1 - l3) / (l1 + l3). Grid values
    are linspace(0, 1, n); only points that pass the strict condition
    survive. Rows are (l1, l2, l3, l4).
    """
    condition = Condition(condition)
    if condition is Condition.NONE:
        raise ValueError("surface sampling needs CondA or CondB")
    if n < 2:
        raise ValueError("n must be >= 2")
    g = np.linspace(0.0, 1.0, n)
    u, v = (a.ravel() for a in np.meshgrid(g, g, indexing="ij"))
    keep = (u + v > 0) & (u + v <= 1.0)
    u, v = u[keep], v[keep]
    if condition is Condition.COND_A:
        solved = u * (1.0 - u - v) / (u + v)
        lams = np.stack([u, v, solved, 1.0 - u - v - solved], axis=-1)
    else:
        solved = v * (1.0 - u - v) / (u + v)
        lams = np.stack([u, solved, v, 1.0 - u - v - solved], axis=-1)
    ok = np.all(lams >= 0.0, axis=-1) & condition_mask(lams, condition, tol)
    return lams[ok]


def sample_surface(condition: Condition, n: int, tol: float = DEFAULT_TOL) -> np.ndarray:
    """Surface points in display coordinates (sqrt l1, sqrt l2, sqrt l3)."""
    return np.sqrt(surface_spectra(condition, n, tol)[:, :3])


class BoundaryCurve(NamedTuple):
    curve_id: int
    condition: Condition
    spectra: np.ndarray  # (m, 4)
    points: np.ndarray  # (m, 3) sqrt coordinates


def _boundary_spectra(curve_id: int, free: np.ndarray) -> np.ndarray:
    r = np.sqrt(free)
    side = r - free  # sqrt(x) - x
    comp = (1.0 - r) ** 2
    if curve_id == 1:  # l1 = l2 = sqrt(l3) - l3
        cols = (side, side, free, comp)
    elif curve_id == 2:  # l3 = l2 = sqrt(l1) - l1
        cols = (free, side, side, comp)
    elif curve_id == 3:  # l1 = (1 - sqrt(l2))^2, l3 = 1 - sqrt(l2) - l1
        cols = (comp, free, side, side)
    elif curve_id == 4:  # l3 = (1 - sqrt(l2))^2, l1 = 1 - sqrt(l2) - l3
        cols = (side, free, comp, side)
    else:
        raise ValueError(f"curve_id must be 1..4, got {curve_id}")
    return np.stack(cols, axis=-1)


def _classify_curve(lams: np.ndarray, tol: float = 1e-10) -> Condition:
    l1, l2, l3, l4 = lams.T
    if np.all(np.abs(l1 * l4 - l2 * l3) <= tol):
        return Condition.COND_A
    if np.all(np.abs(l1 * l2 - l3 * l4) <= tol):
        return Condition.COND_B
    return Condition.NONE


def boundary_curves(n: int) -> list[BoundaryCurve]:
    """The four transition curves, each sampled at n values of its free eigenvalue in [0, 1].

    The condition a curve bounds is determined by evaluating both product
    equalities along it.
    """
    if n < 2:
        raise ValueError("n must be >= 2")
    free = np.linspace(0.0, 1.0, n)
    out = []
    for cid in (1, 2, 3, 4):
        lams = _boundary_spectra(cid, free)
        out.append(BoundaryCurve(cid, _classify_curve(lams), lams, np.sqrt(lams[:, :3])))
    return out


# -- non-Markovian dynamics ---------------------------------------------------


class Direction(str, enum.Enum):
    FREEZE_TO_DECAY = "freeze_to_decay"
    DECAY_TO_FREEZE = "decay_to_freeze"

    def __str__(self) -> str:
        return self.value


class TransitionEvent(NamedTuple):
    t: float
    q: float
    direction: Direction


class Threshold(NamedTuple):
    ratio: float  # |c_active / c3|
    threshold: float  # exp(pi gamma / omega)
    satisfied: bool


def refreeze_threshold(s: AnyBellState, sched: RandomTelegraph, tol: float = DEFAULT_TOL) -> Threshold:
    """Whether |c_active/c3| exceeds exp(pi gamma/omega), the condition for a second plateau.

    The first trough of d(t) is -exp(-pi gamma/omega) at omega t = pi.
    """
    cond, std = _require(s, tol)
    ca, c3 = abs(_active_c(cond, std)), abs(std.c3)
    ratio = math.inf if c3 == 0 else ca / c3
    thr = math.exp(math.pi * sched.gamma / sched.omega)
    return Threshold(ratio, thr, ratio > thr)


def nonmarkovian_transitions(
    s: AnyBellState,
    sched: RandomTelegraph,
    t_max: float,
    dt: float | None = None,
    tol: float = DEFAULT_TOL,
    t_tol: float = 1e-12,
) -> list[TransitionEvent]:
    """Times in [0, t_max] where the plateau is left or re-entered.

    The state is frozen while |d(t)| > |c3 / c_active|. Sign changes of
    |d(t)| - |c3/c_active| are located on a grid of step ``dt`` (default
    one two-hundredth of the oscillation period) and refined by bisection
    to ``t_tol``.
    """
    if not isinstance(sched, RandomTelegraph):
        raise TypeError("non-Markovian analysis needs a RandomTelegraph schedule")
    if not t_max > 0:
        raise ValueError("t_max must be positive")
    cond, std = _require(s, tol)
    ca = abs(_active_c(cond, std))
    level = abs(std.c3) / ca
    if dt is None:
        dt = sched.period / 200.0
    if not dt > 0:
        raise ValueError("dt must be positive")

    def g(t):
        return np.abs(coherence_factor(sched, t)) - level

    n_steps = int(math.ceil(t_max / dt))
    ts = np.minimum(np.arange(n_steps + 1) * dt, t_max)
    frozen = g(ts) > 0.0
    events = []
    for i in np.flatnonzero(frozen[:-1] != frozen[1:]):
        lo, hi = float(ts[i]), float(ts[i + 1])
        lo_frozen = bool(frozen[i])
        for _ in range(200):
            if hi - lo <= t_tol:
                break
            mid = 0.5 * (lo + hi)
            if mid <= lo or mid >= hi:
                break
            if (g(mid) > 0.0) == lo_frozen:
                lo = mid
            else:
                hi = mid
        t = 0.5 * (lo + hi)
        direction = Direction.FREEZE_TO_DECAY if lo_frozen else Direction.DECAY_TO_FREEZE
        events.append(TransitionEvent(t, float(q_of_t(sched, t)), direction))
    return events


def is_frozen_at(s: AnyBellState, q: float, tol: float = 1e-9) -> bool:
    return abs(discord_analytic(s, q) - discord_analytic(s, 0.0)) <= tol
