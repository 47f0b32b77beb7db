"""Local phase damping and the time -> q schedules.

Dephasing multiplies the single-qubit coherence by ``d = 1 - q``. Under a
Markovian environment ``q`` runs monotonically over [0, 1]; under random
telegraph noise ``d`` oscillates in sign, so ``q`` lives in [0, 2].
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Union

import numpy as np

from .errors import SpecParseError, UnsupportedRegimeError
from .qmath import as_matrix, check_hermitian
from .states import BellDiagonal, ExtendedBellDiagonal, Spectrum, parse_key_values

Q_MIN = 0.0
Q_MAX = 2.0


def _check_q(q: float) -> float:
    q = float(q)
    # p = (1 - d) / 2 = q / 2 must be a probability
    if not (Q_MIN <= q <= Q_MAX):
        raise ValueError(f"q = {q!r} outside [0, 2]; the dephasing map is not CPTP there")
    return q


def dephase_qubit(rho, q: float) -> np.ndarray:
    q = _check_q(q)
    a = check_hermitian(as_matrix(rho, (2,))).copy()
    d = 1.0 - q
    a[0, 1] *= d
    a[1, 0] *= d
    return a


def dephase_subsystem(rho, q: float, side: str = "A") -> np.ndarray:
    """Apply single-qubit dephasing to one side of a two-qubit density matrix."""
    q = _check_q(q)
    a = check_hermitian(as_matrix(rho, (4,)))
    d = 1.0 - q
    r = a.reshape(2, 2, 2, 2).copy()
    side = side.upper()
    if side == "A":
        r[0, :, 1, :] *= d
        r[1, :, 0, :] *= d
    elif side == "B":
        r[:, 0, :, 1] *= d
        r[:, 1, :, 0] *= d
    else:
        raise ValueError(f"side must be 'A' or 'B', not {side!r}")
    return r.reshape(4, 4)


def apply_local_dephasing(s: BellDiagonal, q: float) -> BellDiagonal:
    """c1, c2 scale by (1 - q); c3 is untouched. Either side gives the same state."""
    d = 1.0 - _check_q(q)
    return BellDiagonal(d * s.c1, d * s.c2, s.c3)


def apply_local_dephasing_extended(s: ExtendedBellDiagonal, q: float) -> ExtendedBellDiagonal:
    d = 1.0 - _check_q(q)
    return ExtendedBellDiagonal(d * s.c11, d * s.c12, d * s.c21, d * s.c22, s.c33)


def evolve_spectrum(sp: Spectrum, q: float) -> Spectrum:
    q = _check_q(q)
    l1, l2, l3, l4 = sp.as_tuple()
    h13 = 0.5 * q * (l3 - l1)
    h24 = 0.5 * q * (l4 - l2)
    return Spectrum._unchecked(l1 + h13, l2 + h24, l3 - h13, l4 - h24)


def evolve_spectrum_array(lams, qs) -> np.ndarray:
    """Vectorised spectrum flow: shape (..., 4) x q-grid -> (n_q, ..., 4)."""
    lams = np.asarray(lams, dtype=float)
    qs = np.asarray(qs, dtype=float).reshape((-1,) + (1,) * (lams.ndim - 1))
    l1, l2, l3, l4 = (lams[..., i] for i in range(4))
    h13 = 0.5 * qs * (l3 - l1)
    h24 = 0.5 * qs * (l4 - l2)
    return np.stack([l1 + h13, l2 + h24, l3 - h13, l4 - h24], axis=-1)


@dataclass(frozen=True)
class Markovian:
    gamma: float

    def __post_init__(self):
        if not (self.gamma > 0 and math.isfinite(self.gamma)):
            raise ValueError(f"gamma must be positive, got {self.gamma!r}")

    @property
    def time_unit(self) -> float:
        return 1.0 / self.gamma


@dataclass(frozen=True)
class RandomTelegraph:
    """Random telegraph noise with coupling ``a`` and switching rate ``gamma``.

    Only the underdamped regime 2a > gamma is supported.
    """

    a: float
    gamma: float

    def __post_init__(self):
        if not (self.a > 0 and self.gamma > 0 and math.isfinite(self.a) and math.isfinite(self.gamma)):
            raise ValueError(f"rates must be positive, got a={self.a!r}, gamma={self.gamma!r}")
        if 2.0 * self.a <= self.gamma:
            raise UnsupportedRegimeError(
                f"overdamped telegraph noise (2a = {2 * self.a!r} <= gamma = {self.gamma!r}) is not supported"
            )

    @property
    def omega(self) -> float:
        return math.sqrt(4.0 * self.a * self.a - self.gamma * self.gamma)

    @property
    def period(self) -> float:
        return 2.0 * math.pi / self.omega

    @property
    def time_unit(self) -> float:
        return 1.0 / self.gamma

    @classmethod
    def from_ratio(cls, gamma_over_omega: float, omega: float = 1.0) -> "RandomTelegraph":
        gamma = gamma_over_omega * omega
        return cls(a=0.5 * math.hypot(omega, gamma), gamma=gamma)


NoiseSchedule = Union[Markovian, RandomTelegraph]


def coherence_factor(sched: NoiseSchedule, t):
    """d(t) for scalar or array t."""
    t_arr = np.asarray(t, dtype=float)
    if np.any(t_arr < 0):
        raise ValueError("t must be non-negative")
    if isinstance(sched, Markovian):
        d = np.exp(-sched.gamma * t_arr)
    elif isinstance(sched, RandomTelegraph):
        w = sched.omega
        d = np.exp(-sched.gamma * t_arr) * (np.cos(w * t_arr) + (sched.gamma / w) * np.sin(w * t_arr))
    else:
        raise TypeError(f"unknown schedule {sched!r}")
    return float(d) if d.ndim == 0 else d


def q_of_t(sched: NoiseSchedule, t):
    d = coherence_factor(sched, t)
    return 1.0 - d


def parse_schedule(text: str) -> NoiseSchedule:
    """``markovian:gamma=<v>`` or ``rtn:a=<v>,gamma=<v>``."""
    kind, sep, rest = text.strip().partition(":")
    kind = kind.strip().lower()
    if not sep:
        raise SpecParseError(f"schedule spec needs 'kind:params', got {text!r}")
    kv = parse_key_values(rest)
    try:
        if kind == "markovian" and set(kv) == {"gamma"}:
            return Markovian(kv["gamma"])
        if kind == "rtn" and set(kv) == {"a", "gamma"}:
            return RandomTelegraph(kv["a"], kv["gamma"])
    except UnsupportedRegimeError:
        raise
    except ValueError as exc:
        raise SpecParseError(str(exc)) from exc
    raise SpecParseError(f"unrecognised schedule spec {text!r}")
