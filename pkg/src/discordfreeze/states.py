"""Bell-diagonal state families and their spectral representations.

Eigenvalue labels follow the fixed Bell basis, never sorted order::

    |psi_1>, |psi_3> = (|00> +- |11>)/sqrt(2)
    |psi_2>, |psi_4> = (|01> +- |10>)/sqrt(2)

The freezing conditions are label sensitive, so every function here keeps
that order.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Union

import numpy as np

from .errors import SpecParseError, UnphysicalStateError
from .qmath import I4, SIGMA_X, SIGMA_Y, SIGMA_Z, kron

PHYS_TOL = 1e-12
SUM_TOL = 1e-12

_XX = kron(SIGMA_X, SIGMA_X)
_XY = kron(SIGMA_X, SIGMA_Y)
_YX = kron(SIGMA_Y, SIGMA_X)
_YY = kron(SIGMA_Y, SIGMA_Y)
_ZZ = kron(SIGMA_Z, SIGMA_Z)


def _checked_eigenvalues(values, what: str) -> tuple[float, float, float, float]:
    vals = [float(v) for v in values]
    if not all(math.isfinite(v) for v in vals):
        raise UnphysicalStateError(f"{what}: non-finite parameter")
    worst = min(vals)
    if worst < -PHYS_TOL:
        raise UnphysicalStateError(f"{what}: eigenvalue {worst!r} < 0")
    return tuple(max(v, 0.0) for v in vals)  # type: ignore[return-value]


@dataclass(frozen=True)
class Spectrum:
    """Bell-basis eigenvalues (l1, l2, l3, l4)."""

    l1: float
    l2: float
    l3: float
    l4: float

    def __post_init__(self):
        vals = _checked_eigenvalues((self.l1, self.l2, self.l3, self.l4), "spectrum")
        total = sum(vals)
        if abs(total - 1.0) > SUM_TOL:
            raise UnphysicalStateError(f"spectrum sums to {total!r}, expected 1")
        for name, v in zip(("l1", "l2", "l3", "l4"), vals):
            object.__setattr__(self, name, v)

    def as_tuple(self) -> tuple[float, float, float, float]:
        return (self.l1, self.l2, self.l3, self.l4)

    def as_array(self) -> np.ndarray:
        return np.array(self.as_tuple())

    @classmethod
    def _unchecked(cls, l1, l2, l3, l4) -> "Spectrum":
        # internal constructor for values already known to be physical
        obj = object.__new__(cls)
        for name, v in zip(("l1", "l2", "l3", "l4"), (l1, l2, l3, l4)):
            object.__setattr__(obj, name, max(float(v), 0.0))
        return obj


def _lambdas(c1: float, c2: float, c3: float) -> tuple[float, float, float, float]:
    return (
        (1 + c1 - c2 + c3) / 4,
        (1 + c1 + c2 - c3) / 4,
        (1 - c1 + c2 + c3) / 4,
        (1 - c1 - c2 - c3) / 4,
    )


@dataclass(frozen=True)
class BellDiagonal:
    """rho = (I + sum_i c_i sigma_i (x) sigma_i) / 4."""

    c1: float
    c2: float
    c3: float

    def __post_init__(self):
        for name in ("c1", "c2", "c3"):
            object.__setattr__(self, name, float(getattr(self, name)))
        _checked_eigenvalues(_lambdas(self.c1, self.c2, self.c3), f"BellDiagonal{self.cs}")

    @property
    def cs(self) -> tuple[float, float, float]:
        return (self.c1, self.c2, self.c3)

    @property
    def spectrum(self) -> Spectrum:
        return lambdas_from_c(self)


@dataclass(frozen=True)
class ExtendedBellDiagonal:
    """rho = (I + sum c_ij sigma_i (x) sigma_j) / 4 with only c11, c12, c21, c22, c33 nonzero."""

    c11: float
    c12: float
    c21: float
    c22: float
    c33: float

    def __post_init__(self):
        for name in ("c11", "c12", "c21", "c22", "c33"):
            object.__setattr__(self, name, float(getattr(self, name)))
        _checked_eigenvalues(_extended_lambdas(self), f"ExtendedBellDiagonal{self.cs}")

    @property
    def cs(self) -> tuple[float, float, float, float, float]:
        return (self.c11, self.c12, self.c21, self.c22, self.c33)

    @property
    def coherence_plus(self) -> float:
        """|c11 - c22, c12 + c21|, four times |<00|rho|11>|."""
        return math.hypot(self.c11 - self.c22, self.c12 + self.c21)

    @property
    def coherence_minus(self) -> float:
        """|c11 + c22, c12 - c21|, four times |<01|rho|10>|."""
        return math.hypot(self.c11 + self.c22, self.c12 - self.c21)

    @property
    def spectrum(self) -> Spectrum:
        return extended_eigensystem(self)[0]

    def singular_correlations(self) -> tuple[float, float]:
        """Singular values of the transverse correlation block, largest first."""
        rp, rm = self.coherence_plus, self.coherence_minus
        return (0.5 * (rp + rm), 0.5 * abs(rp - rm))


AnyBellState = Union[BellDiagonal, ExtendedBellDiagonal]


def _extended_lambdas(s: ExtendedBellDiagonal) -> tuple[float, float, float, float]:
    rp, rm = s.coherence_plus, s.coherence_minus
    return (
        (1 + rp + s.c33) / 4,
        (1 + rm - s.c33) / 4,
        (1 - rp + s.c33) / 4,
        (1 - rm - s.c33) / 4,
    )


def lambdas_from_c(s: BellDiagonal) -> Spectrum:
    vals = _checked_eigenvalues(_lambdas(s.c1, s.c2, s.c3), "BellDiagonal")
    return Spectrum._unchecked(*vals)


def c_from_lambdas(sp: Spectrum) -> BellDiagonal:
    l1, l2, l3, l4 = sp.as_tuple()
    return BellDiagonal(l1 + l2 - l3 - l4, -l1 + l2 + l3 - l4, l1 + l3 - l2 - l4)


def extended_eigensystem(s: ExtendedBellDiagonal) -> tuple[Spectrum, float, float]:
    """Eigenvalues and eigenvector phases of an extended Bell-diagonal state.

    The phases are the arguments of the coherences <00|rho|11> and
    <01|rho|10>, so that (|00> +- e^{-i phi_plus}|11>)/sqrt(2) and
    (|01> +- e^{-i phi_minus}|10>)/sqrt(2) are eigenvectors with eigenvalues
    l1, l3 and l2, l4. A vanishing coherence gives phase 0.
    """
    vals = _checked_eigenvalues(_extended_lambdas(s), "ExtendedBellDiagonal")
    phi_plus = math.atan2(-(s.c12 + s.c21), s.c11 - s.c22) + 0.0
    phi_minus = math.atan2(s.c12 - s.c21, s.c11 + s.c22) + 0.0
    return Spectrum._unchecked(*vals), phi_plus, phi_minus


def standard_equivalent(s: ExtendedBellDiagonal) -> BellDiagonal:
    """The standard state with the same Bell-basis spectrum.

    The two are related by local rotations about z, which commute with
    dephasing.
    """
    rp, rm = s.coherence_plus, s.coherence_minus
    return BellDiagonal(0.5 * (rp + rm), 0.5 * (rm - rp), s.c33)


def to_density_matrix(s: AnyBellState) -> np.ndarray:
    if isinstance(s, BellDiagonal):
        rho = I4 + s.c1 * _XX + s.c2 * _YY + s.c3 * _ZZ
    elif isinstance(s, ExtendedBellDiagonal):
        rho = I4 + s.c11 * _XX + s.c12 * _XY + s.c21 * _YX + s.c22 * _YY + s.c33 * _ZZ
    else:
        raise TypeError(f"not a Bell-diagonal state: {s!r}")
    return rho / 4


def bell_basis() -> np.ndarray:
    """Columns |psi_1> .. |psi_4> in the computational basis."""
    r = 1 / math.sqrt(2)
    return np.array(
        [
            [r, 0, r, 0],
            [0, r, 0, r],
            [0, r, 0, -r],
            [r, 0, -r, 0],
        ],
        dtype=np.complex128,
    )


_STANDARD_KEYS = ("c1", "c2", "c3")
_SPECTRUM_KEYS = ("l1", "l2", "l3", "l4")
_EXTENDED_KEYS = ("c11", "c12", "c21", "c22", "c33")


def parse_number(text: str) -> float:
    """Parse a decimal or rational literal such as ``0.75`` or ``3/16``."""
    try:
        return float(Fraction(text.strip()))
    except (ValueError, ZeroDivisionError) as exc:
        raise SpecParseError(f"not a number: {text!r}") from exc


def parse_key_values(text: str) -> dict[str, float]:
    out: dict[str, float] = {}
    for item in text.split(","):
        item = item.strip()
        if not item:
            continue
        key, sep, value = item.partition("=")
        key = key.strip().lower()
        if not sep or not key:
            raise SpecParseError(f"expected key=value, got {item!r}")
        if key in out:
            raise SpecParseError(f"duplicate key {key!r}")
        out[key] = parse_number(value)
    return out


def parse_state(text: str) -> AnyBellState:
    """Parse ``c1=..,c2=..,c3=..``, ``l1=..,..,l4=..`` or ``c11=..,..,c33=..``.

    Raises SpecParseError for malformed text and UnphysicalStateError for a
    well-formed but unphysical state.
    """
    kv = parse_key_values(text)
    keys = set(kv)
    for family in (_STANDARD_KEYS, _SPECTRUM_KEYS, _EXTENDED_KEYS):
        if keys == set(family):
            values = [kv[k] for k in family]
            if family is _STANDARD_KEYS:
                return BellDiagonal(*values)
            if family is _SPECTRUM_KEYS:
                return c_from_lambdas(Spectrum(*values))
            return ExtendedBellDiagonal(*values)
    raise SpecParseError(
        f"state spec must give exactly one of {{c1,c2,c3}}, {{l1,l2,l3,l4}} or "
        f"{{c11,c12,c21,c22,c33}}; got {sorted(keys)}"
    )
