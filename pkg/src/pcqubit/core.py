"""Physical parameters and closed algebraic helpers.

Units are hbar = e = 1 throughout: energies and rates share one unit and
time is measured in its inverse.  The detector enters only through the two
tunnelling rates ``d1`` (dot 1 occupied, far from the point contact) and
``d2`` (dot 2 occupied, near the point contact), with ``d1 >= d2``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

from .errors import DegenerateQubitError

POSITIVITY_TOL = 1e-9


@dataclass(frozen=True)
class SystemParams:
    """Qubit and detector constants.

    Parameters
    ----------
    omega : float
        Inter-dot coupling, >= 0.
    epsilon : float
        Level detuning E2 - E1.
    d1, d2 : float
        Detector rates with dot 1 / dot 2 occupied; ``d1 > 0`` and
        ``0 <= d2 <= d1``.
    """

    omega: float
    epsilon: float
    d1: float
    d2: float

    def __post_init__(self):
        for name in ("omega", "epsilon", "d1", "d2"):
            value = float(getattr(self, name))
            if not math.isfinite(value):
                raise ValueError(f"{name} must be finite, got {value!r}")
            object.__setattr__(self, name, value)
        if self.omega < 0:
            raise ValueError(f"omega must be >= 0, got {self.omega}")
        if self.d1 <= 0:
            raise ValueError(f"d1 must be > 0, got {self.d1}")
        if self.d2 < 0:
            raise ValueError(f"d2 must be >= 0, got {self.d2}")
        if self.d2 > self.d1:
            raise ValueError(
                f"d2={self.d2} exceeds d1={self.d1}; the convention is D1 >= D2 "
                "(current drops when the dot near the point contact is occupied)"
            )

    @classmethod
    def from_decoherence(cls, omega: float, gamma_d: float, d_mean: float,
                         epsilon: float = 0.0) -> "SystemParams":
        """Build parameters from a target decoherence rate and mean rate D.

        Solves ``(sqrt(d1) - sqrt(d2))**2 = gamma_d`` and
        ``(d1 + d2) / 2 = d_mean``; requires ``0 <= gamma_d <= 2 * d_mean``.
        """
        if d_mean <= 0:
            raise ValueError("d_mean must be > 0")
        if not 0 <= gamma_d <= 2 * d_mean:
            raise ValueError("need 0 <= gamma_d <= 2*d_mean")
        diff = math.sqrt(gamma_d)
        total = math.sqrt(4 * d_mean - gamma_d)
        a, b = (total + diff) / 2, (total - diff) / 2
        return cls(omega=omega, epsilon=epsilon, d1=a * a, d2=max(b * b, 0.0))

    @property
    def rates(self) -> "DerivedRates":
        return derive_rates(self)


class DerivedRates(NamedTuple):
    gamma_d: float
    delta_d: float
    d_mean: float


@dataclass(frozen=True)
class QubitState:
    """Reduced qubit density matrix, stored as (sigma11, sigma12).

    sigma22 = 1 - sigma11 and sigma21 = conj(sigma12) are implied.
    """

    sigma11: float = 1.0
    sigma12: complex = 0j

    def __post_init__(self):
        s11 = float(self.sigma11)
        s12 = complex(self.sigma12)
        object.__setattr__(self, "sigma11", s11)
        object.__setattr__(self, "sigma12", s12)
        if not (-POSITIVITY_TOL <= s11 <= 1 + POSITIVITY_TOL):
            raise ValueError(f"sigma11 must lie in [0, 1], got {s11}")
        if abs(s12) ** 2 > s11 * (1 - s11) + POSITIVITY_TOL:
            raise ValueError(
                f"|sigma12|^2 = {abs(s12) ** 2:.3g} exceeds sigma11*sigma22 = "
                f"{s11 * (1 - s11):.3g}; state is not positive"
            )

    @property
    def sigma22(self) -> float:
        return 1.0 - self.sigma11


def derive_rates(p: SystemParams) -> DerivedRates:
    # (sqrt(d1) - sqrt(d2))^2 without the cancellation when d1 ~ d2
    gamma_d = (p.d1 - p.d2) ** 2 / (math.sqrt(p.d1) + math.sqrt(p.d2)) ** 2
    return DerivedRates(gamma_d=gamma_d, delta_d=p.d1 - p.d2, d_mean=(p.d1 + p.d2) / 2)


def rates_from_microscopic(omega_bar, omega_bar_prime, rho_l, rho_r, v):
    """Detector rates ``(d1, d2)`` from barrier amplitudes, densities of states and bias.

    The transmission probability of the barrier is ``(2 pi)^2 |amp|^2 rho_l rho_r``
    and the rate is transmission times bias.
    """
    for name, value in (("omega_bar", omega_bar), ("omega_bar_prime", omega_bar_prime),
                        ("rho_l", rho_l), ("rho_r", rho_r), ("v", v)):
        if value < 0:
            raise ValueError(f"{name} must be >= 0, got {value}")
    factor = (2 * math.pi) ** 2 * rho_l * rho_r * v
    return factor * omega_bar ** 2, factor * omega_bar_prime ** 2


class RabiFrequency(NamedTuple):
    regime: str  # "underdamped" | "critical" | "overdamped"
    rate: float


def rabi_frequency(p: SystemParams) -> RabiFrequency:
    """Damped Rabi frequency of the aligned-level qubit.

    Below the critical point ``gamma_d = 8 omega`` this is
    ``2 omega sqrt(1 - (gamma_d / 8 omega)^2)``.  Above it the same expression
    is continued to the real decay-rate splitting ``kappa``; at the critical
    point the rate is 0.
    """
    if p.omega == 0:
        raise DegenerateQubitError("omega = 0: static qubit, no Rabi oscillation")
    x = derive_rates(p).gamma_d / (8 * p.omega)
    if x < 1:
        return RabiFrequency("underdamped", 2 * p.omega * math.sqrt(1 - x * x))
    if x > 1:
        return RabiFrequency("overdamped", 2 * p.omega * math.sqrt(x * x - 1))
    return RabiFrequency("critical", 0.0)
