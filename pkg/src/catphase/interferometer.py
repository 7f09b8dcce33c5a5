"""Mach-Zehnder input/output relations and the phase-to-displacement map.

Port 1 carries the classical carrier, port 2 (the dark port) carries the
quantum probe. With ``d = M a`` for the two output annihilation operators,
a small signal phase turns into a displacement of the dark-port field by
``i B phi``, i.e. the unitary ``exp(i delta (a^dag + a))`` with ``delta = B phi``.
"""
from __future__ import annotations

import enum
import math
import warnings
from dataclasses import dataclass, replace
from typing import NamedTuple, Optional

import numpy as np

from . import fock
from .errors import InvalidArgumentError, PhaseRangeError

__all__ = [
    "Topology",
    "IfoConfig",
    "Displacement",
    "SmallPhaseWarning",
    "PHI_MAX",
    "PHI_WARN",
    "transfer_matrix",
    "propagate_classical",
    "with_signal",
    "dark_port_amplitude",
    "displacement_of",
    "end_to_end_state",
]

#: Hard validity limit on |phi| for the linearized model.
PHI_MAX = 0.1
#: Above this |phi| the quadratic linearization error is flagged.
PHI_WARN = 0.01

_UNIT_TOL = 1e-12
_BALANCED = 1.0 / math.sqrt(2.0)


class SmallPhaseWarning(UserWarning):
    """The phase is inside the hard limit but large enough to spoil linearization."""


class Topology(enum.Enum):
    ASYMMETRIC = "asym"
    ANTISYMMETRIC = "antisym"
    GENERAL = "general"


@dataclass(frozen=True)
class IfoConfig:
    """Beamsplitter amplitudes, arm phases and carrier amplitude.

    ``carrier_amplitude`` is the square root of the input carrier photon number.
    """

    reflectivity: float
    transmissivity: float
    carrier_amplitude: float
    phi1: float = 0.0
    phi2: float = 0.0
    topology: Topology = Topology.GENERAL

    def __post_init__(self):
        R, T = float(self.reflectivity), float(self.transmissivity)
        if not (0.0 <= R <= 1.0 and 0.0 <= T <= 1.0):
            raise InvalidArgumentError(f"R and T must lie in [0, 1], got R={R}, T={T}")
        if abs(R * R + T * T - 1.0) > _UNIT_TOL:
            raise InvalidArgumentError(f"R^2 + T^2 must equal 1, got {R * R + T * T!r}")
        if not (self.carrier_amplitude > 0 and math.isfinite(self.carrier_amplitude)):
            raise InvalidArgumentError("carrier amplitude must be positive")
        if not (math.isfinite(self.phi1) and math.isfinite(self.phi2)):
            raise InvalidArgumentError("arm phases must be finite")
        topo = Topology(self.topology)
        object.__setattr__(self, "topology", topo)
        if topo is Topology.ANTISYMMETRIC:
            if abs(R - _BALANCED) > _UNIT_TOL or abs(T - _BALANCED) > _UNIT_TOL:
                raise InvalidArgumentError("antisymmetric topology needs R = T = 1/sqrt(2)")
            if self.phi1 != -self.phi2:
                raise InvalidArgumentError("antisymmetric topology needs phi1 = -phi2")

    @classmethod
    def asymmetric(cls, transmissivity: float, carrier_amplitude: float) -> "IfoConfig":
        T = float(transmissivity)
        return cls(math.sqrt(1.0 - T * T), T, carrier_amplitude, topology=Topology.ASYMMETRIC)

    @classmethod
    def antisymmetric(cls, carrier_amplitude: float) -> "IfoConfig":
        return cls(_BALANCED, _BALANCED, carrier_amplitude, topology=Topology.ANTISYMMETRIC)


class Displacement(NamedTuple):
    B: float
    delta: float

    @property
    def n_photons(self) -> float:
        """Carrier photons that interacted with the phase shift, ``N = B^2``."""
        return self.B * self.B


def transfer_matrix(config: IfoConfig) -> np.ndarray:
    """2x2 unitary mapping input to output annihilation operators."""
    R, T = config.reflectivity, config.transmissivity
    e1, e2 = np.exp(-1j * config.phi1), np.exp(-1j * config.phi2)
    cross = R * T * (e2 - e1)
    return np.array([[T * T * e1 + R * R * e2, cross],
                     [cross, R * R * e1 + T * T * e2]])


def propagate_classical(config: IfoConfig, a1: complex, a2: complex) -> tuple[complex, complex]:
    """Output classical amplitudes ``(d1, d2)`` for input amplitudes ``(a1, a2)``."""
    d = transfer_matrix(config) @ np.array([a1, a2], dtype=complex)
    return complex(d[0]), complex(d[1])


def _check_phi(phi: float) -> None:
    if not math.isfinite(phi) or abs(phi) > PHI_MAX:
        raise PhaseRangeError(f"|phi| must be <= {PHI_MAX}, got {phi!r}")
    if abs(phi) > PHI_WARN:
        warnings.warn(f"|phi|={abs(phi):g} exceeds {PHI_WARN}; linearization error grows as phi^2",
                      SmallPhaseWarning, stacklevel=3)


def with_signal(config: IfoConfig, phi: float) -> IfoConfig:
    """Place a signal phase in the arms as the topology prescribes.

    Asymmetric: ``(phi, 0)``; antisymmetric: ``(phi, -phi)``. A general
    configuration already carries its arm phases and is returned unchanged.
    """
    if config.topology is Topology.ASYMMETRIC:
        return replace(config, phi1=phi, phi2=0.0)
    if config.topology is Topology.ANTISYMMETRIC:
        return replace(config, phi1=phi, phi2=-phi)
    return config


def dark_port_amplitude(config: IfoConfig, phi: Optional[float] = None) -> complex:
    """Exact classical field at the dark output when only the carrier is injected."""
    if phi is not None:
        config = with_signal(config, phi)
    return propagate_classical(config, config.carrier_amplitude, 0.0)[1]


def displacement_of(config: IfoConfig, phi: Optional[float] = None) -> Displacement:
    """Linearized displacement produced by a signal phase.

    Asymmetric: ``B = T A``. Antisymmetric: ``B = A``. In both cases
    ``delta = B phi``.

    General topology has no single signal phase; ``phi`` must be omitted and
    the arm phases of ``config`` are used. The result is ``B = R T A`` and
    ``delta = R T A (phi1 - phi2)``, the imaginary part of the linearized
    dark-port amplitude.
    """
    A = config.carrier_amplitude
    if config.topology is Topology.GENERAL:
        if phi is not None:
            raise InvalidArgumentError("general topology takes its phases from the config; omit phi")
        _check_phi(config.phi1)
        _check_phi(config.phi2)
        B = config.reflectivity * config.transmissivity * A
        return Displacement(B, B * (config.phi1 - config.phi2))
    if phi is None:
        raise InvalidArgumentError(f"{config.topology.value} topology needs a signal phase")
    _check_phi(phi)
    if config.topology is Topology.ASYMMETRIC:
        B = config.transmissivity * A
    else:
        B = A
    return Displacement(B, B * phi)


def end_to_end_state(config: IfoConfig, alpha: float, phi: Optional[float],
                     policy: fock.TruncationPolicy) -> fock.FockVector:
    """Dark-port output state for a cat-state probe of amplitude ``alpha``."""
    delta = displacement_of(config, phi).delta
    return fock.displace(fock.cat_state(alpha, policy), delta, policy)
