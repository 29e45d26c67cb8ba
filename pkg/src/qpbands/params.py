"""Energy scales, couplings and the maps between parameterizations.

Three equivalent descriptions of one metamaterial are supported:

* physical device data (critical current, junction capacitance, geometry),
* the energy scales ``E_J``, ``E_C``, ``E_em``,
* the dimensionless pair ``(beta, gamma)`` with ``beta = sqrt(E_em/E_J)`` and
  ``gamma = E_C/E_J``.

Everything downstream works with :class:`NormalizedParams`, i.e. energies in
units of twice the photon hopping ``2J``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

from qpbands.errors import DomainError

# Gaussian-CGS constants
ELEMENTARY_CHARGE = 4.803204712570263e-10  # statC
PLANCK = 6.62607015e-27  # erg s
SPEED_OF_LIGHT = 2.99792458e10  # cm/s
FLUX_QUANTUM = PLANCK * SPEED_OF_LIGHT / (2.0 * ELEMENTARY_CHARGE)  # statWb

ENERGY_UNIT = "erg"


def _require_positive(**values):
    for name, value in values.items():
        if not (value > 0.0 and math.isfinite(value)):
            raise DomainError(f"{name} must be finite and > 0, got {value!r}")


@dataclass(frozen=True)
class PhysicalParams:
    """Device data in Gaussian-CGS units.

    critical_current in statampere, junction_capacitance and the two lengths
    in cm.
    """

    critical_current: float
    junction_capacitance: float
    cell_period: float
    stripe_separation: float

    def __post_init__(self):
        _require_positive(
            critical_current=self.critical_current,
            junction_capacitance=self.junction_capacitance,
            cell_period=self.cell_period,
            stripe_separation=self.stripe_separation,
        )


@dataclass(frozen=True)
class EnergyScales:
    e_josephson: float
    e_charging: float
    e_em: float

    def __post_init__(self):
        _require_positive(
            e_josephson=self.e_josephson,
            e_charging=self.e_charging,
            e_em=self.e_em,
        )


@dataclass(frozen=True)
class DimensionlessParams:
    """The two knobs of the model: ``beta = sqrt(E_em/E_J)``, ``gamma = E_C/E_J``."""

    beta: float
    gamma: float

    def __post_init__(self):
        _require_positive(beta=self.beta, gamma=self.gamma)


@dataclass(frozen=True)
class DerivedParams:
    """Couplings of the quantized Hamiltonian, same energy unit as the input."""

    photon_quantum: float
    hopping: float
    attractive: float
    repulsive: float
    splitting: float
    qubit_eps: float
    mixing_angle: float


@dataclass(frozen=True)
class NormalizedParams:
    """Couplings in units of ``2J``.

    ``a`` and ``b`` may be zero so that reference limits (no repulsion, free
    system) can be built with :func:`dataclasses.replace`.
    """

    a: float
    b: float
    delta: float
    homega_over_2J: float = field(default=float("nan"), compare=False)

    def __post_init__(self):
        for name in ("a", "b"):
            value = getattr(self, name)
            if not (value >= 0.0 and math.isfinite(value)):
                raise DomainError(f"{name} must be finite and >= 0, got {value!r}")
        _require_positive(delta=self.delta)


@dataclass(frozen=True)
class ConsistencyReport:
    residuals: dict
    max_residual: float


def normalized_from_dimensionless(p: DimensionlessParams) -> NormalizedParams:
    """Closed-form normalized couplings as functions of ``beta`` and ``gamma``."""
    beta, gamma = p.beta, p.gamma
    root = math.sqrt(1.0 + gamma * gamma)
    a = 1.0 / (4.0 * beta**2 * root)
    b = gamma * a / 2.0
    homega = 2.0 + 1.0 / (2.0 * beta**2 * root)
    delta = 2.0 * math.sqrt(
        2.0 * (1.0 + gamma * gamma) / (gamma * beta**2) + root / (2.0 * gamma * beta**4)
    )
    return NormalizedParams(a=a, b=b, delta=delta, homega_over_2J=homega)


def energies_from_dimensionless(p: DimensionlessParams, e_josephson_scale: float) -> EnergyScales:
    _require_positive(e_josephson_scale=e_josephson_scale)
    return EnergyScales(
        e_josephson=e_josephson_scale,
        e_charging=p.gamma * e_josephson_scale,
        e_em=p.beta**2 * e_josephson_scale,
    )


def dimensionless_from_energies(e: EnergyScales) -> DimensionlessParams:
    return DimensionlessParams(
        beta=math.sqrt(e.e_em / e.e_josephson),
        gamma=e.e_charging / e.e_josephson,
    )


def derived_from_energies(e: EnergyScales) -> DerivedParams:
    """Photon quantum, hopping and the two interaction strengths.

    The mixing angle follows the qubit eigenbasis rotation:
    ``sin(eta) = -E_J/eps`` and ``cos(eta) = E_C/eps``.
    """
    ej, ec, eem = e.e_josephson, e.e_charging, e.e_em
    eps = math.hypot(ej, ec)
    homega = math.sqrt(2.0 * eem * ec + ec * ej**2 / (2.0 * eps))
    return DerivedParams(
        photon_quantum=homega,
        hopping=eem * ec / (2.0 * homega),
        attractive=ej**2 * ec / (4.0 * homega * eps),
        repulsive=ej * ec**2 / (8.0 * homega * eps),
        splitting=2.0 * eps,
        qubit_eps=eps,
        mixing_angle=math.atan2(-ej, ec),
    )


def normalized_from_derived(d: DerivedParams) -> NormalizedParams:
    two_j = 2.0 * d.hopping
    return NormalizedParams(
        a=d.attractive / two_j,
        b=d.repulsive / two_j,
        delta=d.splitting / two_j,
        homega_over_2J=d.photon_quantum / two_j,
    )


def physical_to_energies(p: PhysicalParams) -> EnergyScales:
    """Energy scales in erg from device data (Gaussian-CGS)."""
    e_charging = 2.0 * ELEMENTARY_CHARGE**2 / p.junction_capacitance
    e_josephson = FLUX_QUANTUM * p.critical_current / (2.0 * math.pi * SPEED_OF_LIGHT)
    e_em = (FLUX_QUANTUM / (2.0 * math.pi)) ** 2 / (8.0 * math.pi * p.cell_period * p.stripe_separation)
    return EnergyScales(e_josephson=e_josephson, e_charging=e_charging, e_em=e_em)


def cross_check(p: DimensionlessParams) -> ConsistencyReport:
    """Compare the closed-form normalized couplings with the ones built from
    the energy scales (``E_J = 1``); residuals are relative."""
    direct = normalized_from_dimensionless(p)
    via_energies = normalized_from_derived(derived_from_energies(energies_from_dimensionless(p, 1.0)))
    residuals = {
        name: abs(getattr(direct, name) - getattr(via_energies, name)) / abs(getattr(direct, name))
        for name in ("a", "b", "delta", "homega_over_2J")
    }
    return ConsistencyReport(residuals=residuals, max_residual=max(residuals.values()))
