"""Gaussian-CGS constants and conversion between laboratory fields and the
dimensionless parameters of the rotating-wave Dirac problem.

Everything here is Gaussian CGS: fields in gauss, lengths in cm, energies in
erg, charge in esu.  The dimensionless set (e0, lambda_, h) together with the
envelope curvature d (cm^-2) and the branch sign s fully determines a
configuration; `normalize` and `denormalize` map back and forth.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass, replace

__all__ = [
    "PhysicalConstants",
    "CODATA2018",
    "CONSTANT_SETS",
    "get_constants",
    "PhysicalConfig",
    "NormalizedConfig",
    "UnphysicalParameterError",
    "normalize",
    "denormalize",
    "config_from_normalized",
    "localization_length",
    "wave_amplitude",
    "electron_config",
]


class UnphysicalParameterError(ValueError):
    """Parameters outside the physical domain (h^2 < 0, complex roots, ...)."""


@dataclass(frozen=True)
class PhysicalConstants:
    """Fundamental constants in Gaussian CGS units.

    c         speed of light, cm/s
    hbar      reduced Planck constant, erg s
    e_charge  elementary charge magnitude, esu
    m_e       electron mass, g
    mu_B      Bohr magneton, erg/G
    """

    c: float
    hbar: float
    e_charge: float
    m_e: float
    mu_B: float

    def __post_init__(self):
        for name in ("c", "hbar", "e_charge", "m_e", "mu_B"):
            if not getattr(self, name) > 0.0:
                raise ValueError(f"constant {name} must be positive")
        derived = self.e_charge * self.hbar / (2.0 * self.m_e * self.c)
        if abs(derived - self.mu_B) > 1e-6 * self.mu_B:
            raise ValueError("mu_B inconsistent with e_charge*hbar/(2*m_e*c)")

    def magneton(self, mass: float, charge: float) -> float:
        """|q| hbar / (2 m c) for an arbitrary fermion, erg/G."""
        return abs(charge) * self.hbar / (2.0 * mass * self.c)


# CODATA 2018, converted to Gaussian units.  e_charge is the exact SI value
# 1.602176634e-19 C times c/10 (statcoulomb per coulomb); hbar is exact.
CODATA2018 = PhysicalConstants(
    c=2.99792458e10,
    hbar=1.054571817e-27,
    e_charge=4.80320471257e-10,
    m_e=9.1093837015e-28,
    mu_B=9.2740100783e-21,
)

CONSTANT_SETS = {"codata2018": CODATA2018}


def get_constants(name: str | None = None) -> PhysicalConstants:
    """Return a named constant set; default taken from $DWM_CONSTANTS."""
    if name is None:
        name = os.environ.get("DWM_CONSTANTS", "codata2018")
    try:
        return CONSTANT_SETS[name.lower()]
    except KeyError:
        raise ValueError(f"unknown constants set {name!r}") from None


def _sign(x: float) -> int:
    if x > 0:
        return 1
    if x < 0:
        return -1
    raise ValueError("sign of zero is undefined here")


@dataclass(frozen=True)
class PhysicalConfig:
    """Laboratory-frame inputs, Gaussian CGS.

    omega_angular  wave angular frequency, rad/s, signed (sign selects the
                   rotation sense of the polarization)
    H_z            constant axial magnetic field, G, signed
    H_wave         wave amplitude, G; a negative value is the same wave
                   shifted by half a turn, kept so normalized->physical
                   reconstruction closes for every branch
    p_z            conserved longitudinal momentum, g cm/s, signed
    epsilon        propagation direction along z, +1 or -1
    mass           fermion mass, g
    charge         fermion charge, esu, signed
    """

    omega_angular: float
    H_z: float
    H_wave: float
    p_z: float
    epsilon: int
    mass: float
    charge: float

    def __post_init__(self):
        if self.epsilon not in (-1, 1):
            raise ValueError("epsilon must be +1 or -1")
        if not self.mass > 0.0:
            raise ValueError("mass must be positive")
        if self.omega_angular == 0.0:
            raise ValueError("omega_angular must be nonzero")
        if self.H_z == 0.0:
            raise ValueError("H_z must be nonzero (zero field destroys localization)")
        if self.charge == 0.0:
            raise ValueError("charge must be nonzero")

    @property
    def k_wave(self) -> float:
        """Propagation constant epsilon*Omega/c, cm^-1 (c from CODATA2018)."""
        return self.epsilon * self.omega_angular / CODATA2018.c


@dataclass(frozen=True)
class NormalizedConfig:
    """Dimensionless parameters plus the envelope curvature.

    e0       2 hbar d / (Omega m), signed through Omega
    lambda_  (2 eps p c + s hbar Omega) / (m c^2)
    h        q H / (k m c^2), signed
    d        transverse envelope curvature, cm^-2, always positive
    s        sign of (charge * H_z); s=-1 selects the upper-sign spinor
             family, s=+1 the lower-sign one
    epsilon  propagation direction, +1 or -1
    big_p    sqrt(p^2 / m^2 c^2 + 1)
    """

    e0: float
    lambda_: float
    h: float
    d: float
    s: int
    epsilon: int
    big_p: float

    def __post_init__(self):
        if self.s not in (-1, 1):
            raise ValueError("s must be +1 or -1")
        if self.epsilon not in (-1, 1):
            raise ValueError("epsilon must be +1 or -1")
        if not self.d > 0.0:
            raise ValueError("d must be positive")
        if not self.big_p >= 1.0 - 1e-12:
            raise ValueError("big_p must be >= 1")
        if self.e0 == 0.0:
            raise ValueError("e0 must be nonzero")


def normalize(cfg: PhysicalConfig, consts: PhysicalConstants) -> NormalizedConfig:
    """Map laboratory parameters to the dimensionless set.

    d = |q H_z| / (2 hbar c), e0 = 2 hbar d / (Omega m), h = q H / (k m c^2)
    with k = eps Omega / c, and lambda_ on the branch picked by
    s = sign(q H_z): lambda_ = (2 eps p c + s hbar Omega) / (m c^2).
    """
    c, hbar = consts.c, consts.hbar
    s = _sign(cfg.charge * cfg.H_z)
    d = abs(cfg.charge * cfg.H_z) / (2.0 * hbar * c)
    e0 = 2.0 * hbar * d / (cfg.omega_angular * cfg.mass)
    k = cfg.epsilon * cfg.omega_angular / c
    h = cfg.charge * cfg.H_wave / (k * cfg.mass * c * c)
    mc2 = cfg.mass * c * c
    lambda_ = (2.0 * cfg.epsilon * cfg.p_z * c + s * hbar * cfg.omega_angular) / mc2
    big_p = math.sqrt((cfg.p_z / (cfg.mass * c)) ** 2 + 1.0)
    return NormalizedConfig(e0=e0, lambda_=lambda_, h=h, d=d, s=s,
                            epsilon=cfg.epsilon, big_p=big_p)


def denormalize(ncfg: NormalizedConfig, mass: float, charge: float,
                consts: PhysicalConstants) -> PhysicalConfig:
    """Reconstruct laboratory parameters from the dimensionless set."""
    if charge == 0.0:
        raise ValueError("charge must be nonzero")
    c, hbar = consts.c, consts.hbar
    omega = 2.0 * hbar * ncfg.d / (ncfg.e0 * mass)
    H_z = 2.0 * hbar * c * ncfg.d * ncfg.s / charge
    k = ncfg.epsilon * omega / c
    H = ncfg.h * k * mass * c * c / charge
    mc2 = mass * c * c
    p = ncfg.epsilon * (ncfg.lambda_ * mc2 - ncfg.s * hbar * omega) / (2.0 * c)
    return PhysicalConfig(omega_angular=omega, H_z=H_z, H_wave=H, p_z=p,
                          epsilon=ncfg.epsilon, mass=mass, charge=charge)


def config_from_normalized(e0: float, lambda_: float, h: float, d: float,
                           s: int, epsilon: int, mass: float,
                           consts: PhysicalConstants) -> NormalizedConfig:
    """Build a NormalizedConfig with big_p filled in consistently."""
    hbar, c = consts.hbar, consts.c
    omega = 2.0 * hbar * d / (e0 * mass)
    p = epsilon * (lambda_ * mass * c * c - s * hbar * omega) / (2.0 * c)
    big_p = math.sqrt((p / (mass * c)) ** 2 + 1.0)
    return NormalizedConfig(e0=e0, lambda_=lambda_, h=h, d=d, s=s,
                            epsilon=epsilon, big_p=big_p)


def with_curvature(ncfg: NormalizedConfig, d: float, mass: float,
                   consts: PhysicalConstants) -> NormalizedConfig:
    """Same dimensionless parameters at a different envelope curvature.

    Omega and H_z co-vary with d at fixed (e0, lambda_, h, s); big_p is
    recomputed because p follows Omega.
    """
    return config_from_normalized(ncfg.e0, ncfg.lambda_, ncfg.h, d, ncfg.s,
                                  ncfg.epsilon, mass, consts)


def localization_length(H_z: float, consts: PhysicalConstants) -> float:
    """Transverse localization scale 2*sqrt(1/d) = 2*sqrt(2 hbar c/|e H_z|), cm."""
    if H_z == 0.0:
        raise ValueError("H_z must be nonzero")
    d = consts.e_charge * abs(H_z) / (2.0 * consts.hbar * consts.c)
    return 2.0 / math.sqrt(d)


def wave_amplitude(h: float, e0: float, H_z: float, epsilon: int) -> float:
    """Wave amplitude from H = eps*h*H_z/e0.

    Exact inverse of `normalize` for s=+1 configurations; for s=-1 it returns
    the amplitude with the opposite sign convention (same physical wave up to
    a half-turn phase), so callers comparing against a lab amplitude should
    compare magnitudes.
    """
    if e0 == 0.0:
        raise ValueError("e0 must be nonzero")
    if epsilon not in (-1, 1):
        raise ValueError("epsilon must be +1 or -1")
    return epsilon * h * H_z / e0


def electron_config(omega_angular: float, H_z: float, H_wave: float, p_z: float,
                    epsilon: int, consts: PhysicalConstants) -> PhysicalConfig:
    """PhysicalConfig preset for an electron (charge -e)."""
    return PhysicalConfig(omega_angular=omega_angular, H_z=H_z, H_wave=H_wave,
                          p_z=p_z, epsilon=epsilon, mass=consts.m_e,
                          charge=-consts.e_charge)


def replace_config(cfg, **kw):
    """dataclasses.replace passthrough, re-running validation."""
    return replace(cfg, **kw)
