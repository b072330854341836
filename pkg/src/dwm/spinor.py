"""Construction and evaluation of the localized constant-spinor states.

A state is

    Psi = N exp(-i E t/hbar + i p z/hbar + D) exp(-alpha1 alpha2 theta/2) chi,
    D   = -d (xt^2 + yt^2)/2 + d1 xt + d2 yt,      theta = Omega t - k z,

with rotated transverse coordinates xt = x cos(theta) + y sin(theta),
yt = -x sin(theta) + y cos(theta), a constant 4-spinor chi, and the tilt
d1 = i s d2 purely imaginary.  The probability density is a Gaussian of
curvature d centered at (xt, yt) = (0, d2/d) in the co-rotating frame.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .eigen import cubic_residual, energy_from_root
from .units import NormalizedConfig, PhysicalConfig, PhysicalConstants, get_constants
from .verify import DiracRepresentation, intertwiner, standard_representation

__all__ = [
    "GroundState",
    "build_ground_state",
    "evaluate",
    "WaveSample",
    "sample",
]


@dataclass(frozen=True)
class GroundState:
    """One exact localized solution.

    spinor_const holds the unnormalized 4-spinor column; norm_N carries the
    full normalization including the exp(-d2^2/2d) overlap factor.  They are
    stored separately because several observables are ratios of the same
    quadratics and lose accuracy if the normalization is folded in early.
    """

    cfg: NormalizedConfig
    root: float
    spinor_const: np.ndarray
    norm_N: float
    d1: complex
    d2: float
    energy_rot: float
    p_z: float
    omega: float
    k_wave: float
    mass: float
    charge: float
    rep: DiracRepresentation

    def __post_init__(self):
        expected_d1 = 1j * self.cfg.s * self.d2
        if abs(self.d1 - expected_d1) > 1e-12 * max(1.0, abs(self.d2)):
            raise ValueError("d1 must equal i*s*d2")

    # -- geometry -------------------------------------------------------

    @property
    def width(self) -> float:
        """Transverse Gaussian width 1/sqrt(d), cm."""
        return 1.0 / np.sqrt(self.cfg.d)

    def rotated_coords(self, x, y, z, t):
        theta = self.omega * t - self.k_wave * z
        ct, st = np.cos(theta), np.sin(theta)
        xt = x * ct + y * st
        yt = -x * st + y * ct
        return xt, yt, theta

    def center(self, z=0.0, t=0.0):
        """Laboratory coordinates of the density center."""
        theta = self.omega * t - self.k_wave * z
        y0 = self.d2 / self.cfg.d
        return -y0 * np.sin(theta), y0 * np.cos(theta)

    def physical_config(self, consts: PhysicalConstants | None = None) -> PhysicalConfig:
        consts = consts or get_constants()
        c = consts.c
        H_z = 2.0 * consts.hbar * c * self.cfg.d * self.cfg.s / self.charge
        H = self.cfg.h * self.k_wave * self.mass * c * c / self.charge
        return PhysicalConfig(omega_angular=self.omega, H_z=H_z, H_wave=H,
                              p_z=self.p_z, epsilon=self.cfg.epsilon,
                              mass=self.mass, charge=self.charge)

    # -- evaluation -----------------------------------------------------

    def _scalar_parts(self, x, y, z, t):
        """Stable scalar prefactor: envelope centered on the density peak."""
        xt, yt, theta = self.rotated_coords(x, y, z, t)
        d = self.cfg.d
        y0 = self.d2 / d
        # D - d2^2/(2 d) written in centered form; d1 is imaginary so it
        # only contributes phase
        expo = (-0.5 * d * xt * xt + self.d1 * xt
                - 0.5 * d * (yt - y0) ** 2)
        hbar = get_constants().hbar
        phase = -1j * self.energy_rot * t / hbar + 1j * self.p_z * z / hbar
        return expo + phase, theta, xt, yt

    @property
    def _norm_prefactor(self) -> float:
        """norm_N with the exp(-d2^2/2d) factor removed (kept in the envelope)."""
        return self.norm_N * np.exp(self.d2**2 / (2.0 * self.cfg.d))

    def evaluate(self, x, y, z, t):
        """Spinor components at (x, y, z, t); broadcasts over array inputs."""
        x, y, z, t = np.broadcast_arrays(*map(np.asarray, (x, y, z, t)))
        expo, theta, _, _ = self._scalar_parts(x, y, z, t)
        rotated = self.rep.rotate_spinor(theta, self.spinor_const)
        return self._norm_prefactor * np.exp(expo) * rotated

    def gradient(self, x, y, z, t):
        """(psi, dpsi/dt, dpsi/dx, dpsi/dy, dpsi/dz) by the chain rule."""
        x, y, z, t = np.broadcast_arrays(*map(np.asarray, (x, y, z, t)))
        expo, theta, xt, yt = self._scalar_parts(x, y, z, t)
        rotated = self.rep.rotate_spinor(theta, self.spinor_const)
        psi = self._norm_prefactor * np.exp(expo) * rotated

        hbar = get_constants().hbar
        d, d1, d2 = self.cfg.d, self.d1, self.d2
        ct, st = np.cos(theta), np.sin(theta)
        ddth = d1 * yt - d2 * xt              # d(envelope)/d(theta)
        slog_t = -1j * self.energy_rot / hbar + self.omega * ddth
        slog_z = 1j * self.p_z / hbar - self.k_wave * ddth
        slog_x = -d * x + d1 * ct - d2 * st
        slog_y = -d * y + d1 * st + d2 * ct

        a12psi = np.einsum("ij,j...->i...", self.rep.alpha12, psi)
        dpsi_dt = slog_t * psi - 0.5 * self.omega * a12psi
        dpsi_dz = slog_z * psi + 0.5 * self.k_wave * a12psi
        return psi, dpsi_dt, slog_x * psi, slog_y * psi, dpsi_dz

    def density(self, x, y, z, t):
        psi = self.evaluate(x, y, z, t)
        return np.sum(np.abs(psi) ** 2, axis=0)

    def fd_scales(self, x, y, z, t, consts: PhysicalConstants | None = None):
        from .verify import fd_step_scales
        consts = consts or get_constants()
        return fd_step_scales(x, y, z, t, self.physical_config(consts), consts,
                              d=self.cfg.d, d2=self.d2, energy=self.energy_rot)

    def with_representation(self, rep: DiracRepresentation) -> "GroundState":
        """Exact transport to another representation via the intertwiner."""
        if rep.label == self.rep.label:
            return self
        u = intertwiner(self.rep, rep)
        return replace(self, spinor_const=u @ self.spinor_const, rep=rep)


def build_ground_state(cfg: NormalizedConfig, root: float, mass: float,
                       charge: float, consts: PhysicalConstants | None = None,
                       rep: DiracRepresentation | None = None) -> GroundState:
    """Assemble the normalized state for one real root of the level cubic."""
    consts = consts or get_constants()
    rep = rep or standard_representation()
    if isinstance(root, complex):
        if root.imag != 0.0:
            raise ValueError("complex roots do not yield normalizable states")
        root = root.real
    root = float(root)
    res = cubic_residual(root, cfg.e0, cfg.lambda_, cfg.h, cfg.s)
    scale = max(1.0, abs(root) ** 3)
    if abs(res) > 1e-6 * scale:
        raise ValueError("root does not satisfy the level cubic")

    s, e0, h = cfg.s, cfg.e0, cfg.h
    g = root + s * e0
    if abs(g) < 1e-12:
        raise ValueError("envelope-tilt singularity: root + s*e0 vanishes")

    c, hbar = consts.c, consts.hbar
    d2 = e0 * mass * c * h / (2.0 * hbar * g)
    d1 = 1j * s * d2

    eps, ee = cfg.epsilon, root
    if s == -1:
        chi = np.array([h * ee,
                        -eps * (ee + 1.0) * (ee - e0),
                        eps * h * ee,
                        -(ee - 1.0) * (ee - e0)], dtype=complex)
    else:
        chi = np.array([(ee + 1.0) * (ee + e0),
                        eps * ee * h,
                        -eps * (ee - 1.0) * (ee + e0),
                        -ee * h], dtype=complex)

    denom = np.sqrt((ee * ee + 1.0) * g * g + h * h * ee * ee)
    norm = np.sqrt(cfg.d / (2.0 * np.pi)) * np.exp(-d2 * d2 / (2.0 * cfg.d)) / denom

    omega = 2.0 * hbar * cfg.d / (e0 * mass)
    k = eps * omega / c
    p = eps * (cfg.lambda_ * mass * c * c - s * hbar * omega) / (2.0 * c)
    energy = energy_from_root(root, p, eps, mass, consts)

    std = standard_representation()
    if rep.label != std.label:
        chi = intertwiner(std, rep) @ chi

    return GroundState(cfg=cfg, root=root, spinor_const=chi, norm_N=float(norm),
                       d1=d1, d2=float(d2), energy_rot=float(energy),
                       p_z=float(p), omega=float(omega), k_wave=float(k),
                       mass=mass, charge=charge, rep=rep)


def evaluate(gs: GroundState, x, y, z, t):
    """Module-level alias for GroundState.evaluate."""
    return gs.evaluate(x, y, z, t)


@dataclass(frozen=True)
class WaveSample:
    """One sampled value of the full laboratory-frame wavefunction."""

    position: tuple
    time: float
    value: np.ndarray

    def __post_init__(self):
        if not np.all(np.isfinite(self.value)):
            raise ValueError("wavefunction sample is not finite")


def sample(gs: GroundState, position, time) -> WaveSample:
    x, y, z = position
    return WaveSample(position=(x, y, z), time=time,
                      value=gs.evaluate(x, y, z, time))
