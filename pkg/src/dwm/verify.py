"""Independent check that a sampled wavefunction solves the Dirac equation

    i hbar dPsi/dt = c alpha.(p - (q/c)A) Psi + beta m c^2 Psi

with the symmetric-gauge constant field plus circularly polarized wave
potential.  The residual is formed either from analytic derivatives of a
constructed state or from 8th-order central differences of an arbitrary
sampler, normalized so that zero means "exact solution" and O(1) means "not
a solution".
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from .units import PhysicalConfig, PhysicalConstants, get_constants

__all__ = [
    "DiracRepresentation",
    "standard_representation",
    "weyl_representation",
    "representation",
    "intertwiner",
    "potential",
    "apply_dirac_operator",
    "dirac_residual_analytic",
    "dirac_residual_fd",
    "fd_step_scales",
    "ResidualReport",
    "CertificationPlan",
    "certify",
    "certify_conventions",
]

_S1 = np.array([[0, 1], [1, 0]], dtype=complex)
_S2 = np.array([[0, -1j], [1j, 0]], dtype=complex)
_S3 = np.array([[1, 0], [0, -1]], dtype=complex)
_I2 = np.eye(2, dtype=complex)
_Z2 = np.zeros((2, 2), dtype=complex)

# 8th-order central first-derivative stencil, offsets 1..4
_FD_COEFF = np.array([4.0 / 5.0, -1.0 / 5.0, 4.0 / 105.0, -1.0 / 280.0])
_FD_STEP = float(np.finfo(float).eps ** (1.0 / 9.0))


@dataclass(frozen=True)
class DiracRepresentation:
    """Four anticommuting Hermitian 4x4 matrices (alpha_k, beta)."""

    label: str
    alpha1: np.ndarray
    alpha2: np.ndarray
    alpha3: np.ndarray
    beta: np.ndarray

    def __post_init__(self):
        mats = (self.alpha1, self.alpha2, self.alpha3, self.beta)
        for m in mats:
            if m.shape != (4, 4):
                raise ValueError("Dirac matrices must be 4x4")
            if not np.allclose(m, m.conj().T, atol=1e-14):
                raise ValueError("Dirac matrices must be Hermitian")
        eye = np.eye(4)
        for i, a in enumerate(mats):
            for j, b in enumerate(mats):
                anti = a @ b + b @ a
                want = 2.0 * eye if i == j else np.zeros((4, 4))
                if not np.allclose(anti, want, atol=1e-14):
                    raise ValueError("Clifford algebra violated")
        # eigendecomposition of alpha1 alpha2 drives the spin rotation
        a12 = self.alpha1 @ self.alpha2
        vals, vecs = np.linalg.eig(a12)
        object.__setattr__(self, "_a12", a12)
        object.__setattr__(self, "_rot_vals", vals)
        object.__setattr__(self, "_rot_vecs", vecs)
        object.__setattr__(self, "_rot_inv", np.linalg.inv(vecs))

    @property
    def alpha(self):
        return (self.alpha1, self.alpha2, self.alpha3)

    @property
    def alpha12(self) -> np.ndarray:
        return self._a12

    def rotation(self, phi):
        """exp(-alpha1 alpha2 phi / 2) for scalar phi, as a 4x4 matrix."""
        diag = np.exp(-0.5 * self._rot_vals * phi)
        return (self._rot_vecs * diag) @ self._rot_inv

    def rotate_spinor(self, phi, chi):
        """exp(-alpha1 alpha2 phi / 2) chi, vectorized over an array phi."""
        phi = np.asarray(phi, dtype=float)
        w = self._rot_inv @ np.asarray(chi, dtype=complex)
        phases = np.exp(np.multiply.outer(-0.5 * self._rot_vals, phi))
        return np.einsum("ij,j...->i...", self._rot_vecs, phases * w.reshape((4,) + (1,) * phi.ndim))


def standard_representation() -> DiracRepresentation:
    """alpha_k off-diagonal Pauli blocks, beta = diag(I, -I)."""
    def offdiag(m):
        return np.block([[_Z2, m], [m, _Z2]])

    return DiracRepresentation(
        label="dirac",
        alpha1=offdiag(_S1), alpha2=offdiag(_S2), alpha3=offdiag(_S3),
        beta=np.block([[_I2, _Z2], [_Z2, -_I2]]),
    )


def weyl_representation() -> DiracRepresentation:
    """Chiral representation: alpha_k = diag(-sigma_k, sigma_k), beta off-diagonal."""
    def diag(m):
        return np.block([[-m, _Z2], [_Z2, m]])

    return DiracRepresentation(
        label="weyl",
        alpha1=diag(_S1), alpha2=diag(_S2), alpha3=diag(_S3),
        beta=np.block([[_Z2, _I2], [_I2, _Z2]]),
    )


_REPS: dict[str, DiracRepresentation] = {}


def representation(label: str) -> DiracRepresentation:
    if not _REPS:
        for rep in (standard_representation(), weyl_representation()):
            _REPS[rep.label] = rep
    try:
        return _REPS[label]
    except KeyError:
        raise ValueError(f"unknown Dirac representation {label!r}") from None


def intertwiner(rep_a: DiracRepresentation, rep_b: DiracRepresentation) -> np.ndarray:
    """Unitary U with U M_a U^dagger = M_b for all four Dirac matrices.

    Unique up to a phase; the phase is fixed so the largest entry is real
    positive.
    """
    eye = np.eye(4)
    blocks = []
    for ma, mb in zip(rep_a.alpha + (rep_a.beta,), rep_b.alpha + (rep_b.beta,)):
        # vec(U M_a - M_b U) = (M_a^T kron I - I kron M_b) vec(U)
        blocks.append(np.kron(ma.T, eye) - np.kron(eye, mb))
    system = np.vstack(blocks)
    _, sing, vh = np.linalg.svd(system)
    if sing[-1] > 1e-10:
        raise ValueError("representations are not unitarily equivalent")
    u = vh[-1].conj().reshape(4, 4)
    # normalize to unitary and fix the phase
    scale = np.sqrt(np.trace(u.conj().T @ u).real / 4.0)
    u = u / scale
    idx = np.unravel_index(np.argmax(np.abs(u)), u.shape)
    u = u * (np.abs(u[idx]) / u[idx])
    if not np.allclose(u @ u.conj().T, eye, atol=1e-10):
        raise ValueError("intertwiner failed unitarity")
    return u


def potential(x, y, z, t, cfg: PhysicalConfig):
    """Vector potential (A_x, A_y); A_z = 0.

    A_x = -H_z y/2 + (H/k) cos(Omega t - k z)
    A_y = +H_z x/2 + (H/k) sin(Omega t - k z)
    """
    k = cfg.k_wave
    if k == 0.0:
        raise ValueError("propagation constant k must be nonzero")
    theta = cfg.omega_angular * t - k * z
    ax = -0.5 * cfg.H_z * y + cfg.H_wave / k * np.cos(theta)
    ay = 0.5 * cfg.H_z * x + cfg.H_wave / k * np.sin(theta)
    return ax, ay


def _hamiltonian_apply(psi, dpsi_dx, dpsi_dy, dpsi_dz, x, y, z, t,
                       cfg: PhysicalConfig, rep: DiracRepresentation,
                       consts: PhysicalConstants):
    """c alpha.(p - (q/c)A) Psi + beta m c^2 Psi from supplied derivatives."""
    c, hbar = consts.c, consts.hbar
    ax, ay = potential(x, y, z, t, cfg)
    pix = -1j * hbar * dpsi_dx - (cfg.charge / c) * ax * psi
    piy = -1j * hbar * dpsi_dy - (cfg.charge / c) * ay * psi
    piz = -1j * hbar * dpsi_dz
    out = c * (np.einsum("ij,j...->i...", rep.alpha1, pix)
               + np.einsum("ij,j...->i...", rep.alpha2, piy)
               + np.einsum("ij,j...->i...", rep.alpha3, piz))
    out += cfg.mass * c * c * np.einsum("ij,j...->i...", rep.beta, psi)
    return out


def _relative(residual, lhs, hpsi, psi, cfg, consts):
    num = np.linalg.norm(residual, axis=0)
    floor = cfg.mass * consts.c**2 * np.max(np.abs(psi), axis=0)
    den = np.linalg.norm(lhs, axis=0) + np.linalg.norm(hpsi, axis=0) + floor
    return num / den


def dirac_residual_analytic(gs, x, y, z, t, consts: PhysicalConstants | None = None):
    """(residual 4-vector, relative residual) using the state's exact gradient."""
    consts = consts or get_constants()
    cfg = gs.physical_config(consts)
    psi, dt_, dx_, dy_, dz_ = gs.gradient(x, y, z, t)
    lhs = 1j * consts.hbar * dt_
    hpsi = _hamiltonian_apply(psi, dx_, dy_, dz_, x, y, z, t, cfg, gs.rep, consts)
    res = lhs - hpsi
    return res, _relative(res, lhs, hpsi, psi, cfg, consts)


def fd_step_scales(x, y, z, t, cfg: PhysicalConfig, consts: PhysicalConstants,
                   d: float = 0.0, d2: float = 0.0, energy: float | None = None):
    """Per-dimension characteristic lengths for finite differencing.

    Rates include the envelope's phase/amplitude excursion (|d2| times the
    transverse extent enters the t and z rates through the rotating frame),
    which dominates when the lab-frame energy is accidentally small.
    """
    hbar, c = consts.hbar, consts.c
    omega = abs(cfg.omega_angular)
    k = abs(cfg.k_wave)
    if energy is None:
        energy = cfg.mass * c * c * (1.0 + abs(cfg.p_z) / (cfg.mass * c))
    w = 1.0 / np.sqrt(d) if d > 0.0 else 0.0
    extent = abs(x) + abs(y) + 4.0 * w
    env = abs(d2) * extent
    rate_t = abs(energy) / hbar + omega * (1.0 + env)
    rate_z = abs(cfg.p_z) / hbar + k * (1.0 + env)
    rate_x = d * (abs(x) + w) + 2.0 * abs(d2) + (np.sqrt(d) if d > 0 else 0.0)
    rate_y = d * (abs(y) + w) + 2.0 * abs(d2) + (np.sqrt(d) if d > 0 else 0.0)
    tiny = 1e-300
    return (1.0 / max(rate_t, tiny), 1.0 / max(rate_x, tiny),
            1.0 / max(rate_y, tiny), 1.0 / max(rate_z, tiny))


def _fd_derivative(sampler, x, y, z, t, dim, step):
    coords = [x, y, z, t]
    acc = None
    for n, cn in enumerate(_FD_COEFF, start=1):
        plus = list(coords)
        minus = list(coords)
        plus[dim] = coords[dim] + n * step
        minus[dim] = coords[dim] - n * step
        term = cn * (np.asarray(sampler(*plus)) - np.asarray(sampler(*minus)))
        acc = term if acc is None else acc + term
    return acc / step


def dirac_residual_fd(sampler, cfg: PhysicalConfig, rep: DiracRepresentation,
                      x, y, z, t, scales, consts: PhysicalConstants | None = None):
    """(residual, relative residual) by 8th-order central differences.

    `sampler(x, y, z, t)` must return the 4 spinor components; `scales` are
    the per-dimension characteristic lengths (t, x, y, z order as returned
    by `fd_step_scales`).  The step is scale * eps_machine**(1/9).
    """
    consts = consts or get_constants()
    sc_t, sc_x, sc_y, sc_z = scales
    psi = np.asarray(sampler(x, y, z, t))
    dpsi_dx = _fd_derivative(sampler, x, y, z, t, 0, sc_x * _FD_STEP)
    dpsi_dy = _fd_derivative(sampler, x, y, z, t, 1, sc_y * _FD_STEP)
    dpsi_dz = _fd_derivative(sampler, x, y, z, t, 2, sc_z * _FD_STEP)
    dpsi_dt = _fd_derivative(sampler, x, y, z, t, 3, sc_t * _FD_STEP)
    if not np.all(np.isfinite(psi)):
        raise ValueError("sampler returned non-finite values")
    lhs = 1j * consts.hbar * dpsi_dt
    hpsi = _hamiltonian_apply(psi, dpsi_dx, dpsi_dy, dpsi_dz, x, y, z, t,
                              cfg, rep, consts)
    res = lhs - hpsi
    return res, _relative(res, lhs, hpsi, psi, cfg, consts)


def apply_dirac_operator(sampler, point, rep: DiracRepresentation,
                         cfg: PhysicalConfig, method: str = "finite-difference",
                         scales=None, consts: PhysicalConstants | None = None):
    """Residual 4-vector of the Dirac equation at one spacetime point.

    `method` is "finite-difference" (any sampler; needs `scales` or a
    GroundState-flavored sampler) or "analytic" (sampler must be a state
    exposing `.gradient`).
    """
    consts = consts or get_constants()
    x, y, z, t = point
    if method == "analytic":
        res, _ = dirac_residual_analytic(sampler, x, y, z, t, consts)
        return res
    if method != "finite-difference":
        raise ValueError("method must be 'analytic' or 'finite-difference'")
    if scales is None:
        if hasattr(sampler, "fd_scales"):
            scales = sampler.fd_scales(x, y, z, t, consts)
            cfg = sampler.physical_config(consts)
            sampler = sampler.evaluate
        else:
            scales = fd_step_scales(x, y, z, t, cfg, consts)
    res, _ = dirac_residual_fd(sampler, cfg, rep, x, y, z, t, scales, consts)
    return res


@dataclass(frozen=True)
class CertificationPlan:
    """Sampling plan for residual certification."""

    n_points: int = 50
    widths: float = 4.0
    n_zt: int = 5
    seed: int = 0


@dataclass(frozen=True)
class ResidualReport:
    """Certificate that a wavefunction satisfies (or fails) the Dirac equation."""

    samples: int
    residual_rel: float
    method: str
    convention: str
    passed: bool
    scanned: tuple = field(default_factory=tuple)

    def to_dict(self):
        return {
            "samples": self.samples,
            "residual_rel": self.residual_rel,
            "method": self.method,
            "convention": self.convention,
            "pass": self.passed,
            "scanned": [list(item) for item in self.scanned],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)


def _plan_points(gs, plan: CertificationPlan):
    rng = np.random.default_rng(plan.seed)
    w = 1.0 / np.sqrt(gs.cfg.d)
    n = plan.n_points
    xt = rng.uniform(-plan.widths * w, plan.widths * w, n)
    yt = rng.uniform(-plan.widths * w, plan.widths * w, n)
    zs = rng.uniform(-1.0, 1.0, plan.n_zt) * (2.0 * np.pi / abs(gs.k_wave))
    ts = rng.uniform(-1.0, 1.0, plan.n_zt) * (2.0 * np.pi / abs(gs.omega))
    z = zs[rng.integers(0, plan.n_zt, n)]
    t = ts[rng.integers(0, plan.n_zt, n)]
    theta = gs.omega * t - gs.k_wave * z
    ct, st = np.cos(theta), np.sin(theta)
    x = xt * ct - yt * st
    y = xt * st + yt * ct
    return x, y, z, t


def _max_residual(gs, x, y, z, t, consts, method):
    if method == "analytic":
        _, rel = dirac_residual_analytic(gs, x, y, z, t, consts)
        return float(np.max(rel))
    cfg = gs.physical_config(consts)
    best = 0.0
    for i in range(x.size):
        scales = gs.fd_scales(x[i], y[i], z[i], t[i], consts)
        _, rel = dirac_residual_fd(gs.evaluate, cfg, gs.rep,
                                   x[i], y[i], z[i], t[i], scales, consts)
        best = max(best, float(rel))
    return best


def certify_conventions(gs, plan: CertificationPlan | None = None,
                        conventions=None, method: str = "analytic",
                        consts: PhysicalConstants | None = None):
    """Residual per convention: representation choice, charge sign, wave sense.

    The state is transported to alternate representations with the exact
    intertwiner (covariance check, expected to pass); flipping the charge or
    the wave sense changes the operator only (expected to fail for a genuine
    solution, which pins the convention empirically).
    """
    consts = consts or get_constants()
    plan = plan or CertificationPlan()
    if conventions is None:
        conventions = ("dirac", "weyl", "charge-flipped", "wave-flipped")
    x, y, z, t = _plan_points(gs, plan)
    base_cfg = gs.physical_config(consts)
    results = {}
    for label in conventions:
        state = gs
        cfg = base_cfg
        if label in ("dirac", "weyl"):
            state = gs.with_representation(representation(label))
            rel = _max_residual(state, x, y, z, t, consts, method)
        else:
            if label == "charge-flipped":
                cfg = PhysicalConfig(base_cfg.omega_angular, base_cfg.H_z,
                                     base_cfg.H_wave, base_cfg.p_z,
                                     base_cfg.epsilon, base_cfg.mass,
                                     -base_cfg.charge)
            elif label == "wave-flipped":
                cfg = PhysicalConfig(base_cfg.omega_angular, base_cfg.H_z,
                                     -base_cfg.H_wave, base_cfg.p_z,
                                     base_cfg.epsilon, base_cfg.mass,
                                     base_cfg.charge)
            else:
                raise ValueError(f"unknown convention {label!r}")
            rel = 0.0
            for i in range(x.size):
                scales = gs.fd_scales(x[i], y[i], z[i], t[i], consts)
                _, r = dirac_residual_fd(gs.evaluate, cfg, gs.rep,
                                         x[i], y[i], z[i], t[i], scales, consts)
                rel = max(rel, float(np.max(r)))
        results[label] = rel
    return results


def certify(gs, plan: CertificationPlan | None = None, conventions=None,
            method: str = "analytic", threshold: float = 1e-6,
            consts: PhysicalConstants | None = None) -> ResidualReport:
    """Certify a state against the Dirac operator; FAIL is data, not an error."""
    plan = plan or CertificationPlan()
    results = certify_conventions(gs, plan, conventions, method, consts)
    best_label = min(results, key=results.get)
    best = results[best_label]
    return ResidualReport(
        samples=plan.n_points,
        residual_rel=best,
        method=method,
        convention=best_label,
        passed=bool(best < threshold),
        scanned=tuple(sorted(results.items())),
    )
