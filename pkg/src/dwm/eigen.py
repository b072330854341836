"""Cubic eigenvalue problem for the normalized rotating-frame energy.

The dimensionless level E obeys, with u = s*e0,

    E^3 + (u + lambda_)E^2 - (1 - u*lambda_ + h^2)E - u = 0,

equivalently (E + u)(E^2 + lambda_*E - 1) = h^2 E.  Two chosen roots
(E1, E2) are encoded by their product Pi and sum eta; eliminating the third
root through the product/sum relations gives the inverse map implemented in
`fields_from_pair`.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .units import PhysicalConstants

__all__ = [
    "EigenRoots",
    "PairParams",
    "cubic_coefficients",
    "cubic_residual",
    "solve_cubic",
    "solve_cubic_batch",
    "fields_from_pair",
    "third_root",
    "energy_from_root",
    "root_from_energy",
]

# complex pair with |imag| below this (relative to root scale) counts as a
# numerically repeated real root
_REAL_TOL = 1e-12


@dataclass(frozen=True)
class EigenRoots:
    """Three roots of the level cubic with per-root realness flags.

    Real roots come first, sorted ascending; a conjugate pair, if present,
    follows ordered by imaginary part.
    """

    roots: tuple
    realness: tuple

    def real_roots(self):
        return [r.real for r, flag in zip(self.roots, self.realness) if flag]

    def all_real(self) -> bool:
        return all(self.realness)


@dataclass(frozen=True)
class PairParams:
    """Product and sum of a chosen pair of roots: pi_ = E1*E2, eta = E1+E2."""

    pi_: float
    eta: float

    def roots(self):
        """The pair itself; requires eta^2 - 4 pi_ >= 0."""
        disc = self.eta * self.eta - 4.0 * self.pi_
        if disc < 0.0:
            raise ValueError("pair parameters describe complex roots")
        r = np.sqrt(disc)
        return 0.5 * (self.eta + r), 0.5 * (self.eta - r)


def cubic_coefficients(e0: float, lambda_: float, h: float, s: int):
    """Monic coefficients (a, b, c) of E^3 + a E^2 + b E + c."""
    u = s * e0
    return u + lambda_, -(1.0 - u * lambda_ + h * h), -u


def cubic_residual(root, e0, lambda_, h, s):
    """poly(root), same sign conventions as `cubic_coefficients`."""
    a, b, c = cubic_coefficients(e0, lambda_, h, s)
    return ((root + a) * root + b) * root + c


def _polish(roots, a, b, c, steps=2):
    """Newton-polish roots of the monic cubic, vectorized and complex-safe."""
    for _ in range(steps):
        f = ((roots + a) * roots + b) * roots + c
        df = (3.0 * roots + 2.0 * a) * roots + b
        safe = np.abs(df) > 1e-30
        roots = np.where(safe, roots - f / np.where(safe, df, 1.0), roots)
    return roots


def _solve_monic_batch(a, b, c):
    """All roots of E^3 + aE^2 + bE + c = 0 for arrays of real coefficients.

    Returns (roots, realness) with shapes (..., 3).  Closed form
    (trigonometric for three real roots, Cardano otherwise) plus Newton
    polishing; near triple-root degeneracies polishing restores the
    residual contract.
    """
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    c = np.asarray(c, dtype=float)
    a, b, c = np.broadcast_arrays(a, b, c)
    shape = a.shape

    p = b - a * a / 3.0
    q = 2.0 * a**3 / 27.0 - a * b / 3.0 + c
    disc = (q / 2.0) ** 2 + (p / 3.0) ** 3

    roots = np.empty(shape + (3,), dtype=complex)

    three_real = disc <= 0.0
    if np.any(three_real):
        pp = p[three_real]
        qq = q[three_real]
        m = 2.0 * np.sqrt(np.maximum(-pp / 3.0, 0.0))
        # arg of arccos clipped; |arg|>1 only by roundoff when disc ~ 0
        denom = np.where(m > 0.0, -pp * m / 3.0, 1.0)
        arg = np.clip(np.where(m > 0.0, qq / denom, 0.0) * -1.0, -1.0, 1.0)
        theta = np.arccos(arg) / 3.0
        offs = np.array([0.0, 2.0, 4.0]) * np.pi / 3.0
        y = m[:, None] * np.cos(theta[:, None] - offs[None, :])
        roots[three_real] = y - a[three_real][:, None] / 3.0

    one_real = ~three_real
    if np.any(one_real):
        qq = q[one_real]
        pp = p[one_real]
        sq = np.sqrt(disc[one_real])
        u1 = np.cbrt(-qq / 2.0 + sq)
        v1 = np.cbrt(-qq / 2.0 - sq)
        y0 = u1 + v1
        re = -y0 / 2.0
        im = np.sqrt(3.0) / 2.0 * (u1 - v1)
        shift = a[one_real] / 3.0
        roots[one_real, 0] = y0 - shift
        roots[one_real, 1] = re - shift - 1j * im
        roots[one_real, 2] = re - shift + 1j * im

    roots = _polish(roots, a[..., None], b[..., None], c[..., None])

    scale = np.maximum(1.0, np.max(np.abs(roots), axis=-1))
    realness = np.abs(roots.imag) <= _REAL_TOL * scale[..., None]
    roots = np.where(realness, roots.real + 0.0j, roots)

    # order: real ascending first, then the conjugate pair by imag
    key_im = np.where(realness, 0.0, np.sign(roots.imag))
    order = np.lexsort((roots.real, key_im, ~realness), axis=-1)
    roots = np.take_along_axis(roots, order, axis=-1)
    realness = np.take_along_axis(realness, order, axis=-1)
    return roots, realness


def solve_cubic(e0: float, lambda_: float, h: float, s: int) -> EigenRoots:
    """Solve the level cubic; complex roots are reported, not rejected."""
    a, b, c = cubic_coefficients(e0, lambda_, h, s)
    roots, realness = _solve_monic_batch(a, b, c)
    return EigenRoots(roots=tuple(roots.tolist()), realness=tuple(bool(f) for f in realness))


def solve_cubic_batch(e0, lambda_, h, s):
    """Vectorized `solve_cubic`: returns (roots, realness) arrays (..., 3)."""
    e0 = np.asarray(e0, dtype=float)
    u = np.asarray(s, dtype=float) * e0
    lam = np.asarray(lambda_, dtype=float)
    h = np.asarray(h, dtype=float)
    return _solve_monic_batch(u + lam, -(1.0 - u * lam + h * h), -u)


def fields_from_pair(pp: PairParams, e0: float, s: int):
    """(h^2, lambda_) such that the cubic has the pair (E1, E2) as roots.

    With u = s*e0 and G = pi_ + u*eta + u^2:

        h^2     = -(pi_ + 1) * G / pi_
        lambda_ = -u - eta - u/pi_

    h^2 may come back negative; that flags an unphysical pair and is the
    caller's responsibility to reject where a real wave is required.
    """
    if pp.pi_ == 0.0:
        raise ValueError("pair product pi_ must be nonzero")
    u = s * e0
    big_g = pp.pi_ + u * pp.eta + u * u
    h_squared = -(pp.pi_ + 1.0) * big_g / pp.pi_
    lambda_ = -u - pp.eta - u / pp.pi_
    return h_squared, lambda_


def third_root(pp: PairParams, e0: float, s: int) -> float:
    """Remaining root of the cubic, E3 = s*e0/pi_ (product of roots = s*e0)."""
    if pp.pi_ == 0.0:
        raise ValueError("pair product pi_ must be nonzero")
    return s * e0 / pp.pi_


def energy_from_root(root: float, p_z: float, epsilon: int, mass: float,
                     consts: PhysicalConstants) -> float:
    """Rotating-frame energy E = eps*p*c + m c^2 * root, erg.

    The sign of the m c^2 term is fixed empirically: only this choice makes
    the constructed wavefunctions annihilate the Dirac operator (see the
    residual certification in `verify`).
    """
    return epsilon * p_z * consts.c + mass * consts.c**2 * root


def root_from_energy(energy: float, p_z: float, epsilon: int, mass: float,
                     consts: PhysicalConstants) -> float:
    """Inverse of `energy_from_root`."""
    return (energy - epsilon * p_z * consts.c) / (mass * consts.c**2)
