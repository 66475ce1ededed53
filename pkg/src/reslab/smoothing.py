"""Smooth cutoffs and their transforms.

The canonical cutoff is the exp-glue bump

    phi(x) = 1                                   x <= 1
           = f(2-x) / (f(2-x) + f(x-1))          1 < x < 2,  f(t) = exp(-1/t)
           = 0                                   x >= 2

which is C-infinity, equals 1 on [0, 1] and 0 on [2, inf), and is monotone
nonincreasing in between.  psi(x) = phi(x) - phi(x/2) is supported on [1, 4]
and is nonpositive.  The Mellin transform of phi has a single simple pole at
s = 0 with residue 1 and decays faster than any power of |Im s| on vertical
lines; it is evaluated through the integrated-by-parts form

    phi~(s) = -(1/s) * int_1^2 phi'(u) u^s du.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np
from scipy.special import gammaincc


def _as_out(x, out):
    return float(out) if np.ndim(x) == 0 else out


def phi(x):
    """The canonical smooth cutoff; accepts scalars or arrays."""
    xa = np.asarray(x, dtype=float)
    out = np.zeros(xa.shape)
    out[xa <= 1.0] = 1.0
    mid = (xa > 1.0) & (xa < 2.0)
    if np.any(mid):
        xm = xa[mid]
        a = np.exp(-1.0 / (2.0 - xm))
        b = np.exp(-1.0 / (xm - 1.0))
        out[mid] = a / (a + b)
    return _as_out(x, out)


def phi_prime(x):
    """Derivative of phi; vanishes outside (1, 2).

    On (1, 2), phi = 1/(1 + e^g) with g = 1/(2-x) - 1/(x-1), so
    phi' = -phi (1 - phi) g'.
    """
    xa = np.asarray(x, dtype=float)
    out = np.zeros(xa.shape)
    mid = (xa > 1.0) & (xa < 2.0)
    if np.any(mid):
        xm = xa[mid]
        g = 1.0 / (2.0 - xm) - 1.0 / (xm - 1.0)
        gp = 1.0 / (2.0 - xm) ** 2 + 1.0 / (xm - 1.0) ** 2
        g = np.clip(g, -700.0, 700.0)
        s = 1.0 / (1.0 + np.exp(g))
        out[mid] = -s * (1.0 - s) * gp
    return _as_out(x, out)


def psi(x):
    """psi(x) = phi(x) - phi(x/2); compactly supported in [1, 4], <= 0."""
    xa = np.asarray(x, dtype=float)
    return _as_out(x, phi(xa) - phi(xa / 2.0))


def psi_sigma(x, sigma):
    """x^sigma * psi(x) for x > 0, |sigma| <= 1/2."""
    xa = np.asarray(x, dtype=float)
    if np.any(xa <= 0):
        raise ValueError("psi_sigma needs x > 0")
    return _as_out(x, xa**sigma * psi(xa))


@lru_cache(maxsize=8)
def _gauss_panels(npanels: int, order: int):
    """Gauss-Legendre nodes/weights on [1, 2] split into equal panels."""
    z, w = np.polynomial.legendre.leggauss(order)
    edges = np.linspace(1.0, 2.0, npanels + 1)
    nodes = []
    weights = []
    for a, b in zip(edges[:-1], edges[1:]):
        nodes.append(0.5 * (b - a) * z + 0.5 * (a + b))
        weights.append(0.5 * (b - a) * w)
    return np.concatenate(nodes), np.concatenate(weights)


class AccuracyError(RuntimeError):
    """Requested quadrature accuracy could not be certified."""


def _mellin_raw(s, npanels):
    """int_1^2 phi'(u) u^s du on a fixed composite Gauss rule.

    Vectorized over an array of s values.
    """
    u, w = _gauss_panels(npanels, 32)
    sa = np.atleast_1d(np.asarray(s, dtype=complex))
    # (nodes, s) matrix of u^s
    mat = np.exp(np.log(u)[:, None] * sa[None, :])
    vals = (phi_prime(u) * w) @ mat
    return vals


def mellin_phi(s, accuracy: float = 1e-10):
    """Mellin transform phi~(s) = int_0^inf phi(u) u^{s-1} du, continued
    across the strip via integration by parts; s = 0 is the simple pole.

    The panel count is doubled until two successive composite rules agree
    within `accuracy`; the last difference is the error certificate.
    """
    sa = np.atleast_1d(np.asarray(s, dtype=complex))
    if np.any(sa == 0):
        raise ValueError("phi~ has a pole at s = 0; use mellin_phi_reg")
    if np.any(sa.real <= -10):
        raise ValueError("mellin_phi supported for Re(s) > -10")
    raw = _mellin_final(sa, accuracy)
    out = -raw / sa
    return complex(out[0]) if np.ndim(s) == 0 else out


def _mellin_final(sa, accuracy):
    npanels = _panels_for(sa)
    prev = _mellin_raw(sa, npanels)
    for _ in range(6):
        npanels *= 2
        cur = _mellin_raw(sa, npanels)
        if np.max(np.abs(cur - prev)) <= accuracy:
            return cur
        prev = cur
        if npanels > 2048:
            break
    raise AccuracyError(f"Mellin quadrature did not reach {accuracy}")


def _panels_for(sa):
    # resolve the oscillation u^{it} = e^{it log u}; log 2 radians per unit t
    tmax = float(np.max(np.abs(sa.imag))) if sa.size else 0.0
    return max(4, int(tmax * math.log(2.0) / 40) + 4)


def mellin_phi_reg(s, accuracy: float = 1e-10):
    """phi~(s) - 1/s, which is analytic across s = 0.

    Uses  phi~(s) - 1/s = -(1/s) [ int phi'(u) u^s du + 1 ]
                        = -int phi'(u) log(u) E(s log u) du
    with E(z) = (e^z - 1)/z, stable for small s.
    """
    sa = np.atleast_1d(np.asarray(s, dtype=complex))
    u, w = _gauss_panels(max(8, _panels_for(sa)), 32)
    lu = np.log(u)
    z = sa[None, :] * lu[:, None]
    small = np.abs(z) < 1e-6
    ez = np.where(small, 1.0 + z / 2.0, np.expm1(z) / np.where(small, 1.0, z))
    vals = -((phi_prime(u) * w * lu) @ ez)
    return complex(vals[0]) if np.ndim(s) == 0 else vals


def afe_weight_V(x):
    """Central-point weight V(x) = Gamma(1/4, x^2) / Gamma(1/4).

    Regularized upper incomplete gamma: V(0) = 1, 0 <= V <= 1, and V decays
    like exp(-x^2) up to powers.
    """
    xa = np.asarray(x, dtype=float)
    if np.any(xa < 0):
        raise ValueError("afe_weight_V needs x >= 0")
    return _as_out(x, gammaincc(0.25, xa * xa))


def _max_u_phi_prime() -> float:
    """sup over u of |u phi'(u)|, the smoothness certificate for phi."""
    u = np.linspace(1.0, 2.0, 200001)[1:-1]
    vals = np.abs(u * phi_prime(u))
    i = int(np.argmax(vals))
    # golden-section polish around the grid maximum
    lo, hi = u[max(i - 2, 0)], u[min(i + 2, len(u) - 1)]
    g = (math.sqrt(5) - 1) / 2

    def f(t):
        return -abs(t * phi_prime(t))

    c, d = hi - g * (hi - lo), lo + g * (hi - lo)
    for _ in range(80):
        if f(c) < f(d):
            hi = d
        else:
            lo = c
        c, d = hi - g * (hi - lo), lo + g * (hi - lo)
    best = -f((lo + hi) / 2)
    return max(best, float(vals[i]))


@dataclass(frozen=True)
class TestFunction:
    """A smooth cutoff with evaluation, derivative, support bound, and the
    numerically computed certificate sup |u f'(u)|."""

    value: callable = phi
    deriv: callable = phi_prime
    support_hi: float = 2.0
    c_phi: float = field(default_factory=_max_u_phi_prime)

    def __call__(self, x):
        return self.value(x)


@lru_cache(maxsize=1)
def canonical_phi() -> TestFunction:
    return TestFunction()


def psi_l1_log(accuracy: float = 1e-8) -> float:
    """int_0^inf |psi(u)| du/u, by quadrature (psi <= 0 so this is -int psi du/u)."""
    from scipy.integrate import quad

    val, err = quad(lambda u: -psi(u) / u, 1.0, 4.0, epsabs=accuracy / 10, limit=200)
    if err > accuracy:
        raise AccuracyError(f"psi L1(log) quadrature error {err} > {accuracy}")
    return val


def vertical_line_nodes(tmax: float, panel: float = 0.5, order: int = 16):
    """Gauss-Legendre nodes/weights covering t in [0, tmax] by equal panels."""
    z, w = np.polynomial.legendre.leggauss(order)
    npan = max(1, int(math.ceil(tmax / panel)))
    edges = np.linspace(0.0, tmax, npan + 1)
    a = edges[:-1][:, None]
    b = edges[1:][:, None]
    nodes = (0.5 * (b - a) * z[None, :] + 0.5 * (a + b)).ravel()
    weights = (0.5 * (b - a) * np.broadcast_to(w, (npan, order))).ravel()
    return nodes, weights


def inverse_mellin_phi(x: float, sigma: float = 0.25, tmax: float = 300.0,
                       accuracy: float = 1e-10) -> float:
    """Mellin inversion (1/2 pi i) int_(sigma) x^{-s} phi~(s) ds, truncated at
    |Im s| = tmax.  Spectral check of the transform; returns a real value."""
    t, w = vertical_line_nodes(tmax)
    s = sigma + 1j * t
    vals = mellin_phi(s, accuracy=accuracy)
    integrand = (x ** (-s) * vals).real  # even in t after taking real part
    return (2.0 / (2 * math.pi)) * float(np.dot(w, integrand))
