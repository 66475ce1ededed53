"""Dirichlet-series side of the construction.

The double sum behind the diagonal remainder has the Euler product

    F(s) = zeta(2s+1) G(s) H(s),
    H(s) = prod over the low band of (1 + 2 r~(p) p^{-1/2-s}),

with G a tame product (band factors times generic odd-prime factors) whose
logarithm stays bounded to the right of Re(s) = -1/4.  This module carries
both routes to F — the truncated double sum and the factored product — plus
the inverse-Mellin contour evaluation of S(y), the Rankin-style truncation
checks, and the resonance-gain / contour-shift diagnostic reports.

Every truncated quantity comes with an explicit tail certificate; agreement
tests compare gaps against combined certificates, never against wishes.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from . import arith, resonator, smoothing
from .resonator import CoefficientTable, ResonatorParams
from .smoothing import AccuracyError


class VanishingFactor(ZeroDivisionError):
    def __init__(self, p: int):
        super().__init__(f"Euler factor vanishes at p = {p}")
        self.p = p


# --------------------------------------------------------------------------
# zeta by Euler-Maclaurin
# --------------------------------------------------------------------------

# B_2, B_4, ..., B_24 as exact rationals
_B2K = (1 / 6, -1 / 30, 1 / 42, -1 / 30, 5 / 66, -691 / 2730, 7 / 6,
        -3617 / 510, 43867 / 798, -174611 / 330, 854513 / 138,
        -236364091 / 2730)


def zeta_em(s: complex, N: int = 50, K: int = 10) -> tuple[complex, float]:
    """(zeta(s), remainder bound) by Euler-Maclaurin with K Bernoulli terms.

    The remainder is at most |first omitted term| * |s + 2K + 1| / (sigma +
    2K + 1), valid for sigma = Re(s) > -2K.
    """
    s = complex(s)
    if s == 1:
        raise ZeroDivisionError("pole of zeta at s = 1")
    if s.real <= -2 * K + 1:
        raise AccuracyError(f"Re(s) = {s.real} too far left for K = {K}")
    out = sum(n ** -s for n in range(1, N))
    out += N ** (1 - s) / (s - 1) + 0.5 * N ** -s
    poch = s
    fact = 1.0
    for j in range(1, K + 1):
        fact *= (2 * j - 1) * (2 * j)
        out += _B2K[j - 1] / fact * poch * N ** (-s - 2 * j + 1)
        poch *= (s + 2 * j - 1) * (s + 2 * j)
    fact *= (2 * K + 1) * (2 * K + 2)
    first_omitted = abs(_B2K[K] / fact * poch) * N ** (-s.real - 2 * K - 1)
    bound = first_omitted * abs(s + 2 * K + 1) / (s.real + 2 * K + 1)
    return out, bound


def zeta(s: complex, accuracy: float = 1e-10) -> complex:
    """zeta(s) certified to `accuracy`; raises if the certificate fails."""
    for N in (50, 200, 1000):
        val, bound = zeta_em(s, N=N)
        if bound <= accuracy:
            return val
    raise AccuracyError(
        f"zeta remainder {bound:.3e} > {accuracy:.3e} at s = {s}")


def zeta_em_vec(s: np.ndarray, N: int = 50, K: int = 10):
    """Vectorized Euler-Maclaurin over an array of complex s."""
    s = np.asarray(s, dtype=complex)
    n = np.arange(1, N, dtype=float)[:, None]
    out = np.sum(n ** -s[None, :], axis=0)
    out += N ** (1 - s) / (s - 1) + 0.5 * N ** (-s.astype(complex))
    poch = s.copy()
    fact = 1.0
    for j in range(1, K + 1):
        fact *= (2 * j - 1) * (2 * j)
        out += _B2K[j - 1] / fact * poch * N ** (-s - 2 * j + 1)
        poch = poch * (s + 2 * j - 1) * (s + 2 * j)
    fact *= (2 * K + 1) * (2 * K + 2)
    bounds = (np.abs(_B2K[K] / fact * poch) * N ** (-s.real - 2 * K - 1)
              * np.abs(s + 2 * K + 1) / (s.real + 2 * K + 1))
    return out, bounds


# --------------------------------------------------------------------------
# the factored series
# --------------------------------------------------------------------------

def H_of_s(s: complex, table: CoefficientTable) -> complex:
    """Finite low-band product prod (1 + 2 r~(p) p^{-1/2-s})."""
    out = 1.0 + 0.0j
    for p in table.pminus:
        f = 1.0 + 2.0 * resonator.r_tilde(p, table) * p ** (-0.5 - s)
        if f == 0:
            raise VanishingFactor(p)
        out *= f
    return out


@lru_cache(maxsize=8)
def _odd_primes_to(pmax: int) -> np.ndarray:
    return arith.primes_up_to(pmax)[1:].astype(np.int64)


def _g_tail_pmax(sigma: float, accuracy: float,
                 cap: int = 2_000_000) -> int:
    """Smallest truncation point with tail sum of |log factor| <= accuracy.

    Each omitted log factor is at most 2 p^{-2 sigma - 2} in modulus, and
    summing that over all integers beyond P gives P^{-2 sigma - 1} * 2 /
    (2 sigma + 1).
    """
    e = 2.0 * sigma + 1.0
    if e <= 0:
        raise AccuracyError(f"Re(s) = {sigma} at or left of the -1/4 line")
    pmax = (2.0 / (e * accuracy)) ** (1.0 / e)
    if pmax > cap:
        raise AccuracyError(
            f"G tail needs primes to {pmax:.3e} > cap {cap} for accuracy "
            f"{accuracy:.1e} at Re(s) = {sigma}")
    return max(int(pmax) + 1, 100)


def _g_generic_log(s, primes: np.ndarray) -> complex:
    """Sum of log(1 - 1/((p+1) p^{2s+1})) over the given odd primes."""
    total = 0.0 + 0.0j
    p = primes.astype(float)
    for i in range(0, p.size, 4096):
        q = p[i:i + 4096]
        total += complex(np.sum(np.log(1.0 - 1.0 / ((q + 1.0) * q ** (2 * s + 1)))))
    return total


def G_of_s(s: complex, table: CoefficientTable,
           accuracy: float = 1e-8) -> complex:
    """The compensating product

        prod_{band p} (1 - p^{-2s-2} / (((p+1)/p + r(p)^2)(1 + 2 r~(p) p^{-1/2-s})))
        * prod_{odd p outside the band} (1 - 1/((p+1) p^{2s+1})),

    the infinite part truncated with a certified tail <= accuracy.
    """
    s = complex(s)
    if s.real <= -0.25 + 0.01:
        raise AccuracyError(f"Re(s) = {s.real} too close to the -1/4 line")
    pmax = _g_tail_pmax(s.real, accuracy)
    band = set(table.pminus)
    logg = 0.0 + 0.0j
    for p in table.pminus:
        rt = resonator.r_tilde(p, table)
        rp = table.r(p)
        denom = ((p + 1.0) / p + rp * rp) * (1.0 + 2.0 * rt * p ** (-0.5 - s))
        if denom == 0:
            raise VanishingFactor(p)
        logg += cmath.log(1.0 - p ** (-2 * s - 2) / denom)
    primes = _odd_primes_to(pmax)
    if band:
        primes = primes[~np.isin(primes, np.fromiter(band, dtype=np.int64))]
    logg += _g_generic_log(s, primes)
    return cmath.exp(logg)


@dataclass(frozen=True)
class FValue:
    value: complex
    tail: float

    def __complex__(self) -> complex:
        return self.value


def _smooth_sf(primes, limit: float | None = None):
    """Squarefree products of the given primes (with 1), optionally <= limit."""
    out = [1]
    for p in primes:
        ext = [n * p for n in out if limit is None or n * p <= limit]
        out.extend(ext)
    return sorted(out)


def F_direct(s: complex, table: CoefficientTable,
             ell_max: float = 1e6, m_max: int = 20_000) -> FValue:
    """The double sum, truncated, with an honest tail certificate:

        tail <= (sum_l kept |c_l| l^{-sigma}) * m_max^{-2 sigma} / (2 sigma)
              + ell_max^{-sigma} * prod(1 + 2 |r~(p)| / sqrt(p)).

    Usable only to the right of Re(s) = 0.05; the m-tail decays like
    m_max^{-2 sigma}, so do not expect miracles near the boundary.
    """
    s = complex(s)
    sigma = s.real
    if sigma < 0.05:
        raise AccuracyError(f"direct sum needs Re(s) >= 0.05, got {sigma}")
    pm = sorted(table.pminus)
    rt = {p: resonator.r_tilde(p, table) for p in pm}
    beta = {p: resonator.b_prime_factor(p, table.params) for p in pm}

    # b(m, 1) for m <= m_max, then divide out band primes dividing ell
    m = np.arange(m_max + 1, dtype=float)
    bfull = np.ones(m_max + 1)
    for p in _odd_primes_to(m_max).tolist():
        bfull[p::p] *= (beta[p] if p in beta
                        else resonator.b_prime_factor(p, table.params))
    mpow = np.zeros(m_max + 1, dtype=complex)
    mpow[1:] = m[1:] ** (-(1.0 + 2.0 * s))

    total = 0.0 + 0.0j
    abs_c = []
    stack = [(0, 1, 1.0, ())]
    while stack:
        idx, ell, coef, ps = stack.pop()
        c = coef * (2 ** len(ps)) / math.sqrt(ell) * ell ** (-s)
        abs_c.append(abs(c))
        bvec = bfull
        if ps:
            bvec = bfull.copy()
            for p in ps:
                bvec[p::p] /= beta[p]
        total += c * complex(np.sum(bvec[1:] * mpow[1:]))
        for i in range(idx, len(pm)):
            p = pm[i]
            if ell * p > ell_max:
                continue
            stack.append((i + 1, ell * p, coef * rt[p], ps + (p,)))

    m_tail = math.fsum(abs_c) * m_max ** (-2 * sigma) / (2 * sigma)
    big = 1.0
    for p in pm:
        big *= 1.0 + 2.0 * abs(rt[p]) / math.sqrt(p)
    ell_tail = ell_max ** (-sigma) * big
    return FValue(total, m_tail + ell_tail)


def F_factored(s: complex, table: CoefficientTable,
               accuracy: float = 1e-8) -> complex:
    return zeta(2 * s + 1, accuracy) * G_of_s(s, table, accuracy) * H_of_s(s, table)


def _g_log_tail(sigma: float, pmax: int) -> float:
    """Tail of the generic log-product beyond pmax, integers majorizing primes."""
    e = 2.0 * sigma + 1.0
    if e <= 0:
        raise AccuracyError(f"Re(s) = {sigma} at or left of the -1/4 line")
    return 2.0 * pmax ** -e / e


def F_factored_bounded(s: complex, table: CoefficientTable,
                       pmax: int = 200_000) -> tuple[complex, float]:
    """zeta(2s+1) G H with G truncated at a fixed point; returns the value
    and an absolute error certificate (tail of log-G times the modulus)."""
    s = complex(s)
    zv, zb = zeta_em(2 * s + 1)
    band = set(table.pminus)
    logg = 0.0 + 0.0j
    for p in table.pminus:
        rt = resonator.r_tilde(p, table)
        rp = table.r(p)
        denom = ((p + 1.0) / p + rp * rp) * (1.0 + 2.0 * rt * p ** (-0.5 - s))
        if denom == 0:
            raise VanishingFactor(p)
        logg += cmath.log(1.0 - p ** (-2 * s - 2) / denom)
    primes = _odd_primes_to(pmax)
    if band:
        primes = primes[~np.isin(primes, np.fromiter(band, dtype=np.int64))]
    logg += _g_generic_log(s, primes)
    gh = cmath.exp(logg) * H_of_s(s, table)
    tail = _g_log_tail(s.real, pmax)
    cert = abs(zv * gh) * (math.exp(tail) - 1.0) + zb * abs(gh) * math.exp(tail)
    return zv * gh, cert


# --------------------------------------------------------------------------
# contour evaluation of S(y)
# --------------------------------------------------------------------------

def _f_factored_vec(svals: np.ndarray, table: CoefficientTable,
                    accuracy: float = 1e-7) -> np.ndarray:
    """Vectorized zeta(2s+1) G(s) H(s) over an array of s on one line."""
    svals = np.asarray(svals, dtype=complex)
    zv, _ = zeta_em_vec(2 * svals + 1)
    out = zv
    for p in table.pminus:
        out = out * (1.0 + 2.0 * resonator.r_tilde(p, table)
                     * np.exp(-(0.5 + svals) * math.log(p)))
        rp = table.r(p)
        rt = resonator.r_tilde(p, table)
        denom = ((p + 1.0) / p + rp * rp) * (
            1.0 + 2.0 * rt * np.exp(-(0.5 + svals) * math.log(p)))
        out = out * (1.0 - np.exp(-(2 * svals + 2) * math.log(p)) / denom)
    sigma = float(np.min(svals.real))
    pmax = _g_tail_pmax(sigma, accuracy)
    primes = _odd_primes_to(pmax)
    band = np.fromiter(table.pminus, dtype=np.int64)
    primes = primes[~np.isin(primes, band)]
    logg = np.zeros(svals.shape, dtype=complex)
    for i in range(0, primes.size, 2048):
        q = primes[i:i + 2048].astype(float)
        logg += np.sum(
            np.log(1.0 - 1.0 / ((q[:, None] + 1.0)
                                * np.exp((2 * svals[None, :] + 1) * np.log(q)[:, None]))),
            axis=0)
    return out * np.exp(logg)


@dataclass(frozen=True)
class ContourValue:
    value: float
    err_estimate: float


def S_via_contour(y: float, table: CoefficientTable, sigma_line: float = 0.25,
                  tmax: float = 200.0, accuracy: float = 1e-7) -> ContourValue:
    """S(y) as (1/2 pi i) int y^s phi~(s) F(s) ds on Re(s) = sigma_line,
    with F evaluated through the factorization.  Dual route to the direct
    lattice sum; the error estimate combines the quadrature tail (decay of
    phi~) with the G truncation certificate.
    """
    if sigma_line <= 0:
        raise ValueError("need sigma_line > 0 (right of the pole)")
    tf = smoothing.canonical_phi()
    nodes, weights = smoothing.vertical_line_nodes(tmax)
    s = sigma_line + 1j * nodes
    mell = smoothing.mellin_phi(s, accuracy=1e-10)
    fv = _f_factored_vec(s, table, accuracy=accuracy)
    integ = np.real(np.exp(s * math.log(y)) * mell * fv)
    # even in t by Schwarz reflection: double the t > 0 half-line
    val = float(np.dot(weights, integ)) / math.pi
    tail_phi = abs(smoothing.mellin_phi(complex(sigma_line, tmax), accuracy=1e-10))
    supf = float(np.max(np.abs(fv)))
    err = y ** sigma_line * (tail_phi * supf * 10.0 + 2 * tmax * accuracy * supf) / math.pi
    return ContourValue(val, err)


@dataclass(frozen=True)
class ContourShiftReport:
    y: float
    circle_term: float
    shifted_term: float
    total: float
    right_line_value: float
    gap: float
    certificate: float


def contour_shift_check(y: float, table: CoefficientTable,
                        params: ResonatorParams,
                        n_circle: int = 512, tmax: float = 200.0) -> ContourShiftReport:
    """Shift the line to Re(s) = -1/(log log D)^2: a small circle at the
    origin picks up the pole, the shifted line carries the rest, and the sum
    must reproduce the right-line value."""
    lld2 = math.log(math.log(params.D)) ** 2
    sigma_left = -1.0 / lld2
    if sigma_left <= -0.24:
        raise AccuracyError("shifted line is left of the G domain")
    # any circle around the pole works; clamp to stay inside the G domain
    rho = min(1.0 / math.log(max(params.x, y, 3.0)), 0.15)

    # closed circle, trapezoid (spectrally accurate for a contour integral)
    th = np.arange(n_circle) * (2 * math.pi / n_circle)
    s = rho * np.exp(1j * th)
    mell = smoothing.mellin_phi(s)
    pairs = [F_factored_bounded(complex(sv), table) for sv in s]
    fv = np.array([v for v, _ in pairs])
    circ_cert = rho * max(c for _, c in pairs) * float(np.max(np.abs(mell)))
    circ = np.mean(np.exp(s * math.log(y)) * mell * fv * s).real

    g_acc = 1e-3  # the shifted line sits near the domain edge; tail is costly
    nodes, weights = smoothing.vertical_line_nodes(tmax)
    sL = sigma_left + 1j * nodes
    mellL = smoothing.mellin_phi(sL)
    fvL = _f_factored_vec(sL, table, accuracy=g_acc)
    integ = np.exp(sL * math.log(y)) * mellL * fvL
    shifted = float(np.dot(weights, np.real(integ))) / math.pi
    # truncating log G at accuracy g_acc perturbs each node relatively;
    # weight that by the decaying integrand rather than its sup
    line_cert = (math.exp(g_acc) - 1.0) * float(
        np.dot(weights, np.abs(integ))) / math.pi

    right = S_via_contour(y, table, tmax=tmax)
    total = circ + shifted
    cert = right.err_estimate + line_cert + circ_cert + 1e-6
    return ContourShiftReport(y, circ, shifted, total, right.value,
                              abs(total - right.value), cert)


# --------------------------------------------------------------------------
# Rankin-style truncation checks
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class RankinReport:
    identity_gap: float
    tail_lhs: float
    tail_rhs: float
    square_gap_flat: float
    square_gap_weighted: float


def verify_rankin_truncations(table: CoefficientTable, params: ResonatorParams,
                              M1: float | None = None,
                              M2: float | None = None) -> RankinReport:
    """Three finite checks on the resonator coefficient mass.

    (i)  sum over all band-smooth squarefree n of |r(n)| d(n)/sqrt(n)
         equals prod_p (1 + 2|r(p)|/sqrt(p)) exactly;
    (ii) the tail beyond M1 obeys the Rankin bound
         M1^{-alpha} prod_p (1 + 2|r(p)| p^{alpha - 1/2}),
         alpha = 1/(log log D)^2;
    (iii) sum_{n <= M2} r(n)^2 g(n) approaches prod(1 + r(p)^2 g(p)) for
         g = 1 and g(p) = p/(p+1).

    Enumerates every smooth integer, so the table must be small.
    """
    primes = sorted(set(table.pminus) | set(table.pplus))
    if len(primes) > 20:
        raise AccuracyError(f"{len(primes)} primes; exhaustive check capped at 20")
    for p in table.pplus:
        if p not in table.r_at_prime:
            raise resonator.ParamsError("assign signs before the Rankin checks")
    rvals = {p: table.r(p) for p in primes}
    items = [(1, 1.0)]
    for p in primes:
        items += [(n * p, v * rvals[p]) for n, v in items]

    lhs = math.fsum(abs(v) * arith.divisor_count(arith.factorize(n)) / math.sqrt(n)
                    for n, v in items)
    prod = 1.0
    for p in primes:
        prod *= 1.0 + 2.0 * abs(rvals[p]) / math.sqrt(p)
    identity_gap = abs(lhs - prod) / prod

    if M1 is None:
        M1 = 2.0 * max(n for n, _ in items)
    alpha = 1.0 / math.log(math.log(params.D)) ** 2
    tail_lhs = math.fsum(
        abs(v) * arith.divisor_count(arith.factorize(n)) / math.sqrt(n)
        for n, v in items if n > M1)
    rank = 1.0
    for p in primes:
        rank *= 1.0 + 2.0 * abs(rvals[p]) * p ** (alpha - 0.5)
    tail_rhs = M1 ** -alpha * rank

    if M2 is None:
        M2 = max(n for n, _ in items)
    gaps = []
    for g in (lambda p: 1.0, lambda p: p / (p + 1.0)):
        ssum = math.fsum(v * v * math.prod(g(q) for q in _prime_list(n, primes))
                         for n, v in items if n <= M2)
        sprod = 1.0
        for p in primes:
            sprod *= 1.0 + rvals[p] ** 2 * g(p)
        gaps.append(abs(ssum - sprod) / sprod)
    return RankinReport(identity_gap, tail_lhs, tail_rhs, gaps[0], gaps[1])


def _prime_list(n: int, primes) -> list:
    return [p for p in primes if n % p == 0]


# --------------------------------------------------------------------------
# resonance gain and the sigma_2 bound shape
# --------------------------------------------------------------------------

def trig_product(theta: float) -> float:
    """(2 cos t + 1) cos t; equals 1 + cos t + cos 2t pointwise."""
    c = math.cos(theta)
    return (2.0 * c + 1.0) * c


TRIG_MIN = (3.0 - math.sqrt(3.0)) / 2.0  # min over [5 pi/6, 7 pi/6], at the endpoints


@dataclass(frozen=True)
class ResonanceReport:
    t_center: float
    t_best: float
    ratio: float
    log_ratio: float
    band_sum: float
    trig_min_observed: float


def resonance_bound(table: CoefficientTable, params: ResonatorParams,
                    t_window: float | None = None, grid: int = 41) -> ResonanceReport:
    """Evaluate |F(sigma + it)|^2 / prod(1 + 2|r~(p)|/sqrt(p)) near the
    resonance point t = 1/(2 log L), sigma = 1/(log x)^2, and the band sum
    sum_p (1 + cos theta_p + cos 2 theta_p)/(p log p), with
    theta_p = log p / (2 log L) in [5 pi/6, 7 pi/6).
    The trig identity makes every band summand at least (3 - sqrt(3))/2
    divided by p log p.
    """
    L = params.L
    t0 = 1.0 / (2.0 * math.log(L))
    if t_window is None:
        t_window = 1.0 / math.log(math.log(params.D)) ** 2
    sigma = 1.0 / math.log(params.x) ** 2
    denom = 1.0
    for p in table.pminus:
        denom *= 1.0 + 2.0 * abs(resonator.r_tilde(p, table)) / math.sqrt(p)
    ts = np.linspace(t0 - t_window, t0 + t_window, grid)
    fv = _f_factored_vec(sigma + 1j * ts, table, accuracy=1e-6)
    ratios = np.abs(fv) ** 2 / denom
    i = int(np.argmax(ratios))
    theta = {p: math.log(p) / (2.0 * math.log(L)) for p in table.pminus}
    band_sum = math.fsum(
        trig_product(theta[p]) / (p * math.log(p)) for p in table.pminus)
    tmin = min(trig_product(theta[p]) for p in table.pminus)
    return ResonanceReport(t0, float(ts[i]), float(ratios[i]),
                           math.log(float(ratios[i])), band_sum, tmin)


@dataclass(frozen=True)
class Sigma2BoundReport:
    circle_sup_H: float
    circle_sup_relog_H: float
    line_sup_H: float
    C1: float
    C2: float
    max_violation: float


def sigma2_bound_check(table: CoefficientTable, params: ResonatorParams,
                       y_grid, kernel_S, constants: tuple[float, float] | None = None
                       ) -> Sigma2BoundReport:
    """Both terms of the contour-shift bound for S(y):

        |S(y)| <= C1 * log(max(x, y)) * sup_{|s| = 1/log max(x,y)} |H|
                + C2 * (llD)^2 exp(-log y / (llD)^2) * sup_line |H|,

    llD = log log D.  With `constants` unset, fit the smallest C1 = C2
    making the bound hold on the grid and report; with constants given,
    report the worst violation (<= 0 means the bound holds).
    """
    lld2 = math.log(math.log(params.D)) ** 2
    sigma_left = -1.0 / lld2
    th = np.linspace(0, 2 * math.pi, 257)
    sup_c = 0.0
    relog = -math.inf
    for y in y_grid:
        rho = 1.0 / math.log(max(params.x, y, 3.0))
        hv = [H_of_s(complex(rho * math.cos(t), rho * math.sin(t)), table)
              for t in th]
        sup_c = max(sup_c, max(abs(h) for h in hv))
        relog = max(relog, max(math.log(abs(h)) for h in hv))
    ts = np.linspace(-50, 50, 501)
    sup_l = max(abs(H_of_s(complex(sigma_left, t), table)) for t in ts)

    def bound(y, c1, c2):
        t1 = math.log(max(params.x, y)) * sup_c
        t2 = lld2 * math.exp(-math.log(y) / lld2) * sup_l
        return c1 * t1 + c2 * t2

    svals = {y: abs(kernel_S(y)) for y in y_grid}
    if constants is None:
        c = max(svals[y] / bound(y, 1.0, 1.0) for y in y_grid)
        c1 = c2 = c
        viol = 0.0
    else:
        c1, c2 = constants
        viol = max(svals[y] - bound(y, c1, c2) for y in y_grid)
    return Sigma2BoundReport(sup_c, relog, sup_l, c1, c2, viol)
