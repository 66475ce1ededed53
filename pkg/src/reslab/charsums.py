"""Quadratic forms over the discriminant family and the partial sums that
drive the sign choices.

The family is d in (D/2, D] with 2d squarefree, character chi_{8d}.  The
two forms are

    Den = sum_d mu^2(2d) R(d)^2,
    Num = sum_d mu^2(2d) R(d)^2 * T(d),      T(d) = sum_n chi_{8d}(n) phi(n/x)/sqrt(n),

evaluated with the d-outer loop (mathematically identical to expanding
R(d)^2 and summing characters first, but exponentially cheaper).  A
weighted-average pigeonhole then exhibits a single discriminant whose
truncated smoothed sum is at most Num/Den.

All floating accumulation uses exact compensated summation (math.fsum) over
fixed, contiguous d-chunks; the cross-chunk reduction order is fixed by
chunk index, so results are bit-identical regardless of worker count.
"""

from __future__ import annotations

import hashlib
import json
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np
from scipy.integrate import quad

from . import arith, resonator, smoothing
from .resonator import CoefficientTable, ResonatorParams, SignState


class WorkEstimateError(RuntimeError):
    """A brute-force path was asked to do more work than its guard allows."""


class EmptyFamilyError(RuntimeError):
    """No admissible discriminant carries positive weight."""


# guards for the brute-force paths
MAX_D_EXACT = 10**8
MAX_SUPPORT = 10**5
MAX_X = 10**6


@lru_cache(maxsize=100_000)
def _char_table(n: int) -> np.ndarray:
    """(m|n) for m = 0..n-1, n odd positive; the symbol is periodic mod n."""
    assert n % 2 == 1 and n >= 1
    return np.array([arith.kronecker(m, n) for m in range(n)], dtype=np.int8)


# --------------------------------------------------------------------------
# partial-sum kernel
# --------------------------------------------------------------------------

class PartialSumKernel:
    """Evaluates S, S* and the dyadic difference S~ for a coefficient table.

    Only the low band enters: the outer sum runs over squarefree integers
    composed of low-band primes (the coprimality condition against the high
    band), with coefficient r~(l) d(l)/sqrt(l), and the inner sum over m
    carries the multiplicative weight b(m, l)/m under the cutoff
    phi(l m^2 / y).
    """

    def __init__(self, table: CoefficientTable, test_fn: smoothing.TestFunction | None = None):
        self.table = table
        self.params = table.params
        self.test_fn = test_fn or smoothing.canonical_phi()
        self._rt = {p: resonator.r_tilde(p, table) for p in table.pminus}
        self._beta = {}
        self._ells = [(1, 1.0, frozenset())]
        self._ell_limit = 1.0
        self._spf = arith.smallest_prime_factor(64)

    # -- lazy tables -------------------------------------------------------

    def _ensure(self, y: float) -> None:
        lim = 2.0 * y
        if lim > self._ell_limit:
            self._extend_ells(lim)
            self._ell_limit = lim
        mmax = math.isqrt(int(2.0 * y)) + 1
        if mmax >= len(self._spf):
            self._spf = arith.smallest_prime_factor(2 * mmax)

    def _extend_ells(self, lim: float) -> None:
        primes = sorted(self.table.pminus)
        out = [(1, 1.0, frozenset())]

        def rec(idx, n, coef, ps):
            for i in range(idx, len(primes)):
                p = primes[i]
                m = n * p
                if m > lim:
                    break
                c = coef * self._rt[p] * 2.0
                nps = ps | {p}
                out.append((m, c, nps))
                rec(i + 1, m, c, nps)

        rec(0, 1, 1.0, frozenset())
        # store coefficient r~(l) d(l) / sqrt(l)
        self._ells = sorted((n, c / math.sqrt(n), ps) for n, c, ps in out)

    def _b(self, m: int, ell_primes: frozenset) -> float:
        """b(m, l): product over odd p | m with p not dividing l."""
        out = 1.0
        spf = self._spf
        while m > 1:
            p = int(spf[m])
            while m % p == 0:
                m //= p
            if p != 2 and p not in ell_primes:
                beta = self._beta.get(p)
                if beta is None:
                    beta = resonator.b_prime_factor(p, self.params)
                    self._beta[p] = beta
                out *= beta
        return out

    # -- the sums ----------------------------------------------------------

    def S(self, y: float) -> float:
        """S(y) = sum_l c_l sum_m b(m,l)/m phi(l m^2 / y)."""
        if y < 0.5:
            return 0.0
        self._ensure(y)
        lim = 2.0 * y
        phi = self.test_fn.value
        terms = []
        for ell, coef, ps in self._ells:
            if ell > lim:
                break
            mmax = math.isqrt(int(lim / ell))
            for m in range(1, mmax + 1):
                u = ell * m * m / y
                w = phi(u)
                if w != 0.0:
                    terms.append(coef * self._b(m, ps) / m * w)
        return math.fsum(terms)

    def S_star(self, y: float) -> float:
        """Absolute-value companion: all cutoffs replaced by the window
        m^2 <= 2y/l, coefficients in absolute value.  Nonnegative and
        nondecreasing in y."""
        if y < 0.5:
            return 0.0
        self._ensure(y)
        lim = 2.0 * y
        terms = []
        for ell, coef, ps in self._ells:
            if ell > lim:
                break
            mmax = math.isqrt(int(lim / ell))
            for m in range(1, mmax + 1):
                terms.append(abs(coef) * self._b(m, ps) / m)
        return math.fsum(terms)

    def S_tilde(self, y: float, via: str = "psi") -> float:
        """Dyadic difference, either through psi directly or as S(y) - S(2y)."""
        if via == "difference":
            return self.S(y) - self.S(2.0 * y)
        if y < 0.25:
            return 0.0
        self._ensure(2.0 * y)
        lim = 4.0 * y
        terms = []
        for ell, coef, ps in self._ells:
            if ell > lim:
                break
            mmax = math.isqrt(int(lim / ell))
            for m in range(1, mmax + 1):
                u = ell * m * m / y
                w = smoothing.psi(u)
                if w != 0.0:
                    terms.append(coef * self._b(m, ps) / m * w)
        return math.fsum(terms)

    def y_dS(self, y: float) -> float:
        """y * dS/dy, by exact termwise differentiation of the cutoff."""
        if y < 0.5:
            return 0.0
        self._ensure(y)
        lim = 2.0 * y
        dphi = self.test_fn.deriv
        terms = []
        for ell, coef, ps in self._ells:
            if ell > lim:
                break
            mmax = math.isqrt(int(lim / ell))
            for m in range(1, mmax + 1):
                u = ell * m * m / y
                dp = dphi(u)
                if dp != 0.0:
                    terms.append(-coef * self._b(m, ps) / m * u * dp)
        return math.fsum(terms)


def S_of_y(y: float, kernel: PartialSumKernel) -> float:
    return kernel.S(y)


def S_star(y: float, kernel: PartialSumKernel) -> float:
    return kernel.S_star(y)


def S_tilde(y: float, kernel: PartialSumKernel, via: str = "psi") -> float:
    return kernel.S_tilde(y, via=via)


def derivative_bound_check(y: float, kernel: PartialSumKernel) -> tuple[float, float]:
    """(lhs, rhs) with lhs = |y dS/dy| and rhs = C_phi * S*(y)."""
    lhs = abs(kernel.y_dS(y))
    rhs = kernel.test_fn.c_phi * kernel.S_star(y)
    return lhs, rhs


# --------------------------------------------------------------------------
# sigma_1 and sigma_2
# --------------------------------------------------------------------------

def sigma1(params: ResonatorParams, table: CoefficientTable, signs: SignState,
           kernel: PartialSumKernel | None = None) -> float:
    """(2/(log x)^2) sum over high-band p of (eps_p / p) S(x/p).

    With the sign rule in force every term is -|S(x/p)|/p, so the total is
    nonpositive (ties S = 0 contribute zero either way).
    """
    kernel = kernel or PartialSumKernel(table)
    x = params.x
    pref = 2.0 / math.log(x) ** 2
    return pref * math.fsum(
        signs.epsilon[p] / p * kernel.S(x / p) for p in table.pplus
    )


def sigma2(params: ResonatorParams, kernel: PartialSumKernel) -> float:
    """The diagonal remainder; identically S(x)."""
    return kernel.S(params.x)


def sigma2_display(params: ResonatorParams, table: CoefficientTable,
                   test_fn: smoothing.TestFunction | None = None) -> float:
    """Independent plain-loop evaluation of the sigma_2 double sum, used as
    a cross-check on the kernel: iterates candidate l directly and factors
    by trial division instead of using the kernel's caches."""
    test_fn = test_fn or smoothing.canonical_phi()
    x = params.x
    lim = int(2.0 * x)
    pm = sorted(table.pminus)
    total = 0.0
    for ell in range(1, lim + 1, 2):
        m_ = ell
        coef = 1.0
        nfac = 0
        for p in pm:
            if m_ % p == 0:
                m_ //= p
                if m_ % p == 0:
                    coef = 0.0
                    break
                coef *= resonator.r_tilde(p, table)
                nfac += 1
        if m_ != 1 or coef == 0.0:
            continue
        coef *= 2.0**nfac / math.sqrt(ell)
        m = 1
        while ell * m * m <= lim:
            w = test_fn.value(ell * m * m / x)
            if w != 0.0:
                b = 1.0
                mm = m
                q = 3
                while q * q <= mm:
                    if mm % q == 0:
                        while mm % q == 0:
                            mm //= q
                        if ell % q != 0:
                            b *= resonator.b_prime_factor(q, params)
                    q += 2
                if mm % 2 == 0:
                    while mm % 2 == 0:
                        mm //= 2
                if mm > 1 and ell % mm != 0:
                    b *= resonator.b_prime_factor(mm, params)
                total += coef * b / m * w
            m += 1
    return total


# --------------------------------------------------------------------------
# single-discriminant sums
# --------------------------------------------------------------------------

def truncated_sum(d: int, x: float, test_fn: smoothing.TestFunction | None = None) -> float:
    """T(d) = sum_{n <= 2x} chi_{8d}(n) phi(n/x)/sqrt(n); even n drop out."""
    arith.check_2d_squarefree(d)
    if x < 1:
        raise ValueError(f"need x >= 1, got {x}")
    test_fn = test_fn or smoothing.canonical_phi()
    m = 8 * d
    terms = []
    for n in range(1, int(2 * x) + 1, 2):
        w = test_fn.value(n / x)
        if w != 0.0:
            c = arith.kronecker(m, n)
            if c:
                terms.append(c * w / math.sqrt(n))
    return math.fsum(terms)


def big_R(d: int, table: CoefficientTable) -> float:
    """R(d) = sum over the enumerated support of r(n) chi_{8d}(n)."""
    arith.check_2d_squarefree(d)
    if table.support is None:
        raise ValueError("support not enumerated; call table.with_support()")
    m = 8 * d
    return math.fsum(
        r * arith.kronecker(m, n) for n, r in table.support
    )


# --------------------------------------------------------------------------
# chunked family scan
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class FamilyScan:
    denom: float
    numer: float
    min_value: float
    min_d: int
    admissible: int
    chunk_count: int


def _scan_state(params, table, test_fn):
    x = params.x
    sup_ns = np.array([n for n, _ in table.support], dtype=np.int64)
    sup_rs = np.array([r for _, r in table.support])
    tr_ns = np.arange(1, int(2 * x) + 1, 2, dtype=np.int64)
    tr_cf = np.array([test_fn.value(int(n) / x) / math.sqrt(int(n)) for n in tr_ns])
    keep = tr_cf != 0.0
    tr_ns, tr_cf = tr_ns[keep], tr_cf[keep]
    tables = {int(n): _char_table(int(n))
              for n in set(sup_ns.tolist()) | set(tr_ns.tolist())}
    return {
        "sup_ns": sup_ns, "sup_rs": sup_rs,
        "tr_ns": tr_ns, "tr_cf": tr_cf,
        "tables": tables,
    }


def _chunk_arrays(lo: int, hi: int, state: dict):
    """Admissible d in [lo, hi] with weights R(d)^2 and truncated sums."""
    d = np.arange(lo | 1, hi + 1, 2, dtype=np.int64)
    if d.size:
        sf = arith.squarefree_sieve(lo, hi)[d - lo].astype(bool)
        d = d[sf]
    if d.size == 0:
        return d, np.zeros(0), np.zeros(0)
    m8 = 8 * d
    R = np.zeros(d.size)
    for n, r in zip(state["sup_ns"].tolist(), state["sup_rs"].tolist()):
        R += r * state["tables"][n][m8 % n]
    t = np.zeros(d.size)
    for n, c in zip(state["tr_ns"].tolist(), state["tr_cf"].tolist()):
        t += c * state["tables"][n][m8 % n]
    return d, R * R, t


def _scan_chunk(lo: int, hi: int, state: dict):
    """One contiguous d-chunk [lo, hi]; deterministic for fixed (lo, hi)."""
    d, w, t = _chunk_arrays(lo, hi, state)
    if d.size == 0:
        return (0.0, 0.0, math.inf, -1, 0)
    denom = math.fsum(w.tolist())
    numer = math.fsum((w * t).tolist())
    pos = w > 0
    if np.any(pos):
        tp = np.where(pos, t, math.inf)
        i = int(np.argmin(tp))
        mval, md = float(t[i]), int(d[i])
    else:
        mval, md = math.inf, -1
    return (denom, numer, mval, md, int(d.size))


_WORKER_STATE = None


def _init_worker(state):
    global _WORKER_STATE
    _WORKER_STATE = state


def _worker_chunk(args):
    lo, hi = args
    return _scan_chunk(lo, hi, _WORKER_STATE)


def default_workers() -> int:
    env = os.environ.get("RESLAB_WORKERS")
    if env:
        w = int(env)
        if w < 1:
            raise ValueError("RESLAB_WORKERS must be a positive integer")
        return w
    return os.cpu_count() or 1


def scan_digest(params: ResonatorParams, table: CoefficientTable, x: float) -> str:
    payload = {
        "D": params.D, "x": x, "Z": params.Z, "L": params.L, "B": params.B,
        "support": [[int(n), float(r)] for n, r in (table.support or ())],
    }
    return hashlib.sha256(
        json.dumps(payload, sort_keys=True).encode()
    ).hexdigest()


def scan_family(params: ResonatorParams, table: CoefficientTable,
                test_fn: smoothing.TestFunction | None = None,
                workers: int | None = None, chunk_size: int = 1 << 17,
                checkpoint: str | None = None) -> FamilyScan:
    """Denominator, numerator, and weighted minimum over the whole family.

    Chunks are reduced in index order; each chunk is an exact compensated
    sum, so the result does not depend on the worker count.  An optional
    checkpoint file (JSON, digest-guarded) lets an interrupted run resume.
    """
    if table.support is None:
        raise ValueError("support not enumerated; call table.with_support()")
    test_fn = test_fn or smoothing.canonical_phi()
    D = params.D
    if D > MAX_D_EXACT or len(table.support) > MAX_SUPPORT or params.x > MAX_X:
        raise WorkEstimateError(
            f"exact scan guard: need D <= {MAX_D_EXACT}, support <= "
            f"{MAX_SUPPORT}, x <= {MAX_X}; got D = {D}, "
            f"support = {len(table.support)}, x = {params.x}")
    lo = int(D // 2) + 1
    hi = int(D)
    if lo > hi:
        raise EmptyFamilyError(f"empty range ({D/2}, {D}]")
    bounds = [(a, min(a + chunk_size - 1, hi)) for a in range(lo, hi + 1, chunk_size)]

    digest = scan_digest(params, table, params.x)
    done: dict[int, tuple] = {}
    if checkpoint and os.path.exists(checkpoint):
        with open(checkpoint) as fh:
            ck = json.load(fh)
        if ck.get("digest") != digest:
            raise ValueError(f"checkpoint {checkpoint} belongs to a different run")
        done = {int(k): tuple(v) for k, v in ck["chunks"].items()}

    state = _scan_state(params, table, test_fn)
    todo = [i for i in range(len(bounds)) if i not in done]

    def save():
        if checkpoint:
            tmp = checkpoint + ".tmp"
            with open(tmp, "w") as fh:
                json.dump({"digest": digest,
                           "chunks": {str(k): list(v) for k, v in done.items()}},
                          fh)
            os.replace(tmp, checkpoint)

    workers = workers if workers is not None else default_workers()
    if workers > 1 and len(todo) > 1:
        with ProcessPoolExecutor(max_workers=workers, initializer=_init_worker,
                                 initargs=(state,)) as ex:
            for i, res in zip(todo, ex.map(_worker_chunk,
                                           [bounds[i] for i in todo])):
                done[i] = res
                save()
    else:
        for i in todo:
            done[i] = _scan_chunk(*bounds[i], state)
            save()

    denom = math.fsum(done[i][0] for i in range(len(bounds)))
    numer = math.fsum(done[i][1] for i in range(len(bounds)))
    best = min((done[i][2], done[i][3]) for i in range(len(bounds)))
    count = sum(done[i][4] for i in range(len(bounds)))
    return FamilyScan(denom, numer, best[0], best[1], count, len(bounds))


def denominator_exact(params: ResonatorParams, table: CoefficientTable,
                      **kw) -> float:
    """Brute-force Den = sum mu^2(2d) R(d)^2 over (D/2, D]."""
    return scan_family(params, table, **kw).denom


def denominator_asymptotic(params: ResonatorParams, table: CoefficientTable) -> float:
    """(2/pi^2) D * prod over the low band of (1 + r'(p)^2)."""
    prod = 1.0
    for p in table.pminus:
        prod *= 1.0 + resonator.r_prime(p, table) ** 2
    return 2.0 / math.pi**2 * params.D * prod


def numerator_exact(params: ResonatorParams, table: CoefficientTable,
                    **kw) -> float:
    """Num via the d-outer loop: sum mu^2(2d) R(d)^2 T(d)."""
    return scan_family(params, table, **kw).numer


def numerator_exact_triple(params: ResonatorParams, table: CoefficientTable,
                           test_fn: smoothing.TestFunction | None = None) -> float:
    """Tiny-instance oracle: the numerator as the support-outer triple sum

        sum_{l1, l2} r(l1) r(l2) sum_n phi(n/x)/sqrt(n)
            sum_d mu^2(2d) chi_{8d}(l1 l2 n).

    Exponentially slower than the d-outer loop; guarded accordingly.
    """
    if table.support is None:
        raise ValueError("support not enumerated")
    test_fn = test_fn or smoothing.canonical_phi()
    D, x = params.D, params.x
    if D > 500 or len(table.support) > 16 or x > 50:
        raise WorkEstimateError("triple-sum oracle is for tiny instances only")
    lo, hi = int(D // 2) + 1, int(D)
    ds = [d for d in range(lo | 1, hi + 1, 2) if arith.is_squarefree(d)]
    total = []
    for l1, r1 in table.support:
        for l2, r2 in table.support:
            for n in range(1, int(2 * x) + 1):
                w = test_fn.value(n / x)
                if w == 0.0:
                    continue
                csum = sum(arith.kronecker(8 * d, l1 * l2 * n) for d in ds)
                if csum:
                    total.append(r1 * r2 * w / math.sqrt(n) * csum)
    return math.fsum(total)


@dataclass(frozen=True)
class RatioReport:
    N: float
    Den: float
    ratio: float
    sigma1: float
    sigma2: float
    offdiag_bound_observed: float
    extremal_d: int
    extremal_value: float
    admissible: int = 0
    sum_rplus_sq: float = 0.0

    def to_dict(self) -> dict:
        return {
            "N": self.N, "Den": self.Den, "ratio": self.ratio,
            "sigma1": self.sigma1, "sigma2": self.sigma2,
            "offdiag_bound_observed": self.offdiag_bound_observed,
            "extremal_d": self.extremal_d,
            "extremal_value": self.extremal_value,
            "admissible": self.admissible,
            "sum_rplus_sq": self.sum_rplus_sq,
        }


def pigeonhole_extract(params: ResonatorParams, table: CoefficientTable,
                       signs: SignState,
                       test_fn: smoothing.TestFunction | None = None,
                       workers: int | None = None,
                       checkpoint: str | None = None) -> RatioReport:
    """Full ratio pipeline: exact Num and Den, the minimizing discriminant,
    and the sigma diagnostics.  The returned extremal value satisfies the
    exact weighted-average pigeonhole  min <= Num/Den."""
    scan = scan_family(params, table, test_fn=test_fn, workers=workers,
                       checkpoint=checkpoint)
    if scan.denom <= 0.0 or scan.min_d < 0:
        raise EmptyFamilyError("denominator vanishes: no admissible d")
    ratio = scan.numer / scan.denom
    kernel = PartialSumKernel(table, test_fn)
    s1 = sigma1(params, table, signs, kernel)
    s2 = sigma2(params, kernel)
    dasym = denominator_asymptotic(params, table)
    offdiag = abs(scan.denom - dasym) / params.D ** (5.0 / 6.0)
    return RatioReport(
        N=scan.numer, Den=scan.denom, ratio=ratio, sigma1=s1, sigma2=s2,
        offdiag_bound_observed=offdiag, extremal_d=scan.min_d,
        extremal_value=scan.min_value, admissible=scan.admissible,
        sum_rplus_sq=resonator.sum_rplus_squared(table),
    )


# --------------------------------------------------------------------------
# orthogonality and the central-value cross-check
# --------------------------------------------------------------------------

def orthogonality_check(n: int, D: float) -> tuple[float, float, float]:
    """(exact, main, exact - main) for sum_{D/2 < d <= D} mu^2(2d) chi_{8d}(n).

    For odd square n the main term is (3/pi^2) D prod_{p | 2n} p/(p+1);
    for nonsquare n the main term is 0 and the exact value is the measured
    fluctuation.  Even n give 0 identically (the character kills them).
    """
    n = int(n)
    if n < 1:
        raise ValueError("need n >= 1")
    lo, hi = int(D // 2) + 1, int(D)
    exact = 0.0
    if n % 2 == 1:
        tab = _char_table(n)
        parts = []
        for a in range(lo, hi + 1, arith.SEGMENT):
            b = min(a + arith.SEGMENT - 1, hi)
            d = np.arange(a | 1, b + 1, 2, dtype=np.int64)
            if d.size == 0:
                continue
            sf = arith.squarefree_sieve(a, b)[d - a].astype(bool)
            d = d[sf]
            parts.append(float(np.sum(tab[(8 * d) % n], dtype=np.int64)))
        exact = math.fsum(parts)
    main = 0.0
    root = math.isqrt(n)
    if n % 2 == 1 and root * root == n:
        main = 3.0 / math.pi**2 * D
        for p, _ in arith.factorize(2 * n).factors:
            main *= p / (p + 1.0)
    return exact, main, exact - main


@dataclass(frozen=True)
class AfeValue:
    value: float
    tail_bound: float
    terms: int


def _chi8d_values(d: int, nmax: int) -> np.ndarray:
    """chi_{8d}(n) for n = 1..nmax, via multiplicativity over a spf table."""
    m = 8 * d
    spf = arith.smallest_prime_factor(nmax)
    chi = np.zeros(nmax + 1, dtype=np.int8)
    chi[1] = 1
    for n in range(2, nmax + 1):
        p = int(spf[n])
        # the character is completely multiplicative
        chi[n] = arith.kronecker(m, p) * int(chi[n // p])
    return chi


def afe_central_value(d: int, v_weight=None) -> AfeValue:
    """Smoothed central value for conductor 8d:

        2 sum_{n <= sqrt(q) log q} chi_{8d}(n) / sqrt(n) * V(n sqrt(pi/q)).

    The reported tail bound majorizes the discarded terms by the integral
    of V along the cutoff.
    """
    arith.check_2d_squarefree(d)
    V = v_weight or smoothing.afe_weight_V
    q = 8 * d
    nmax = int(math.sqrt(q) * math.log(q))
    chi = _chi8d_values(d, max(nmax, 1))
    scale = math.sqrt(math.pi / q)
    terms = [
        int(chi[n]) / math.sqrt(n) * V(scale * n)
        for n in range(1, nmax + 1, 2)
        if chi[n]
    ]
    value = 2.0 * math.fsum(terms)
    tail, _ = quad(lambda t: V(scale * t) / math.sqrt(t), nmax, 10 * nmax + 100,
                   limit=200)
    return AfeValue(value, 2.0 * tail, nmax)


_BERN = (1 / 6, -1 / 30, 1 / 42, -1 / 30, 5 / 66, -691 / 2730, 7 / 6)


def _hurwitz_half(x: np.ndarray, N: int = 24, K: int = 6) -> np.ndarray:
    """zeta(1/2, x) by Euler-Maclaurin, vectorized over 0 < x <= 1."""
    s = 0.5
    k = np.arange(N)[:, None]
    base = np.sum((k + x[None, :]) ** (-s), axis=0)
    w = N + x
    out = base + w ** (1 - s) / (s - 1) + 0.5 * w ** (-s)
    poch = s
    fact = 1.0
    for j in range(1, K + 1):
        fact *= (2 * j - 1) * (2 * j)
        out += _BERN[j - 1] / fact * poch * w ** (-s - 2 * j + 1)
        poch *= (s + 2 * j - 1) * (s + 2 * j)
    return out


def dirichlet_l_half(d: int) -> float:
    """Independent oracle for L(1/2, chi_{8d}): the Dirichlet series summed
    by residue classes mod q = 8d, with each class's tail handled by
    partial summation in Euler-Maclaurin form (Hurwitz values at 1/2)."""
    arith.check_2d_squarefree(d)
    q = 8 * d
    chi = np.array([arith.kronecker(q, a) for a in range(q)], dtype=np.float64)
    a = np.nonzero(chi)[0]
    hz = _hurwitz_half(a / q)
    return q**-0.5 * math.fsum((chi[a] * hz).tolist())
